"""Structural analysis of XX-driver quantum annealing for maximum independent set.

The package builds annealing Hamiltonians for structured MIS instances
(families of independent cliques attached to a remainder set R) in several
bases, decomposes them into angular-momentum blocks, evaluates the analytic
feasibility bounds on the XX coupling strength, and runs spectral sweeps with
anti-crossing detection, structural-steering and negative-amplitude
diagnostics.

Operator conventions used throughout (collective spin-1/2 normalization):

* transverse term:  x * (-1/2 sum_i sigma^x_i)   -> a single bit flip
  contributes a matrix element of -x/2;
* XX driver:        jxx * (1/4 sum_{(i,j)} sigma^x_i sigma^x_j) -> a
  two-vertex hop contributes +jxx/4;
* problem term:     p * [ sum_i (-w_i) n_i + sum_{(i,j)} J_ij n_i n_j ]
  with n_i = occupation projector of vertex i.

Basis ordering: computational and low-energy bases are ascending (the empty
configuration is index 0); angular-momentum, Dicke and block bases are
descending in occupation (fully-occupied label first), which is the order the
closed-form block matrices are usually written in.
"""

from . import analysis, blocks, bounds, hamiltonians, instances, linalg, schedule
from . import cli

__version__ = "0.1.0"

__all__ = [
    "analysis",
    "blocks",
    "bounds",
    "cli",
    "hamiltonians",
    "instances",
    "linalg",
    "schedule",
]
