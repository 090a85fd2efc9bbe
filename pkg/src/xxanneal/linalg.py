"""Dense real-symmetric eigen-substrate with residual checks and gauge fixing.

Everything downstream (block reconstruction, sweeps, localization traces)
depends on two conventions fixed here:

* gauge: an eigenvector's largest-magnitude entry is made positive, ties
  broken by lowest index;
* degeneracy/tracking: within a near-degenerate cluster (or across sweep grid
  points) the returned vector maximizes |<reference, v>| for a caller-supplied
  reference vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

__all__ = [
    "DenseOperator",
    "EigenSystem",
    "LinalgError",
    "sym_eigen",
    "ground_state",
    "conjugate",
    "gauge_fix",
    "direct_sum",
    "as_matrix",
    "DIM_CAP",
]

DIM_CAP = 16384
_SYM_RTOL = 1e-12
_RESID_RTOL = 1e-10


class LinalgError(RuntimeError):
    pass


@dataclass
class DenseOperator:
    """Real symmetric matrix with a labeled basis."""

    mat: np.ndarray
    basis: str = "custom"  # computational | low_energy | angular | dicke | custom
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        self.mat = np.asarray(self.mat, dtype=float)
        if self.mat.ndim != 2 or self.mat.shape[0] != self.mat.shape[1]:
            raise LinalgError(f"expected a square matrix, got shape {self.mat.shape}")
        if self.labels and len(self.labels) != self.mat.shape[0]:
            raise LinalgError("label count does not match dimension")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


@dataclass
class EigenSystem:
    values: np.ndarray  # ascending
    vectors: np.ndarray  # orthonormal columns, vectors[:, k] <-> values[k]


def as_matrix(op) -> np.ndarray:
    return op.mat if isinstance(op, DenseOperator) else np.asarray(op, dtype=float)


def _check_symmetric(a: np.ndarray) -> None:
    scale = np.abs(a).max() if a.size else 0.0
    if scale == 0.0:
        return
    if np.abs(a - a.T).max() > max(_SYM_RTOL * scale, 1e-300):
        raise LinalgError("matrix is not symmetric")


def sym_eigen(op, k: int | None = None) -> EigenSystem:
    """Lowest-k eigenpairs (default: all) of a real symmetric operator.

    Residual and orthonormality are verified on every call:
    ||A v - lambda v|| <= 1e-10 ||A|| and V^T V = I to 1e-10.
    """
    a = as_matrix(op)
    n = a.shape[0]
    if n > DIM_CAP:
        raise LinalgError(f"dimension {n} exceeds cap {DIM_CAP}")
    _check_symmetric(a)
    if k is None or k >= n:
        vals, vecs = np.linalg.eigh(a)
    else:
        if k < 1:
            raise LinalgError("k must be >= 1")
        vals, vecs = scipy.linalg.eigh(a, subset_by_index=(0, k - 1))
    norm_a = np.linalg.norm(a, 2) if n <= 64 else np.abs(a).sum(axis=1).max()
    tol = _RESID_RTOL * max(norm_a, 1.0)
    resid = np.abs(a @ vecs - vecs * vals[None, :]).max() if vals.size else 0.0
    if resid > tol:
        raise LinalgError(f"eigen residual {resid:.3e} exceeds {tol:.3e}")
    gram = vecs.T @ vecs
    if np.abs(gram - np.eye(gram.shape[0])).max() > 1e-10:
        raise LinalgError("eigenvectors not orthonormal to 1e-10")
    return EigenSystem(values=vals, vectors=vecs)


def gauge_fix(vec: np.ndarray) -> np.ndarray:
    """Flip the sign so the largest-magnitude entry is positive (ties: lowest index)."""
    v = np.asarray(vec, dtype=float)
    i = int(np.argmax(np.abs(v)))
    return -v if v[i] < 0 else v.copy()


def ground_state(op, reference: np.ndarray | None = None,
                 degeneracy_tol: float = 1e-10):
    """Lowest eigenpair with gauge fixing and degeneracy resolution.

    Within the cluster of eigenvalues lying within `degeneracy_tol` of the
    smallest, the vector maximizing overlap with `reference` is selected (and,
    when a reference is given, the in-cluster linear combination aligned with
    it); without a reference the first cluster vector is used.
    """
    es = sym_eigen(op)
    vals, vecs = es.values, es.vectors
    cluster = np.nonzero(vals <= vals[0] + degeneracy_tol)[0]
    if reference is not None and len(cluster) > 1:
        basis = vecs[:, cluster]
        coeff = basis.T @ np.asarray(reference, dtype=float)
        nrm = np.linalg.norm(coeff)
        if nrm > 1e-12:
            v = basis @ (coeff / nrm)
        else:
            v = basis[:, 0]
    elif reference is not None:
        overlaps = np.abs(vecs[:, cluster].T @ np.asarray(reference, dtype=float))
        v = vecs[:, cluster[int(np.argmax(overlaps))]]
    else:
        v = vecs[:, cluster[0]]
    return float(vals[0]), gauge_fix(v)


def conjugate(op, u: np.ndarray) -> DenseOperator:
    """U^T A U for a matrix U with orthonormal columns (checked to 1e-10)."""
    a = as_matrix(op)
    u = np.asarray(u, dtype=float)
    if u.ndim != 2 or u.shape[0] != a.shape[0]:
        raise LinalgError(f"shape mismatch: A is {a.shape}, U is {u.shape}")
    gram = u.T @ u
    if np.abs(gram - np.eye(u.shape[1])).max() > 1e-10:
        raise LinalgError("U columns are not orthonormal to 1e-10")
    out = u.T @ a @ u
    out = (out + out.T) / 2.0  # kill rounding asymmetry
    return DenseOperator(out, basis="custom")


def direct_sum(*mats: np.ndarray) -> np.ndarray:
    mats = [np.atleast_2d(np.asarray(m, dtype=float)) for m in mats]
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n))
    at = 0
    for m in mats:
        d = m.shape[0]
        out[at:at + d, at:at + d] = m
        at += d
    return out
