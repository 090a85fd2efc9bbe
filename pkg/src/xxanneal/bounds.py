"""Analytic feasibility bounds for the XX-driver strength.

Four closed-form bounds (uniform weight w = 1, uniform clique size n_c)
delimit the window of workable J_xx values:

* lift  = 2 (m / m_g) Gamma2          -- lower: raise the local-minima branch
                                         enough to clear the global one;
* steer = 4/(n_c-1) [m_r (J_zz-1)+1]  -- lower: keep the spin-0 shelf below
                                         the dependent-set sink during Stage 1;
* sep   = 2 (Gamma2 - 1)              -- upper: block-order reversal must wait
                                         until Stage 2;
* sink  = sep + 2 m_r J_zz / n_c      -- upper (shared structure only): the
                                         spin-0 shelf must not undercut the
                                         global branch at the end.

The witness value J_xx = 2(m-1) sits inside the window whenever m >= 3,
m_r >= 2 and J_zz is at most the steering penalty bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .instances import DISJOINT, SHARED, GicInstance
from .schedule import StageConfig

__all__ = [
    "BoundsReport",
    "FeasibilityVerdict",
    "jxx_bounds",
    "jzz_steer_bound",
    "jzz_practical",
    "feasibility_check",
]


@dataclass(frozen=True)
class BoundsReport:
    """The four J_xx bounds plus the J_zz conditions at one parameter point."""

    jxx_lift: float
    jxx_steer: float
    jxx_sep: float
    jxx_sink: float  # +inf for the disjoint structure
    jzz_steer: float
    jzz_inter_flag: bool  # J_zz <= jzz_steer (proxy for "J_zz small vs m")
    witness: float  # 2(m-1)

    @property
    def lower(self) -> float:
        return max(self.jxx_lift, self.jxx_steer)

    @property
    def upper(self) -> float:
        return min(self.jxx_sep, self.jxx_sink)

    @property
    def window(self) -> tuple[float, float] | None:
        return (self.lower, self.upper) if self.lower <= self.upper else None

    def violated(self, jxx: float, tol: float = 0.0) -> tuple[str, ...]:
        """Names of the bounds a given J_xx fails (empty = inside window)."""
        out = []
        if jxx < self.jxx_lift - tol:
            out.append("lift")
        if jxx < self.jxx_steer - tol:
            out.append("steer")
        if jxx > self.jxx_sep + tol:
            out.append("sep")
        if jxx > self.jxx_sink + tol:
            out.append("sink")
        return tuple(out)


def jxx_bounds(m: int, m_r: int, m_g: int, n_c: int, gamma2: float,
               jzz: float, structure: str = SHARED) -> BoundsReport:
    """Evaluate the four bounds for uniform clique size n_c and weight 1.

    For non-uniform sizes call twice with the min and max size and combine
    conservatively.
    """
    if min(m, m_r, m_g) < 1 or gamma2 <= 0 or jzz <= 0:
        raise ValueError("all bound parameters must be positive")
    if n_c < 2:
        raise ValueError("steer bound undefined for n_c = 1")
    if structure not in (DISJOINT, SHARED):
        raise ValueError(f"unknown structure {structure!r}")
    lift = 2.0 * (m / m_g) * gamma2
    steer = 4.0 / (n_c - 1) * (m_r * (jzz - 1.0) + 1.0)
    sep = 2.0 * (gamma2 - 1.0)
    sink = sep + 2.0 * m_r * jzz / n_c if structure == SHARED else math.inf
    jsteer = jzz_steer_bound(m, m_r, n_c)
    return BoundsReport(
        jxx_lift=lift,
        jxx_steer=steer,
        jxx_sep=sep,
        jxx_sink=sink,
        jzz_steer=jsteer,
        jzz_inter_flag=jzz <= jsteer,
        witness=2.0 * (m - 1),
    )


def jzz_steer_bound(m: int, m_r: int, n_c: int) -> float:
    """Largest plain-edge penalty keeping the steer bound at or below the
    witness 2(m-1): 1 + ((n_c-1)(m-1) - 2) / (2 m_r).

    Derived under m >= 3, m_r >= 2; outside that range the value is advisory.
    """
    if m_r < 1:
        raise ValueError("m_r must be >= 1")
    return 1.0 + ((n_c - 1) * (m - 1) - 2.0) / (2.0 * m_r)


def jzz_practical(n_c: int) -> float:
    """Relaxed practical penalty choice 1 + (sqrt(n_c) + 1)/2."""
    return 1.0 + (math.sqrt(n_c) + 1.0) / 2.0


@dataclass(frozen=True)
class FeasibilityVerdict:
    report: BoundsReport
    jxx: float
    feasible: bool  # witness inside the window
    jxx_ok: bool  # the queried J_xx satisfies all four bounds
    violated: tuple[str, ...]
    bearing: bool  # sum_i sqrt(n_i) > m_g: an anti-crossing to dissolve exists


def feasibility_check(inst: GicInstance, cfg: StageConfig,
                      jxx: float | None = None) -> FeasibilityVerdict:
    """Feasibility-window decision for an instance under a schedule config.

    The queried J_xx defaults to the schedule's Stage-1 coupling.  `bearing`
    is False when the instance has no anti-crossing to dissolve (the bounds
    are then vacuous but still reported).
    """
    if inst.uniform_weight is None or inst.uniform_weight != 1.0:
        raise ValueError("feasibility bounds assume uniform weight 1")
    sizes = set(inst.sizes)
    if len(sizes) != 1:
        raise ValueError("feasibility bounds assume uniform clique size")
    if jxx is None:
        jxx = cfg.jxx
    report = jxx_bounds(inst.m, inst.m_r, inst.m_g, inst.n_c, cfg.gamma2,
                        inst.jzz, inst.structure)
    violated = report.violated(jxx)
    window = report.window
    feasible = window is not None and window[0] <= report.witness <= window[1]
    return FeasibilityVerdict(
        report=report,
        jxx=jxx,
        feasible=feasible,
        jxx_ok=not violated,
        violated=violated,
        bearing=inst.anticrossing_bearing,
    )
