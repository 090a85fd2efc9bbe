"""Annealing schedules: the preparation stage and the two-stage main run.

Stage 0 ramps the transverse field from Gamma0 down to Gamma1 while the
problem term and the XX driver are switched on linearly.  The main run keeps
the driver constant at J_xx = alpha*Gamma2 until the separation time
t_sep = 1 - Gamma2/Gamma1 and then lets it decay proportionally to the
transverse field, jxx = alpha*x:

    x(t)   = (1 - t) * Gamma1
    jxx(t) = J_xx            for t <= t_sep      (Stage 1)
           = alpha * x(t)    for t >  t_sep      (Stage 2)

Defaults follow the uniform-clique convention Gamma2 = m, Gamma1 = K*Gamma2
(K = 2 by default), Gamma0 = 2*Gamma1 and alpha = 2(m-1)/m, which places
J_xx = 2(m-1) at the feasibility-window witness value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "StageConfig",
    "IterationConfig",
    "default_config",
    "stage0_params",
    "main_params",
    "iter_params",
    "iteration_config",
    "resolve_jzz_clique",
]


@dataclass(frozen=True)
class StageConfig:
    gamma2: float
    gamma1: float
    gamma0: float
    alpha: float

    def __post_init__(self):
        if not (self.gamma0 > self.gamma1 > self.gamma2 > 0):
            raise ValueError(
                f"need gamma0 > gamma1 > gamma2 > 0, got "
                f"({self.gamma0}, {self.gamma1}, {self.gamma2})"
            )
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")

    @property
    def jxx(self) -> float:
        return self.alpha * self.gamma2

    @property
    def t_sep(self) -> float:
        return 1.0 - self.gamma2 / self.gamma1


def default_config(m: int, gamma2: float | None = None, gamma1_factor: float = 2.0,
                   alpha: float | None = None, jxx: float | None = None) -> StageConfig:
    """Standard configuration for an m-clique instance.

    Exactly one of `alpha` / `jxx` may be given; with neither, the witness
    coupling J_xx = 2(m-1) is used.
    """
    if gamma2 is None:
        gamma2 = float(m)
    if alpha is not None and jxx is not None:
        raise ValueError("give alpha or jxx, not both")
    if alpha is None:
        alpha = (2.0 * (m - 1) / m) if jxx is None else jxx / gamma2
    gamma1 = gamma1_factor * gamma2
    return StageConfig(gamma2=gamma2, gamma1=gamma1, gamma0=2.0 * gamma1, alpha=alpha)


def _check_t(t: float) -> None:
    if not (0.0 <= t <= 1.0):
        raise ValueError(f"t = {t} outside [0, 1]")


def stage0_params(cfg: StageConfig, t: float) -> tuple[float, float, float]:
    """(x, jxx, p) on the preparation stage: x from Gamma0 to Gamma1, jxx and
    the problem term ramped linearly."""
    _check_t(t)
    x = (1.0 - t) * (cfg.gamma0 - cfg.gamma1) + cfg.gamma1
    return x, t * cfg.jxx, t


def main_params(cfg: StageConfig, t: float) -> tuple[float, float]:
    """(x, jxx) on the main two-stage run; jxx is continuous at t_sep."""
    _check_t(t)
    x = (1.0 - t) * cfg.gamma1
    jxx = cfg.jxx if t <= cfg.t_sep else cfg.alpha * x
    return x, jxx


# ---------------------------------------------------------------------------
# multi-driver iteration schedules


@dataclass(frozen=True)
class IterationConfig:
    """Per-iteration driver parameters sharing one global transverse ramp.

    Iteration k switches from constant J_xx^(k) to the decaying branch when
    the global x falls below its own Gamma2^(k).
    """

    gamma1: float
    gamma2s: tuple[float, ...]
    alphas: tuple[float, ...]
    jzzs: tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.gamma2s) != len(self.alphas):
            raise ValueError("need one alpha per iteration")
        if self.gamma1 < 2.0 * max(self.gamma2s):
            raise ValueError("gamma1 must be at least 2 * max(gamma2)")

    @property
    def count(self) -> int:
        return len(self.gamma2s)

    def jxx(self, k: int) -> float:
        return self.alphas[k] * self.gamma2s[k]

    def t_sep(self, k: int) -> float:
        return 1.0 - self.gamma2s[k] / self.gamma1


def iteration_config(ms: list[int], n_cs: list[int], k_factor: float = 2.0) -> IterationConfig:
    """Defaults for iterated drivers on clique families of sizes ms:
    Gamma2^(k) = m_k, alpha_k = 2(m_k - 1)/m_k, Gamma1 = K * max Gamma2,
    J_zz^(k) = 1 + (sqrt(n_c^(k)) + 1)/2."""
    gamma2s = tuple(float(m) for m in ms)
    alphas = tuple(2.0 * (m - 1) / m for m in ms)
    jzzs = tuple(1.0 + (math.sqrt(nc) + 1.0) / 2.0 for nc in n_cs)
    return IterationConfig(gamma1=k_factor * max(gamma2s), gamma2s=gamma2s,
                           alphas=alphas, jzzs=jzzs)


def iter_params(icfg: IterationConfig, t: float, k: int) -> tuple[float, float]:
    """(x, jxx_k) for iteration k at global time t."""
    _check_t(t)
    if not (0 <= k < icfg.count):
        raise ValueError(f"iteration index {k} out of range")
    x = (1.0 - t) * icfg.gamma1
    g2 = icfg.gamma2s[k]
    jxx = icfg.jxx(k) if x >= g2 else icfg.alphas[k] * x
    return x, jxx


def resolve_jzz_clique(cfg: StageConfig, m_g: int,
                       override: float | None = None) -> float:
    """Intra-clique penalty default 50*(Gamma1 + J_xx + m_g) (schedule-scale
    stand-in for the required high-energy separation), unless overridden."""
    if override is not None:
        return override
    return 50.0 * (cfg.gamma1 + cfg.jxx + m_g)
