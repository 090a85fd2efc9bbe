"""Schedule sweeps and structural diagnostics.

Everything here walks the annealing schedule and reports structure: lowest-k
spectra, closed-form bare-energy curves, anti-crossing detection and
classification, Stage-1 steering localization on the symmetric subspace,
negative-amplitude statistics of the tracked ground state, the M/D block
certificate for the sign pattern, the minimal three-vertex interference
model, and the iterative multi-family demonstration.

CSV emission lives here too; all floats are written with 17 significant
digits so downstream consumers can round-trip them bit-exactly.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import blocks
from .blocks import b_eigen, bare_spectrum, inner_blocks, symmetric_hc
from .hamiltonians import (
    ActiveModel,
    active_model,
    sector_eigenvalues,
)
from .instances import SHARED, CompositeInstance, GicInstance, fmt_float
from .linalg import DenseOperator, as_matrix, sym_eigen
from .schedule import IterationConfig, StageConfig, iter_params, main_params

__all__ = [
    "AnalysisError",
    "SpectrumTrace",
    "LocalizationTrace",
    "CrossingReport",
    "MdForm",
    "V3Bundle",
    "IterationResult",
    "default_grid",
    "sweep",
    "spectrum_trace",
    "gap_function",
    "min_gap",
    "bare_curves",
    "bare_curve_functions",
    "detect_anticrossing",
    "localization",
    "negativity",
    "negativity_instance",
    "md_block_form",
    "v3_model",
    "iterate_demo",
    "write_csv",
    "write_spectrum_csv",
    "write_bare_csv",
    "write_localization_csv",
    "write_negativity_csv",
    "write_v3_csv",
]

NEG_TOL = 1e-12  # amplitude below -NEG_TOL counts as negative


class AnalysisError(RuntimeError):
    """Numeric analysis left its validity regime."""


def default_grid(n: int = 401) -> np.ndarray:
    return np.linspace(0.0, 1.0, n)


def _workers() -> int:
    env = os.environ.get("ANNEAL_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


@dataclass
class SpectrumTrace:
    """Lowest-k levels over a schedule grid.

    For sweep output, levels are sorted ascending per grid point.  For tagged
    traces (bare curves) each column is one named curve and columns may cross.
    """

    grid: np.ndarray
    levels: np.ndarray  # shape (T, k)
    tags: tuple[str, ...] | None = None
    vectors: list[np.ndarray] | None = None  # tracked ground vectors


def _track(prev: np.ndarray | None, values: np.ndarray, vectors: np.ndarray,
           degeneracy_tol: float = 1e-9) -> np.ndarray:
    """Max-overlap continuity rule: pick, within the lowest near-degenerate
    cluster, the eigenvector best aligned with the previous one."""
    cluster = np.where(values - values[0] <= degeneracy_tol)[0]
    if prev is None or len(cluster) == 1:
        v = vectors[:, 0]
    else:
        overlaps = np.abs(prev @ vectors[:, cluster])
        v = vectors[:, cluster[int(np.argmax(overlaps))]]
    if prev is not None and float(prev @ v) < 0.0:
        v = -v
    elif prev is None and float(np.sum(v)) < 0.0:
        v = -v
    return v


def sweep(provider, grid, k: int = 2) -> SpectrumTrace:
    """Diagonalize provider(t) on the grid and track the ground vector.

    Grid points fan out over ANNEAL_THREADS workers; results are merged in
    grid order and the continuity-based tracking runs as a sequential pass.
    """
    grid = np.asarray(grid, dtype=float)
    if k < 1:
        raise ValueError("k must be >= 1")

    def solve(t):
        op = provider(t)
        es = sym_eigen(op, k=max(k, 2))
        return np.asarray(es.values), np.asarray(es.vectors)

    workers = _workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve, grid))
    else:
        results = [solve(t) for t in grid]

    levels = np.array([vals[:k] for vals, _vecs in results])
    tracked: list[np.ndarray] = []
    prev = None
    for vals, vecs in results:
        v = _track(prev, vals, vecs)
        tracked.append(v)
        prev = v
    return SpectrumTrace(grid=grid, levels=levels, vectors=tracked)


def spectrum_trace(inst: GicInstance, cfg: StageConfig, grid,
                   k: int = 2) -> SpectrumTrace:
    """Values-only lowest-k trace along the main schedule, computed through
    the exact symmetry-sector decomposition (fast at large dimensions)."""
    grid = np.asarray(grid, dtype=float)

    def values(t):
        x, jxx = main_params(cfg, t)
        return sector_eigenvalues(inst, x, jxx, k=k)

    workers = _workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(values, grid))
    else:
        rows = [values(t) for t in grid]
    return SpectrumTrace(grid=grid, levels=np.array(rows))


def gap_function(inst: GicInstance, cfg: StageConfig):
    """t -> E1(t) - E0(t) on the low-energy spectrum (sector-exact)."""

    def gap(t: float) -> float:
        x, jxx = main_params(cfg, t)
        vals = sector_eigenvalues(inst, x, jxx, k=2)
        return float(vals[1] - vals[0])

    return gap


def min_gap(gap_fn, t_lo: float, t_hi: float, n: int = 401,
            refine: bool = True) -> tuple[float, float]:
    """(gap_min, t_at_min) of a gap callable on [t_lo, t_hi]; the coarse
    minimum is refined on a 10x denser grid in a +-0.02 window."""
    ts = np.linspace(t_lo, t_hi, n)
    gaps = np.array([gap_fn(t) for t in ts])
    i = int(np.argmin(gaps))
    best_t, best_g = float(ts[i]), float(gaps[i])
    if refine and n >= 2:
        step = (t_hi - t_lo) / (n - 1)
        lo = max(t_lo, best_t - 0.02)
        hi = min(t_hi, best_t + 0.02)
        fine = np.clip(np.arange(lo, hi + step / 20.0, step / 10.0), t_lo, t_hi)
        for t in fine:
            g = gap_fn(float(t))
            if g < best_g:
                best_g, best_t = float(g), float(t)
    return best_g, best_t


# ---------------------------------------------------------------------------
# bare curves


def _bare_point(inst: GicInstance, x: float, jxx: float):
    """(E_LM, E_GM, E_AS0) closed forms at one (x, jxx) point."""
    weights = [c.weight for c in inst.cliques]
    e_lm, _all, theta_sum = bare_spectrum(inst.sizes, weights, x, jxx)
    # GM vertices are singletons of the induced subgraph: no XX edges touch it
    e_gm = inst.m_r * b_eigen(inst.r_weight, x)[0]
    if inst.structure == SHARED:
        e_gm += sum(b_eigen(c.weight, x)[0] for c in inst.cliques)
    f_q = sum((1.0 / n if inst.structure == SHARED else 1.0)
              for n in inst.sizes)
    e_as0 = theta_sum + inst.m_r * b_eigen(inst.r_weight - inst.jzz * f_q, x)[0]
    return e_lm, e_gm, e_as0


def bare_curves(inst: GicInstance, cfg: StageConfig, grid) -> SpectrumTrace:
    """Tagged closed-form curves: LM branch, GM branch, all-spin-0 shelf."""
    grid = np.asarray(grid, dtype=float)
    rows = []
    for t in grid:
        x, jxx = main_params(cfg, t)
        rows.append(_bare_point(inst, x, jxx))
    return SpectrumTrace(grid=grid, levels=np.array(rows),
                         tags=("bare-LM", "bare-GM", "AS0"))


def bare_curve_functions(inst: GicInstance, cfg: StageConfig):
    """(lm_fn, gm_fn, as0_fn) callables of t, for bisection-grade detection."""

    def lm(t):
        x, jxx = main_params(cfg, t)
        return _bare_point(inst, x, jxx)[0]

    def gm(t):
        x, jxx = main_params(cfg, t)
        return _bare_point(inst, x, jxx)[1]

    def as0(t):
        x, jxx = main_params(cfg, t)
        return _bare_point(inst, x, jxx)[2]

    return lm, gm, as0


# ---------------------------------------------------------------------------
# anti-crossing detection


@dataclass(frozen=True)
class CrossingReport:
    """One bare-level crossing (or the no-crossing summary).

    classification: 'none' when the tagged bare difference never changes
    sign; otherwise 'tunneling' (both levels in one block), 'block-level'
    (distinct blocks), or 'interference-involved' (the tracked upper level
    mixes blocks).  small_gap records whether the local gap minimum is below
    the caller's threshold.
    """

    t_star: float | None
    gap_min: float
    t_gap_min: float
    classification: str
    small_gap: bool


def _as_function(obj, grid):
    if callable(obj):
        return obj
    arr = np.asarray(obj, dtype=float)
    if grid is None or len(arr) != len(grid):
        raise ValueError("array trace needs a grid of equal length")
    g = np.asarray(grid, dtype=float)

    def f(t):
        return float(np.interp(t, g, arr))

    return f


def detect_anticrossing(bare_l, bare_r, gap_trace, gap_threshold: float,
                        grid=None, blocks_tags: tuple[str, str] = ("C", "C"),
                        mixture_overlap=None, t_lo: float = 0.0,
                        t_hi: float = 1.0, scan_points: int = 401,
                        bisect_tol: float = 1e-6) -> list[CrossingReport]:
    """Locate bare-level crossings and classify the associated gap feature.

    bare_l/bare_r/gap_trace may be callables of t or arrays over `grid`.
    Crossing roots are refined by bisection to 1e-6 in t; around each root
    the gap is minimized on a 10x-refined +-0.02 window.  mixture_overlap, if
    given, maps t to the tracked first-excited vector's weight on each block;
    both weights > 0.1 classifies the crossing as interference-involved.
    """
    f_l = _as_function(bare_l, grid)
    f_r = _as_function(bare_r, grid)
    f_gap = _as_function(gap_trace, grid)
    if grid is not None:
        ts = np.asarray(grid, dtype=float)
        t_lo, t_hi = float(ts[0]), float(ts[-1])
    else:
        ts = np.linspace(t_lo, t_hi, scan_points)

    def diff(t):
        return f_l(t) - f_r(t)

    d = np.array([diff(t) for t in ts])
    roots = []
    for i in range(len(ts) - 1):
        if d[i] == 0.0 and (i == 0 or d[i - 1] != 0.0):
            roots.append(float(ts[i]))
        elif d[i] * d[i + 1] < 0.0:
            a, b = float(ts[i]), float(ts[i + 1])
            fa = d[i]
            while b - a > bisect_tol:
                mid = 0.5 * (a + b)
                fm = diff(mid)
                if fm == 0.0:
                    a = b = mid
                    break
                if fa * fm < 0.0:
                    b = mid
                else:
                    a, fa = mid, fm
            roots.append(0.5 * (a + b))

    if not roots:
        g = np.array([f_gap(t) for t in ts])
        i = int(np.argmin(g))
        return [CrossingReport(None, float(g[i]), float(ts[i]), "none",
                               bool(g[i] <= gap_threshold))]

    out = []
    step = (t_hi - t_lo) / max(1, len(ts) - 1)
    for t_star in roots:
        lo = max(t_lo, t_star - 0.02)
        hi = min(t_hi, t_star + 0.02)
        window = np.clip(np.arange(lo, hi + step / 20.0, step / 10.0),
                         t_lo, t_hi)
        gaps = np.array([f_gap(float(t)) for t in window])
        i = int(np.argmin(gaps))
        gap_min, t_gap = float(gaps[i]), float(window[i])
        if blocks_tags[0] == blocks_tags[1]:
            cls = "tunneling"
        else:
            cls = "block-level"
        if mixture_overlap is not None:
            o1, o2 = mixture_overlap(t_gap)
            if min(o1, o2) > 0.1:
                cls = "interference-involved"
        out.append(CrossingReport(t_star, gap_min, t_gap, cls,
                                  bool(gap_min <= gap_threshold)))
    return out


# ---------------------------------------------------------------------------
# Stage-1 steering localization


@dataclass
class LocalizationTrace:
    """Ground-state weight distribution over the R-inner blocks.

    weights[t, l]    weight at L up-count l (the R-inner block H_R^(l));
    cum[t, j]        cumulative weight over the j+1 lowest-energy blocks;
    order[t]         block indices l sorted by block ground energy;
    wl0[t]           weight on the R-empty L-inner block H_L^(0).
    """

    grid: np.ndarray
    weights: np.ndarray  # (T, m+1)
    cum: np.ndarray  # (T, m+1)
    order: np.ndarray  # (T, m+1) int
    wl0: np.ndarray  # (T,)


def localization(inst: GicInstance, cfg: StageConfig, grid,
                 depth: int | None = None) -> LocalizationTrace:
    """Track the symmetric-subspace ground state of the same-sign block and
    report its localization over energy-ordered R-inner blocks."""
    sizes = set(inst.sizes)
    if len(sizes) != 1:
        raise ValueError("symmetric-subspace localization needs uniform sizes")
    if inst.uniform_weight is None:
        raise ValueError("symmetric-subspace localization needs uniform weights")
    n_c = inst.n_c
    w = inst.uniform_weight
    m, m_r = inst.m, inst.m_r
    grid = np.asarray(grid, dtype=float)

    weights = np.zeros((len(grid), m + 1))
    cum = np.zeros_like(weights)
    order = np.zeros((len(grid), m + 1), dtype=int)
    wl0 = np.zeros(len(grid))
    prev = None
    for ti, t in enumerate(grid):
        x, jxx = main_params(cfg, t)
        hc = symmetric_hc(m, m_r, n_c, w, x, jxx, inst.jzz, inst.structure)
        es = sym_eigen(hc, k=2)
        v = _track(prev, np.asarray(es.values), np.asarray(es.vectors))
        prev = v
        psi = v.reshape(m + 1, m_r + 1)
        # R-inner block weights: fixed L up-count l lives at Dicke index m - l
        w_l = (psi ** 2).sum(axis=1)[::-1]
        weights[ti] = w_l
        _base, _shift, blks = inner_blocks(hc, m, m_r, "R")
        energies = [float(np.linalg.eigvalsh(b)[0]) for b in blks]
        idx = np.argsort(energies, kind="stable")
        order[ti] = idx
        cum[ti] = np.cumsum(w_l[idx])
        # H_L^(0): the L-inner block with R empty (R Dicke index m_r)
        wl0[ti] = float((psi[:, m_r] ** 2).sum())
    if depth is not None and not (1 <= depth <= m + 1):
        raise ValueError("depth must be in [1, m+1]")
    return LocalizationTrace(grid, weights, cum, order, wl0)


# ---------------------------------------------------------------------------
# negative-amplitude statistics


def _negative_fraction(v: np.ndarray) -> float:
    if float(np.sum(v)) < 0.0:
        v = -v
    neg = v[v < -NEG_TOL]
    return float(np.sum(neg ** 2))


def negativity(provider, grid) -> list[tuple[float, float]]:
    """(t, negative squared-amplitude fraction) of the tracked ground state
    of provider(t), gauge-fixed so the amplitude sum is nonnegative."""
    grid = np.asarray(grid, dtype=float)
    out = []
    prev = None
    for t in grid:
        op = provider(t)
        es = sym_eigen(op, k=min(2, as_matrix(op).shape[0]))
        v = _track(prev, np.asarray(es.values), np.asarray(es.vectors))
        prev = v
        out.append((float(t), _negative_fraction(v)))
    return out


def negativity_instance(inst: GicInstance, cfg: StageConfig,
                        grid) -> list[tuple[float, float]]:
    """Negativity of the low-energy ground state along the main schedule,
    computed in the active contraction (sign statistics are preserved by the
    symmetric expansion).  Errors out if the true ground state ever leaves
    the active sector."""
    grid = np.asarray(grid, dtype=float)
    out = []
    prev = None
    for t in grid:
        x, jxx = main_params(cfg, t)
        model = active_model(inst, x, jxx)
        es = sym_eigen(model.op, k=2)
        e_all = sector_eigenvalues(inst, x, jxx, k=1)
        if not float(es.values[0]) <= float(e_all[0]) + 1e-9:
            raise AnalysisError(
                f"ground state left the active sector at t={t:.6g}")
        v = _track(prev, np.asarray(es.values), np.asarray(es.vectors))
        prev = v
        out.append((float(t), _negative_fraction(v)))
    return out


# ---------------------------------------------------------------------------
# M/D block certificate


@dataclass
class MdForm:
    """Block form [[H_M, V], [V^T, H_D]] of the GM-supporting / dependent
    pair sector, with the sign certificate u_D = -H_D^{-1} V^T u_M."""

    h_m: np.ndarray
    h_d: np.ndarray
    v: np.ndarray
    u_m: np.ndarray
    u_d: np.ndarray
    m_labels: tuple[str, ...]
    d_labels: tuple[str, ...]

    @property
    def assembled(self) -> np.ndarray:
        top = np.hstack([self.h_m, self.v])
        bot = np.hstack([self.v.T, self.h_d])
        return np.vstack([top, bot])


def md_block_form(inst: GicInstance, cfg: StageConfig, t: float,
                  u_m: np.ndarray | None = None) -> MdForm:
    """Restrict the active-basis Hamiltonian to the M states (all of R plus a
    nonempty set of shared vertices) and their XX-flipped dependent partners
    (every occupied shared vertex exchanged for its clique's symmetric
    state).  Valid in Stage 2 for the shared structure; H_D must be positive
    definite there."""
    if inst.structure != SHARED:
        raise ValueError("the M/D certificate applies to the shared structure")
    if inst.m_r < 1:
        raise ValueError("need at least one R vertex")
    x, jxx = main_params(cfg, t)
    model = active_model(inst, x, jxx)
    m = inst.m
    radices = model.radices
    strides = [1] * len(radices)
    for i in range(len(radices) - 2, -1, -1):
        strides[i] = strides[i + 1] * radices[i + 1]

    r_all = sum(strides[m + j] for j in range(inst.m_r))  # every R bit set
    m_idx, d_idx = [], []
    for bits in range(1, 1 << m):  # nonempty shared subsets
        mi = r_all
        di = r_all
        for i in range(m):
            if (bits >> i) & 1:
                mi += 1 * strides[i]
                di += 2 * strides[i]
        m_idx.append(mi)
        d_idx.append(di)

    h = model.op.mat
    h_m = h[np.ix_(m_idx, m_idx)]
    h_d = h[np.ix_(d_idx, d_idx)]
    v = h[np.ix_(m_idx, d_idx)]

    tol = 1e-12
    off_m = h_m - np.diag(np.diag(h_m))
    off_d = h_d - np.diag(np.diag(h_d))
    if off_m.max() > tol or off_d.max() > tol:
        raise AnalysisError("M/D blocks are not stoquastic at this point")
    if v.min() < -tol:
        raise AnalysisError("M/D coupling block has a negative entry")
    dvals = np.linalg.eigvalsh(h_d)
    if dvals[0] <= 0.0:
        raise AnalysisError(
            f"H_D not positive definite at t={t:.6g} (min eig {dvals[0]:.3g})")

    if u_m is None:
        es = sym_eigen(DenseOperator(h_m), k=1)
        u_m = np.asarray(es.vectors)[:, 0]
        if float(np.sum(u_m)) < 0.0:
            u_m = -u_m
        if u_m.min() < -1e-10:
            raise AnalysisError("H_M ground state is not same-sign")
    else:
        u_m = np.asarray(u_m, dtype=float)
        if u_m.min() < 0.0:
            raise ValueError("supplied u_m must be entrywise nonnegative")
    u_d = -np.linalg.solve(h_d, v.T @ u_m)

    labels = model.op.labels
    return MdForm(
        h_m=h_m,
        h_d=h_d,
        v=v,
        u_m=u_m,
        u_d=u_d,
        m_labels=tuple(labels[i] for i in m_idx),
        d_labels=tuple(labels[i] for i in d_idx),
    )


# ---------------------------------------------------------------------------
# three-vertex interference model


V3_COMP_LABELS = ("1a0b1r", "1a0b0r", "0a1b1r", "0a1b0r", "0a0b1r", "0a0b0r")
V3_ANG_LABELS = ("1c1r", "1c0r", "0c1r", "0c0r", "q1r", "q0r")


@dataclass
class V3Bundle:
    """Per-t matrices and tracked amplitudes of the three-vertex model."""

    grid: np.ndarray
    n_c: int
    h_full_comp: np.ndarray  # (T, 6, 6)
    h_full_ang: np.ndarray  # (T, 6, 6)
    h_eff_ang: np.ndarray  # (T, 3, 3)
    h_eff_comp: np.ndarray  # (T, 2, 2)
    alpha: np.ndarray  # (T,)
    beta: np.ndarray  # (T,)
    psi_eff: np.ndarray  # (T, 3) tracked ground of H_eff_ang
    signed_prob_comp: np.ndarray  # (T, 6)
    signed_prob_ang: np.ndarray  # (T, 6)


def _v3_basis_change(n_c: int) -> np.ndarray:
    """U with columns = angular states in the computational V3 ordering."""
    ra = math.sqrt((n_c - 1) / n_c)
    rb = math.sqrt(1.0 / n_c)
    u = np.zeros((6, 6))
    # columns: 1c1r, 1c0r, 0c1r, 0c0r, q1r, q0r
    u[0, 0] = ra  # 1a0b1r in 1c1r
    u[2, 0] = rb
    u[1, 1] = ra
    u[3, 1] = rb
    u[4, 2] = 1.0
    u[5, 3] = 1.0
    u[0, 4] = -rb
    u[2, 4] = ra
    u[1, 5] = -rb
    u[3, 5] = ra
    return u


def _signed_probs(v: np.ndarray) -> np.ndarray:
    if float(np.sum(v)) < 0.0:
        v = -v
    return np.sign(np.where(np.abs(v) <= NEG_TOL, 0.0, v)) * v ** 2


def v3_model(n_c: int, w: float, jzz: float, cfg: StageConfig,
             grid) -> V3Bundle:
    """Assemble the three-vertex model along the main schedule.

    Vertex a stands for the symmetric state of n_c - 1 driver-coupled
    vertices, b for the coupled vertex with no R edge, r for the single R
    vertex.  The angular matrix must equal the conjugated computational one
    to 1e-12 at every point (identity of the basis rotation).
    """
    from .instances import make_gshare

    if n_c < 2:
        raise ValueError("n_c must be >= 2")
    inst = make_gshare(1, [n_c], 1, w=w, jzz=jzz)
    grid = np.asarray(grid, dtype=float)
    u = _v3_basis_change(n_c)
    t_count = len(grid)
    comp = np.zeros((t_count, 6, 6))
    ang = np.zeros((t_count, 6, 6))
    eff_ang = np.zeros((t_count, 3, 3))
    eff_comp = np.zeros((t_count, 2, 2))
    alpha = np.zeros(t_count)
    beta = np.zeros(t_count)
    psi_eff = np.zeros((t_count, 3))
    sp_comp = np.zeros((t_count, 6))
    sp_ang = np.zeros((t_count, 6))

    # computational ordering: active index (digit d, R bit g) -> 5 - (2d + g)
    rev = [5, 4, 3, 2, 1, 0]
    ra = math.sqrt((n_c - 1) / n_c)
    rb = math.sqrt(1.0 / n_c)

    prev6 = None
    prev3 = None
    for ti, t in enumerate(grid):
        x, jxx = main_params(cfg, t)
        model = active_model(inst, x, jxx)
        hc = model.op.mat[np.ix_(rev, rev)]
        # leading 6 angular states (deeper spin-0 levels decouple exactly)
        ha = blocks.block_hamiltonians(inst, x, jxx).assembled.mat[:6, :6]
        if np.abs(ha - u.T @ hc @ u).max() > 1e-12:
            raise AnalysisError("basis rotation identity violated")
        comp[ti] = hc
        ang[ti] = ha
        e_ang = ha[np.ix_([0, 2, 4], [0, 2, 4])]
        e_comp = hc[np.ix_([2, 0], [2, 0])]
        eff_ang[ti] = e_ang
        eff_comp[ti] = e_comp

        es6 = sym_eigen(DenseOperator(hc), k=2)
        v6 = _track(prev6, np.asarray(es6.values), np.asarray(es6.vectors))
        prev6 = v6
        sp_comp[ti] = _signed_probs(v6)
        sp_ang[ti] = _signed_probs(u.T @ v6)

        es3 = sym_eigen(DenseOperator(e_ang), k=2)
        v3 = _track(prev3, np.asarray(es3.values), np.asarray(es3.vectors))
        prev3 = v3
        psi_eff[ti] = v3
        psi_cr, _psi_cbar, psi_qr = v3
        alpha[ti] = psi_cr * rb + psi_qr * ra
        beta[ti] = psi_cr * ra - psi_qr * rb

    return V3Bundle(grid, n_c, comp, ang, eff_ang, eff_comp, alpha, beta,
                    psi_eff, sp_comp, sp_ang)


# ---------------------------------------------------------------------------
# iterative multi-family demonstration


@dataclass
class IterationResult:
    drivers: tuple[int, ...]  # family indices with the XX driver attached
    trace: SpectrumTrace  # tagged bare curves
    crossings: int  # families whose LM curve crosses the GM curve


def _sign_changes(d: np.ndarray) -> int:
    s = np.sign(d[np.abs(d) > 0.0])
    if len(s) < 2:
        return 0
    return int(np.sum(s[1:] != s[:-1]))


def iterate_demo(comp: CompositeInstance, icfg: IterationConfig,
                 grid) -> list[IterationResult]:
    """Bare-curve demonstration of iterative dissolution.

    Iteration j attaches drivers to families 0..j-1; the count of LM/GM bare
    crossings drops by one per added driver.  The GM curve never moves: its
    vertices carry no XX edges.
    """
    if len(comp.families) != icfg.count:
        raise ValueError("iteration config does not match the family count")
    grid = np.asarray(grid, dtype=float)
    results = []
    for j in range(icfg.count + 1):
        levels = np.zeros((len(grid), icfg.count + 1))
        for ti, t in enumerate(grid):
            x = (1.0 - t) * icfg.gamma1
            for k, fam in enumerate(comp.families):
                jxx_k = iter_params(icfg, t, k)[1] if k < j else 0.0
                levels[ti, k] = bare_spectrum(fam, comp.w, x, jxx_k)[0]
            levels[ti, icfg.count] = comp.m_r * b_eigen(comp.w, x)[0]
        crossings = sum(
            _sign_changes(levels[:, k] - levels[:, icfg.count])
            for k in range(icfg.count)
        )
        tags = tuple(f"bare-LM{k + 1}" for k in range(icfg.count)) + ("bare-GM",)
        results.append(IterationResult(tuple(range(j)),
                                       SpectrumTrace(grid, levels, tags),
                                       crossings))
    return results


# ---------------------------------------------------------------------------
# CSV emission


def write_csv(path, header, rows) -> None:
    """Write rows of floats (first column t) with 17-significant-digit
    formatting; deterministic byte output for identical inputs."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt_float(v) for v in row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_spectrum_csv(path, trace: SpectrumTrace) -> None:
    k = trace.levels.shape[1]
    header = ["t"] + (list(trace.tags) if trace.tags
                      else [f"E{i}" for i in range(k)])
    rows = [[trace.grid[i], *trace.levels[i]] for i in range(len(trace.grid))]
    write_csv(path, header, rows)


def write_bare_csv(path, trace: SpectrumTrace) -> None:
    if trace.tags is None:
        raise ValueError("bare CSV needs a tagged trace")
    write_spectrum_csv(path, trace)


def write_localization_csv(path, loc: LocalizationTrace) -> None:
    depth = loc.cum.shape[1]
    header = ["t", "wL0"] + [f"wR_cum_{j + 1}" for j in range(depth)]
    rows = [[loc.grid[i], loc.wl0[i], *loc.cum[i]]
            for i in range(len(loc.grid))]
    write_csv(path, header, rows)


def write_negativity_csv(path, pairs) -> None:
    write_csv(path, ["t", "fraction"], [[t, f] for (t, f) in pairs])


def write_v3_csv(path, bundle: V3Bundle) -> None:
    header = (["t", "alpha", "beta"]
              + [f"sp_comp_{s}" for s in V3_COMP_LABELS]
              + [f"sp_ang_{s}" for s in V3_ANG_LABELS])
    rows = []
    for i in range(len(bundle.grid)):
        rows.append([bundle.grid[i], bundle.alpha[i], bundle.beta[i],
                     *bundle.signed_prob_comp[i], *bundle.signed_prob_ang[i]])
    write_csv(path, header, rows)
