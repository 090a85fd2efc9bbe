"""Hamiltonian builders on three nested state spaces.

* full:        all 2^N occupation configurations of an explicit graph,
               including the clique-penalty terms (N <= 14);
* low-energy:  at most one occupied vertex per clique, R bits free
               (dimension prod_i (n_i + 1) * 2^(m_r)) -- the clique penalty
               drops out by construction;
* active:      per-clique permutation-symmetric contraction
               ({empty, shared, symmetric} for shared cliques,
               {empty, symmetric} for disjoint ones) plus frozen "deep"
               spin-0 sectors, which together tile the low-energy spectrum
               exactly.

Conventions (fixed package-wide): a single bit flip carries -x/2, an XX
driver edge hops occupation between its endpoints with amplitude +jxx/4, and
the problem part is p * (-sum_i w_i occ_i + sum_edges J occ_u occ_v) with
J = jzz_clique on clique-class edges and jzz on plain ones.  Basis index
order is ascending occupation (empty state first, vertex 0 the most
significant bit).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .instances import SHARED, ExplicitGraph, GicInstance, expand
from .linalg import DIM_CAP, DenseOperator, sym_eigen
from .schedule import StageConfig, stage0_params

__all__ = [
    "build_full",
    "low_energy_dim",
    "build_low_energy",
    "project_low_energy",
    "ActiveModel",
    "active_model",
    "expand_active",
    "SectorBlock",
    "sector_matrices",
    "sector_eigenvalues",
    "Stage0Report",
    "stage0_gap_scan",
    "penalty_truncation_errors",
]

FULL_BIT_CAP = 14


def build_full(graph: ExplicitGraph, x: float, jxx: float, p: float = 1.0) -> DenseOperator:
    """Full 2^N Hamiltonian of an explicit graph at driver strengths (x, jxx)
    and problem prefactor p."""
    n = graph.vertex_count
    if n > FULL_BIT_CAP:
        raise ValueError(f"full space limited to {FULL_BIT_CAP} vertices, got {n}")
    if any(k == "clique" for (_i, _j, k) in graph.edges) and graph.jzz_clique is None:
        raise ValueError("graph has clique edges but jzz_clique is unresolved")
    dim = 1 << n
    couplings = {"clique": graph.jzz_clique or 0.0, "plain": graph.jzz}

    bitpos = [n - 1 - v for v in range(n)]  # vertex 0 = most significant bit

    diag = np.zeros(dim)
    for v in range(n):
        mask = 1 << bitpos[v]
        idx = np.arange(dim)
        diag[(idx & mask) != 0] += -p * graph.weights[v]
    for (i, j, k) in graph.edges:
        mask = (1 << bitpos[i]) | (1 << bitpos[j])
        idx = np.arange(dim)
        diag[(idx & mask) == mask] += p * couplings[k]

    h = np.diag(diag)
    # transverse driver: -x/2 per single flip
    for v in range(n):
        mask = 1 << bitpos[v]
        for s in range(dim):
            if s & mask:
                h[s, s ^ mask] += -x / 2.0
                h[s ^ mask, s] += -x / 2.0
    # XX driver: +jxx/4 per occupation hop along each driver edge
    for (i, j) in graph.xx_edges:
        mi, mj = 1 << bitpos[i], 1 << bitpos[j]
        for s in range(dim):
            if (s & mi) and not (s & mj):
                t = (s ^ mi) | mj
                h[s, t] += jxx / 4.0
                h[t, s] += jxx / 4.0
    labels = tuple(format(s, f"0{n}b") for s in range(dim))
    return DenseOperator(h, basis="computational", labels=labels)


def low_energy_dim(inst: GicInstance) -> int:
    d = 1 << inst.m_r
    for n in inst.sizes:
        d *= n + 1
    return d


def _mixed_radix(inst: GicInstance):
    """Radices and strides of the low-energy index: clique digits (0 = empty,
    k = k-th clique vertex occupied; the shared vertex is the last digit),
    then R bits (most significant R bit first, 1 = occupied)."""
    radices = [n + 1 for n in inst.sizes] + [2] * inst.m_r
    strides = [1] * len(radices)
    for i in range(len(radices) - 2, -1, -1):
        strides[i] = strides[i + 1] * radices[i + 1]
    return radices, strides


def build_low_energy(inst: GicInstance, x: float, jxx: float) -> DenseOperator:
    """Hamiltonian restricted to per-clique independent configurations."""
    dim = low_energy_dim(inst)
    if dim > DIM_CAP:
        raise ValueError(f"low-energy dimension {dim} exceeds the cap {DIM_CAP}")
    radices, strides = _mixed_radix(inst)
    m, m_r = inst.m, inst.m_r
    shared = inst.structure == SHARED
    jzz = inst.jzz

    h = np.zeros((dim, dim))
    digits = [0] * len(radices)
    for idx in range(dim):
        rem = idx
        for i, (s, r) in enumerate(zip(strides, radices)):
            digits[i] = (rem // s) % r
        r_up = sum(digits[m + j] for j in range(m_r))
        e = -inst.r_weight * r_up
        for i, c in enumerate(inst.cliques):
            d = digits[i]
            if d == 0:
                continue
            e += -c.weight
            if not (shared and d == c.size):  # the shared vertex has no R edge
                e += jzz * r_up
        h[idx, idx] = e
        # transverse flips
        for i, c in enumerate(inst.cliques):
            d = digits[i]
            if d > 0:  # occupied digit <-> empty
                jdx = idx - d * strides[i]
                h[idx, jdx] += -x / 2.0
                h[jdx, idx] += -x / 2.0
        for j in range(m_r):
            if digits[m + j] == 1:
                jdx = idx - strides[m + j]
                h[idx, jdx] += -x / 2.0
                h[jdx, idx] += -x / 2.0
        # XX hops within a clique (all pairs, shared vertex included)
        for i in range(m):
            d = digits[i]
            if d > 1:
                for d2 in range(1, d):
                    jdx = idx - (d - d2) * strides[i]
                    h[idx, jdx] += jxx / 4.0
                    h[jdx, idx] += jxx / 4.0
    labels = []
    for idx in range(dim):
        parts = []
        rem = idx
        for i, (s, r) in enumerate(zip(strides, radices)):
            d = (rem // s) % r
            parts.append(f"c{i}:{d}" if i < m else f"r{i - m}:{d}")
        labels.append("|".join(parts))
    return DenseOperator(h, basis="low-energy", labels=tuple(labels))


def project_low_energy(full_op: DenseOperator, inst: GicInstance) -> DenseOperator:
    """Extract the low-energy submatrix of a full-space operator, reordered to
    the mixed-radix low-energy basis."""
    graph = expand(inst)
    n = graph.vertex_count
    if full_op.dim != (1 << n):
        raise ValueError("operator dimension does not match the expanded graph")
    radices, strides = _mixed_radix(inst)
    m, m_r = inst.m, inst.m_r
    bitpos = [n - 1 - v for v in range(n)]
    sel = []
    for idx in range(low_energy_dim(inst)):
        rem = idx
        s_full = 0
        for i, (s, r) in enumerate(zip(strides, radices)):
            d = (rem // s) % r
            if i < m:
                if d > 0:
                    v = graph.clique_vertices[i][d - 1]
                    s_full |= 1 << bitpos[v]
            elif d == 1:
                v = graph.r_vertices[i - m]
                s_full |= 1 << bitpos[v]
        sel.append(s_full)
    sel = np.array(sel, dtype=int)
    sub = full_op.mat[np.ix_(sel, sel)]
    return DenseOperator(sub, basis="low-energy")


# ---------------------------------------------------------------------------
# active contraction and deep spin-0 sectors


@dataclass(frozen=True)
class ActiveModel:
    """Permutation-symmetric contraction of the low-energy space.

    Per shared clique the digits are [0 empty, 1 shared vertex occupied,
    2 symmetric non-shared occupation]; per disjoint clique [0 empty,
    1 symmetric occupation].  R bits follow, most significant first.
    """

    op: DenseOperator
    radices: tuple[int, ...]
    inst: GicInstance


def _active_build(sizes, weights, shared_flags, m_r, r_weight, jzz, x, jxx,
                  diag_shift: float = 0.0, extra_r: float = 0.0):
    """Construct one permutation-symmetric sector matrix.

    diag_shift is a constant from frozen deep cliques; extra_r multiplies the
    R up-count (deep cliques sit on non-shared vertices, which couple to all
    of R)."""
    m = len(sizes)
    radices = [3 if f else 2 for f in shared_flags] + [2] * m_r
    strides = [1] * len(radices)
    for i in range(len(radices) - 2, -1, -1):
        strides[i] = strides[i + 1] * radices[i + 1]
    dim = 1
    for r in radices:
        dim *= r
    h = np.zeros((dim, dim))
    digits = [0] * len(radices)
    for idx in range(dim):
        rem = idx
        for i, (s, r) in enumerate(zip(strides, radices)):
            digits[i] = (rem // s) % r
        r_up = sum(digits[m + j] for j in range(m_r))
        e = diag_shift + (extra_r - r_weight) * r_up
        for i in range(m):
            d = digits[i]
            n = sizes[i]
            n_a = n - 1 if shared_flags[i] else n
            if shared_flags[i]:
                if d == 1:  # shared vertex occupied: no R edge
                    e += -weights[i]
                elif d == 2:
                    e += -weights[i] + (n_a - 1) / 4.0 * jxx + jzz * r_up
            elif d == 1:
                e += -weights[i] + (n - 1) / 4.0 * jxx + jzz * r_up
        h[idx, idx] = e
        for i in range(m):
            d = digits[i]
            n = sizes[i]
            n_a = n - 1 if shared_flags[i] else n
            if shared_flags[i]:
                if d == 1:
                    jdx = idx - strides[i]  # shared <-> empty
                    h[idx, jdx] += -x / 2.0
                    h[jdx, idx] += -x / 2.0
                elif d == 2:
                    jdx = idx - 2 * strides[i]  # sym <-> empty
                    v = -math.sqrt(n_a) * x / 2.0
                    h[idx, jdx] += v
                    h[jdx, idx] += v
                    jdx = idx - strides[i]  # sym <-> shared: the sign source
                    v = math.sqrt(n_a) * jxx / 4.0
                    h[idx, jdx] += v
                    h[jdx, idx] += v
            elif d == 1:
                jdx = idx - strides[i]
                v = -math.sqrt(n_a) * x / 2.0
                h[idx, jdx] += v
                h[jdx, idx] += v
        for j in range(m_r):
            if digits[m + j] == 1:
                jdx = idx - strides[m + j]
                h[idx, jdx] += -x / 2.0
                h[jdx, idx] += -x / 2.0
    return h, tuple(radices)


def active_model(inst: GicInstance, x: float, jxx: float) -> ActiveModel:
    """All-cliques-active contraction of the low-energy Hamiltonian."""
    shared = inst.structure == SHARED
    h, radices = _active_build(
        list(inst.sizes),
        [c.weight for c in inst.cliques],
        [shared] * inst.m,
        inst.m_r,
        inst.r_weight,
        inst.jzz,
        x,
        jxx,
    )
    m = inst.m
    labels = []
    strides = [1] * len(radices)
    for i in range(len(radices) - 2, -1, -1):
        strides[i] = strides[i + 1] * radices[i + 1]
    names_shared = ["0", "s", "a"]
    for idx in range(h.shape[0]):
        parts = []
        rem = idx
        for i, (s, r) in enumerate(zip(strides, radices)):
            d = (rem // s) % r
            if i < m:
                parts.append(names_shared[d] if shared else ["0", "a"][d])
            else:
                parts.append(str(d))
        labels.append("".join(parts))
    return ActiveModel(DenseOperator(h, basis="active", labels=tuple(labels)),
                       radices, inst)


def expand_active(model: ActiveModel, vec: np.ndarray) -> np.ndarray:
    """Expand an active-basis vector to the low-energy basis.

    The symmetric digit of a clique of effective size n_a spreads over its n_a
    singleton digits with amplitude c / sqrt(n_a); signs are preserved, so
    squared-amplitude sign statistics agree between the two bases.
    """
    inst = model.inst
    shared = inst.structure == SHARED
    dim_le = low_energy_dim(inst)
    out = np.zeros(dim_le)
    radices_a = model.radices
    strides_a = [1] * len(radices_a)
    for i in range(len(radices_a) - 2, -1, -1):
        strides_a[i] = strides_a[i + 1] * radices_a[i + 1]
    radices_le, strides_le = _mixed_radix(inst)
    m, m_r = inst.m, inst.m_r

    vec = np.asarray(vec, dtype=float)
    if vec.shape != (model.op.dim,):
        raise ValueError("vector does not match the active model dimension")

    for idx in range(model.op.dim):
        c = vec[idx]
        if c == 0.0:
            continue
        rem = idx
        ds = [(rem // s) % r for s, r in zip(strides_a, radices_a)]
        # enumerate the low-energy digit choices per clique
        choices: list[list[tuple[int, float]]] = []
        for i in range(m):
            n = inst.sizes[i]
            if shared:
                if ds[i] == 0:
                    choices.append([(0, 1.0)])
                elif ds[i] == 1:
                    choices.append([(n, 1.0)])  # shared vertex = last digit
                else:
                    n_a = n - 1
                    amp = 1.0 / math.sqrt(n_a)
                    choices.append([(k, amp) for k in range(1, n_a + 1)])
            else:
                if ds[i] == 0:
                    choices.append([(0, 1.0)])
                else:
                    amp = 1.0 / math.sqrt(n)
                    choices.append([(k, amp) for k in range(1, n + 1)])
        stack = [(0, c, 0)]  # (partial index, amplitude, clique position)
        while stack:
            base, amp, i = stack.pop()
            if i == m:
                for j in range(m_r):
                    base += ds[m + j] * strides_le[m + j]
                out[base] += amp
                continue
            for (dig, a) in choices[i]:
                stack.append((base + dig * strides_le[i], amp * a, i + 1))
    return out


@dataclass(frozen=True)
class SectorBlock:
    mat: np.ndarray
    multiplicity: int
    deep: tuple[int, ...]  # clique indices frozen in a deep spin-0 state


def sector_matrices(inst: GicInstance, x: float, jxx: float) -> list[SectorBlock]:
    """Exact permutation-symmetry decomposition of the low-energy space.

    Every subset S of cliques may freeze into a deep spin-0 state (diagonal
    contribution -w_i - jxx/4, full R coupling, multiplicity n_a_i - 1); the
    remaining cliques stay active.  The union of all sector spectra, with
    multiplicity, equals the low-energy spectrum exactly.
    """
    shared = inst.structure == SHARED
    m = inst.m
    mults = []
    for c in inst.cliques:
        n_a = c.size - 1 if shared else c.size
        mults.append(n_a - 1)
    out = []
    for bits in range(1 << m):
        deep = tuple(i for i in range(m) if (bits >> i) & 1)
        mult = 1
        for i in deep:
            mult *= mults[i]
        if mult == 0:
            continue
        keep = [i for i in range(m) if i not in deep]
        diag_shift = sum(-inst.cliques[i].weight - jxx / 4.0 for i in deep)
        extra_r = inst.jzz * len(deep)
        h, _rad = _active_build(
            [inst.sizes[i] for i in keep],
            [inst.cliques[i].weight for i in keep],
            [shared] * len(keep),
            inst.m_r,
            inst.r_weight,
            inst.jzz,
            x,
            jxx,
            diag_shift=diag_shift,
            extra_r=extra_r,
        )
        out.append(SectorBlock(h, mult, deep))
    return out


def sector_eigenvalues(inst: GicInstance, x: float, jxx: float,
                       k: int | None = None) -> np.ndarray:
    """Lowest k low-energy eigenvalues via the sector decomposition."""
    vals = []
    for blk in sector_matrices(inst, x, jxx):
        ev = np.linalg.eigvalsh(blk.mat)
        vals.append(np.repeat(ev, blk.multiplicity)
                    if blk.multiplicity > 1 else ev)
    allv = np.sort(np.concatenate(vals))
    return allv if k is None else allv[:k]


# ---------------------------------------------------------------------------
# opening-stage gap scan and penalty truncation


@dataclass(frozen=True)
class Stage0Report:
    ts: tuple[float, ...]
    gaps: tuple[float, ...]
    min_gap: float
    threshold: float
    protected: bool


def stage0_gap_scan(graph: ExplicitGraph, cfg: StageConfig, ts) -> Stage0Report:
    """Scan the spectral gap along the opening stage (field ramp-down with the
    problem and XX terms ramping up).  The stage is reported protected when
    the minimum gap stays above Gamma1/2."""
    gaps = []
    for t in ts:
        x, jxx, p = stage0_params(cfg, t)
        op = build_full(graph, x, jxx, p)
        es = sym_eigen(op, k=2)
        gaps.append(float(es.values[1] - es.values[0]))
    threshold = 0.5 * cfg.gamma1
    min_gap = min(gaps)
    return Stage0Report(tuple(float(t) for t in ts), tuple(gaps), min_gap,
                        threshold, min_gap >= threshold)


def penalty_truncation_errors(inst: GicInstance, x: float, jxx: float,
                              jzz_cliques) -> list[float]:
    """Ground-energy error of the low-energy restriction against the full
    Hamiltonian at each clique penalty value.  The error decays like
    1/jzz_clique, which pins the penalty scale needed for a faithful
    restriction."""
    e_le = float(sym_eigen(build_low_energy(inst, x, jxx), k=1).values[0])
    errs = []
    for jc in jzz_cliques:
        graph = expand(inst)
        graph.jzz_clique = float(jc)
        e_full = float(sym_eigen(build_full(graph, x, jxx), k=1).values[0])
        errs.append(abs(e_le - e_full))
    return errs
