"""Angular-momentum block machinery.

A clique of size n under a uniform transverse field and an all-to-all XX
driver splits, on its independent-set subspace {empty, n singletons}, into a
two-level "same-sign" block and n-1 degenerate spin-0 ("opposite-sign")
levels:

    B(w, x) = [[-w, -x/2], [-x/2, 0]]          (occupied label first)
    clique ->  B(w_eff, sqrt(n) x)  (+)  theta * I_{n-1}

with w_eff = w - (n-1)/4 * jxx and theta = -(w + jxx/4).  Increasing jxx
raises the same-sign block and lowers the spin-0 shelf (the see-saw), which is
what lifts the problematic crossings.

The same machinery provides: eigensystem of B, subclique merging, the partial
R-coupling operator T for shared cliques, closed-form bare-subsystem spectra,
Dicke collective operators, the symmetric-subspace Hamiltonian of the
same-sign sector, its L-inner/R-inner linear-shift decompositions, and the
full block structure (H_C, H_Q, H_inter) in the angular product basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .instances import DISJOINT, SHARED, GicInstance
from .linalg import DenseOperator

__all__ = [
    "TwoLevel",
    "CliqueReduction",
    "BlockSet",
    "b_matrix",
    "b_eigen",
    "clique_reduce",
    "crossover_x",
    "alpha_max",
    "merge_subcliques",
    "partial_coupling_T",
    "bare_spectrum",
    "dicke_ops",
    "symmetric_same_sign",
    "closed_tridiag_eigs",
    "symmetric_hc",
    "inner_blocks",
    "inner_assembly",
    "block_order",
    "angular_clique_transform",
    "angular_transform",
    "block_hamiltonians",
]


@dataclass(frozen=True)
class TwoLevel:
    """Parameters (w, x) of the basic 2x2 block B(w, x)."""

    w: float
    x: float

    def matrix(self) -> np.ndarray:
        return b_matrix(self.w, self.x)


def b_matrix(w: float, x: float) -> np.ndarray:
    """B(w,x) = [[-w, -x/2], [-x/2, 0]], occupied basis label first."""
    return np.array([[-w, -x / 2.0], [-x / 2.0, 0.0]])


def b_eigen(w: float, x: float) -> tuple[float, float, float]:
    """(beta0, beta1, gamma) of B(w,x).

    beta_k = -(w + (-1)^k sqrt(w^2+x^2))/2, gamma = x / (w + sqrt(w^2+x^2)).
    At x = 0, w <= 0 the mixing denominator vanishes; by the basis-flip
    convention gamma is returned as +inf (the labels swap roles).
    """
    s = math.hypot(w, x)
    beta0 = -0.5 * (w + s)
    beta1 = -0.5 * (w - s)
    den = w + s
    gamma = x / den if den > 0.0 else math.inf
    return beta0, beta1, gamma


@dataclass(frozen=True)
class CliqueReduction:
    """Single-clique decomposition: same-sign 2x2 plus a spin-0 shelf."""

    n_c: int
    w_eff: float
    same_sign: TwoLevel
    theta: float
    spin0_multiplicity: int

    def spectrum(self) -> list[float]:
        b0, b1, _ = b_eigen(self.same_sign.w, self.same_sign.x)
        return sorted([b0, b1] + [self.theta] * self.spin0_multiplicity)


def clique_reduce(n_c: int, w_c: float, x: float, jxx: float) -> CliqueReduction:
    if n_c < 1:
        raise ValueError("n_c must be >= 1")
    w_eff = w_c - (n_c - 1) / 4.0 * jxx
    return CliqueReduction(
        n_c=n_c,
        w_eff=w_eff,
        same_sign=TwoLevel(w_eff, math.sqrt(n_c) * x),
        theta=-(w_c + jxx / 4.0),
        spin0_multiplicity=n_c - 1,
    )


def crossover_x(alpha: float) -> float:
    """Transverse field x_c at which beta0 = theta for a w=1 clique under
    jxx = alpha*x: x_c = 4*alpha/(4 - alpha^2).  Requires 0 < alpha < 2."""
    if not (0.0 < alpha < 2.0):
        raise ValueError("crossover defined for 0 < alpha < 2")
    return 4.0 * alpha / (4.0 - alpha * alpha)


def alpha_max(gamma2: float) -> float:
    """Largest alpha keeping the block-order reversal inside Stage 2
    (x_c <= Gamma2): alpha_max = (-2 + 2 sqrt(1 + Gamma2^2)) / Gamma2."""
    if not gamma2 > 0:
        raise ValueError("gamma2 must be > 0")
    return (-2.0 + 2.0 * math.sqrt(1.0 + gamma2 * gamma2)) / gamma2


def merge_subcliques(n_a: int, n_b: int, w: float, x: float, jxx: float):
    """Merge two fully XX-coupled subcliques (sizes n_a, n_b) of one clique.

    Returns (D_c, U_merge, merged) where D_c is the 3x3 restriction to
    {sym_a occupied, sym_b occupied, empty}, U_merge the basis change to
    {same-sign, empty, residual q}, and merged = U_merge^T D_c U_merge, which
    is exactly B(w - (n_c-1)/4 jxx, sqrt(n_c) x) (+) [-(w + jxx/4)] for
    n_c = n_a + n_b.
    """
    if n_a < 1 or n_b < 1:
        raise ValueError("subclique sizes must be >= 1")
    n_c = n_a + n_b
    w_a = w - (n_a - 1) / 4.0 * jxx
    w_b = w - (n_b - 1) / 4.0 * jxx
    hop = math.sqrt(n_a * n_b) / 4.0 * jxx
    d_c = np.array(
        [
            [-w_a, hop, -math.sqrt(n_a) / 2.0 * x],
            [hop, -w_b, -math.sqrt(n_b) / 2.0 * x],
            [-math.sqrt(n_a) / 2.0 * x, -math.sqrt(n_b) / 2.0 * x, 0.0],
        ]
    )
    ra, rb = math.sqrt(n_a / n_c), math.sqrt(n_b / n_c)
    u_merge = np.array(
        [
            [ra, 0.0, -rb],
            [rb, 0.0, ra],
            [0.0, 1.0, 0.0],
        ]
    )
    merged = u_merge.T @ d_c @ u_merge
    return d_c, u_merge, merged


def partial_coupling_T(n_c: int):
    """Coupling operator of a shared clique's non-shared part to an R vertex.

    In the merged basis (same-sign, empty, q) the n_c-1 non-shared occupations
    couple through T = diag((n_c-1)/n_c, 0, 1/n_c) + (sqrt(n_c-1)/n_c) T_cq
    with T_cq carrying -1 at the (same-sign, q) corners.
    Returns (T, T_cq, strengths) with strengths = ((n_c-1)/n_c, 1/n_c,
    sqrt(n_c-1)/n_c).
    """
    if n_c < 2:
        raise ValueError("partial coupling needs n_c >= 2")
    t_cq = np.array([[0.0, 0.0, -1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
    diag = np.diag([(n_c - 1) / n_c, 0.0, 1.0 / n_c])
    s = math.sqrt(n_c - 1) / n_c
    return diag + s * t_cq, t_cq, ((n_c - 1) / n_c, 1.0 / n_c, s)


def bare_spectrum(sizes, w, x: float, jxx: float, max_list: int = 20):
    """Closed-form spectrum of a bare clique family (no R, no penalties).

    Returns (E0, energies, theta_sum):
      E0        = -1/2 sum_i (w_eff_i + sqrt(w_eff_i^2 + n_i x^2)),
      energies  = all 2^m same-sign-sector energies sum_i beta_{z_i}
                  (None when m > max_list),
      theta_sum = -sum_i (w_i + jxx/4).
    """
    sizes = list(sizes)
    m = len(sizes)
    ws = [float(w)] * m if np.isscalar(w) else [float(v) for v in w]
    if len(ws) != m:
        raise ValueError("need one weight per clique")
    betas = []
    for n_i, w_i in zip(sizes, ws):
        red = clique_reduce(n_i, w_i, x, jxx)
        b0, b1, _ = b_eigen(red.same_sign.w, red.same_sign.x)
        betas.append((b0, b1))
    e0 = sum(b[0] for b in betas)
    energies = None
    if m <= max_list:
        energies = [0.0] * (1 << m)
        for z in range(1 << m):
            energies[z] = sum(betas[i][(z >> i) & 1] for i in range(m))
        energies.sort()
    theta_sum = -sum(w_i + jxx / 4.0 for w_i in ws)
    return e0, energies, theta_sum


# ---------------------------------------------------------------------------
# Dicke (symmetric-subspace) operators


def dicke_ops(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Collective operators on the symmetric subspace of m spins.

    CSZ = diag(m, m-1, ..., 0) (total up-count, descending label order);
    CSX tridiagonal with entries sqrt((m-a)(a+1))/2 linking a <-> a+1.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    csz = np.diag(np.arange(m, -1, -1, dtype=float))
    csx = np.zeros((m + 1, m + 1))
    for a in range(m):
        v = 0.5 * math.sqrt((m - a) * (a + 1))
        csx[a, a + 1] = v
        csx[a + 1, a] = v
    return csz, csx


def symmetric_same_sign(m: int, n_c: int, w_eff: float, x: float) -> DenseOperator:
    """Same-sign sector of m identical cliques in the Dicke basis:
    -sqrt(n_c) x CSX(m) - w_eff CSZ(m)."""
    csz, csx = dicke_ops(m)
    mat = -math.sqrt(n_c) * x * csx - w_eff * csz
    labels = tuple(f"{m - a}up" for a in range(m + 1))
    return DenseOperator(mat, basis="dicke", labels=labels)


def closed_tridiag_eigs(m: int, w: float, x: float) -> list[float]:
    """Closed-form eigenvalues of -w CSZ(m) - x CSX(m):
    lambda_{m_s} = -(m/2) w + m_s sqrt(w^2 + x^2), m_s = -m/2 .. m/2."""
    if m < 1:
        raise ValueError("m must be >= 1")
    s = math.hypot(w, x)
    return [-(m / 2.0) * w + (k - m / 2.0) * s for k in range(m + 1)]


def symmetric_hc(m: int, m_r: int, n_c: int, w: float, x: float, jxx: float,
                 jzz: float, structure: str) -> DenseOperator:
    """Same-sign block H_C for m uniform cliques and m_r R vertices, reduced
    to the product of the two Dicke ladders (dim (m+1)(m_r+1), L index major).

    H = HL ox I + I ox HR + J_C * CSZ(m) ox CSZ(m_r), where
    HL = -sqrt(n_c) x CSX(m) - w_eff CSZ(m), HR = -x CSX(m_r) - w CSZ(m_r)
    and J_C = J_zz (disjoint) or (n_c-1)/n_c J_zz (shared).
    """
    if m_r < 1:
        raise ValueError("symmetric_hc needs m_r >= 1")
    w_eff = w - (n_c - 1) / 4.0 * jxx
    czl, cxl = dicke_ops(m)
    czr, cxr = dicke_ops(m_r)
    hl = -math.sqrt(n_c) * x * cxl - w_eff * czl
    hr = -x * cxr - w * czr
    j_c = jzz if structure == DISJOINT else (n_c - 1) / n_c * jzz
    mat = (np.kron(hl, np.eye(m_r + 1)) + np.kron(np.eye(m + 1), hr)
           + j_c * np.kron(czl, czr))
    labels = tuple(f"L{m - a}|R{m_r - b}" for a in range(m + 1) for b in range(m_r + 1))
    return DenseOperator(mat, basis="dicke", labels=labels)


def inner_blocks(hc_sym, m: int, m_r: int, which: str):
    """Linear-shift decomposition of the symmetric H_C.

    which='L': blocks H_L^(r) over the L ladder at fixed R up-count r;
    which='R': blocks H_R^(l) over the R ladder at fixed L up-count l.
    Returns (base, shift, blocks) with blocks[j] = base + j*shift.
    """
    mat = hc_sym.mat if isinstance(hc_sym, DenseOperator) else np.asarray(hc_sym)
    if mat.shape[0] != (m + 1) * (m_r + 1):
        raise ValueError("matrix does not match the (m+1)(m_r+1) Dicke layout")
    full = mat.reshape(m + 1, m_r + 1, m + 1, m_r + 1)
    blocks = []
    if which == "L":
        for r in range(m_r + 1):
            b = m_r - r  # R Dicke index with up-count r
            blocks.append(np.array(full[:, b, :, b]))
    elif which == "R":
        for l in range(m + 1):
            a = m - l
            blocks.append(np.array(full[a, :, a, :]))
    else:
        raise ValueError("which must be 'L' or 'R'")
    base = blocks[0]
    shift = blocks[1] - blocks[0] if len(blocks) > 1 else np.zeros_like(base)
    return base, shift, blocks


def inner_assembly(hc_sym, m: int, m_r: int, which: str) -> np.ndarray:
    """Full H_C in the ordering that makes the requested inner blocks
    contiguous: 'R' keeps the L-major layout, 'L' swaps to R-major."""
    mat = hc_sym.mat if isinstance(hc_sym, DenseOperator) else np.asarray(hc_sym)
    if which == "R":
        return np.array(mat)
    if which != "L":
        raise ValueError("which must be 'L' or 'R'")
    n_l, n_r = m + 1, m_r + 1
    perm = np.array([a * n_r + b for b in range(n_r) for a in range(n_l)])
    return mat[np.ix_(perm, perm)]


@dataclass(frozen=True)
class BlockOrderEntry:
    n_c: int
    beta0: float
    theta: float
    lowest: str  # "same-sign" or "spin-0"


@dataclass(frozen=True)
class BlockOrderReport:
    entries: tuple[BlockOrderEntry, ...]
    x_c: float | None
    reversal_stage: str  # "none" | "stage1" | "stage2"


def block_order(sizes, w: float, x: float, jxx: float, gamma2: float,
                alpha: float) -> BlockOrderReport:
    """Energy ordering of same-sign vs spin-0 levels at (x, jxx), plus where
    the see-saw reversal x_c falls relative to Gamma2 (uniform size only)."""
    sizes = list(sizes)
    if len(set(sizes)) != 1:
        raise ValueError("block ordering assumes uniform clique size")
    entries = []
    for n in sizes:
        red = clique_reduce(n, w, x, jxx)
        b0, _, _ = b_eigen(red.same_sign.w, red.same_sign.x)
        entries.append(
            BlockOrderEntry(n, b0, red.theta,
                            "same-sign" if b0 <= red.theta else "spin-0")
        )
    if alpha <= 0.0:
        return BlockOrderReport(tuple(entries), None, "none")
    if alpha >= 2.0:
        return BlockOrderReport(tuple(entries), None, "stage1")
    x_c = crossover_x(alpha)
    stage = "stage2" if x_c <= gamma2 else "stage1"
    return BlockOrderReport(tuple(entries), x_c, stage)


# ---------------------------------------------------------------------------
# angular transforms and the full block structure


def angular_clique_transform(n: int, shared: bool) -> np.ndarray:
    """Orthogonal (n+1)x(n+1) transform of one clique's independent-set space.

    Rows: low-energy digits (0 = empty, then singletons 1..n; the shared
    vertex, if any, is digit n).  Columns: angular basis
    [same-sign, empty, q_1, ..., q_{n-1}].  For a shared clique q_1 is the
    merge-level q state mixing the non-shared symmetric singleton with the
    shared vertex; deeper q's live inside the non-shared subclique.
    """
    if n < 1:
        raise ValueError("clique size must be >= 1")
    dim = n + 1
    u = np.zeros((dim, dim))
    u[1:, 0] = 1.0 / math.sqrt(n)  # same-sign
    u[0, 1] = 1.0  # empty
    col = 2
    if shared:
        if n < 2:
            raise ValueError("a shared clique needs n >= 2")
        n_a = n - 1
        q = np.zeros(dim)
        q[1:1 + n_a] = -math.sqrt(1.0 / n) / math.sqrt(n_a)
        q[n] = math.sqrt(n_a / n)
        u[:, col] = q
        col += 1
        sub = n_a
    else:
        sub = n
    # Gram-ladder spin-0 vectors inside the (sub)clique singletons 1..sub
    for j in range(2, sub + 1):
        f = np.zeros(dim)
        f[1:j] = 1.0
        f[j] = -(j - 1.0)
        u[:, col] = f / math.sqrt(j * (j - 1.0))
        col += 1
    assert col == dim
    return u


def angular_transform(inst: GicInstance) -> np.ndarray:
    """Full low-energy -> angular basis change U (columns = angular states in
    low-energy coordinates).  The R part flips each bit's label order from
    ascending (empty first) to descending (occupied first)."""
    shared = inst.structure == SHARED
    u = np.eye(1)
    for c in inst.cliques:
        u = np.kron(u, angular_clique_transform(c.size, shared))
    flip = np.array([[0.0, 1.0], [1.0, 0.0]])
    for _ in range(inst.m_r):
        u = np.kron(u, flip)
    return u


@dataclass
class BlockSet:
    """Block structure of the transformed Hamiltonian.

    `assembled` is the full operator in the angular product basis; `h_c` and
    `h_q` are the extracted same-sign and all-spin-zero blocks; `h_inter` is
    the full-dimension inter-block coupling (exactly zero for disjoint
    structure); f_c / f_q are the per-clique R-coupling fractions.
    """

    assembled: DenseOperator
    h_c: DenseOperator
    h_q: DenseOperator
    h_inter: DenseOperator
    f_c: tuple[float, ...]
    f_q: tuple[float, ...]
    c_indices: np.ndarray
    q_indices: np.ndarray


def _angular_labels(inst: GicInstance):
    digit_labels = []
    for c in inst.cliques:
        labels = ["C1", "C0"] + [f"q{j}" for j in range(1, c.size)]
        digit_labels.append(labels)
    for _ in range(inst.m_r):
        digit_labels.append(["r1", "r0"])
    out = [""]
    for labels in digit_labels:
        out = [a + ("|" if a else "") + b for a in out for b in labels]
    return tuple(out)


def block_hamiltonians(inst: GicInstance, x: float, jxx: float) -> BlockSet:
    """Assemble the angular-basis Hamiltonian and its C/Q/inter blocks.

    Per clique the angular digits are [same-sign(=0), empty(=1), q_1..];
    R bits are in descending label order (occupied = digit 0).  The clique
    penalty term never appears: the angular basis spans only independent
    clique configurations.
    """
    if 1 << (inst.m + inst.m_r) > 16384:
        raise ValueError("contracted dimension 2^(m+m_r) exceeds the cap")
    shared = inst.structure == SHARED
    sizes = inst.sizes
    jzz = inst.jzz
    radices = [n + 1 for n in sizes] + [2] * inst.m_r
    dim = 1
    for r in radices:
        dim *= r
    if dim > 16384:
        raise ValueError("angular dimension exceeds the cap")

    # per-clique diagonal data and coupling operators
    occ, xxdiag, rcoef = [], [], []
    for c in inst.cliques:
        n = c.size
        occ_d = np.array([1.0, 0.0] + [1.0] * (n - 1))
        xx_d = np.array([(n - 1) / 4.0, 0.0] + [-0.25] * (n - 1))
        if shared:
            r_d = np.array([(n - 1) / n, 0.0, 1.0 / n] + [1.0] * (n - 2))
        else:
            r_d = np.array([1.0, 0.0] + [1.0] * (n - 1))
        occ.append(occ_d)
        xxdiag.append(xx_d)
        rcoef.append(r_d)

    strides = np.ones(len(radices), dtype=int)
    for i in range(len(radices) - 2, -1, -1):
        strides[i] = strides[i + 1] * radices[i + 1]

    def digits_of(idx: int):
        out = []
        for s, r in zip(strides, radices):
            out.append((idx // s) % r)
        return out

    h = np.zeros((dim, dim))
    h_inter = np.zeros((dim, dim))
    m = inst.m
    for idx in range(dim):
        ds = digits_of(idx)
        cd, rd = ds[:m], ds[m:]
        r_occ = [1.0 if g == 0 else 0.0 for g in rd]
        r_up = sum(r_occ)
        # diagonal
        e = 0.0
        for i, c in enumerate(inst.cliques):
            e += -c.weight * occ[i][cd[i]] + jxx * xxdiag[i][cd[i]]
            e += jzz * rcoef[i][cd[i]] * r_up
        e += -inst.r_weight * r_up
        h[idx, idx] += e
        # clique transverse: same-sign <-> empty
        for i, c in enumerate(inst.cliques):
            if cd[i] == 1:  # empty -> same-sign is digit 0
                jdx = idx - strides[i]
                v = -math.sqrt(c.size) * x / 2.0
                h[idx, jdx] += v
                h[jdx, idx] += v
        # R transverse: occupied(0) <-> empty(1)
        for j in range(inst.m_r):
            if rd[j] == 1:
                jdx = idx - strides[m + j]
                h[idx, jdx] += -x / 2.0
                h[jdx, idx] += -x / 2.0
        # inter-block T_cq coupling (shared only): same-sign(0) <-> q_1(2)
        if shared:
            for i, c in enumerate(inst.cliques):
                n = c.size
                if cd[i] == 2 and n >= 2:
                    jdx = idx - 2 * strides[i]
                    v = -math.sqrt(n - 1) / n * jzz * r_up
                    h_inter[idx, jdx] += v
                    h_inter[jdx, idx] += v
    h_total = h + h_inter

    labels = _angular_labels(inst)
    assembled = DenseOperator(h_total, basis="angular", labels=labels)

    # extract the C block (all cliques in their same-sign pair)
    c_idx = [i for i in range(dim) if all(d <= 1 for d in digits_of(i)[:m])]
    c_idx = np.array(c_idx, dtype=int)
    h_c = DenseOperator(h_total[np.ix_(c_idx, c_idx)], basis="angular",
                        labels=tuple(labels[i] for i in c_idx))
    # Q block: every clique in its leading spin-0 state (q_1)
    if all(n >= 2 for n in sizes):
        q_digit = 2
        q_idx = [i for i in range(dim)
                 if all(d == q_digit for d in digits_of(i)[:m])]
    else:
        q_idx = []
    q_idx = np.array(q_idx, dtype=int)
    h_q = DenseOperator(h_total[np.ix_(q_idx, q_idx)], basis="angular",
                        labels=tuple(labels[i] for i in q_idx)) if q_idx.size \
        else DenseOperator(np.zeros((0, 0)), basis="angular")

    f_c = tuple(((n - 1) / n if shared else 1.0) for n in sizes)
    f_q = tuple((1.0 / n if shared else 1.0) for n in sizes)
    return BlockSet(
        assembled=assembled,
        h_c=h_c,
        h_q=h_q,
        h_inter=DenseOperator(h_inter, basis="angular", labels=labels),
        f_c=f_c,
        f_q=f_q,
        c_indices=c_idx,
        q_indices=q_idx,
    )
