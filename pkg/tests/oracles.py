"""Independent reference implementations used only by the tests.

Every routine here recomputes a quantity the package provides, by a
different route: explicit Kronecker products instead of bit masks,
brute-force enumeration instead of closed forms, and a hand-written QL
eigensolver instead of LAPACK.  Tests compare the two routes; nothing in the
package imports this module.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

I2 = np.eye(2)
# single-site operators in the ascending basis (index 0 = empty, 1 = occupied)
OCC = np.array([[0.0, 0.0], [0.0, 1.0]])
FLIP = np.array([[0.0, 1.0], [1.0, 0.0]])
RAISE = np.array([[0.0, 0.0], [1.0, 0.0]])  # |occupied><empty|


def site_op(op2: np.ndarray, v: int, n: int) -> np.ndarray:
    """Lift a 2x2 operator onto vertex v of an n-vertex register
    (vertex 0 is the most significant factor)."""
    out = np.array([[1.0]])
    for i in range(n):
        out = np.kron(out, op2 if i == v else I2)
    return out


def kron_hamiltonian(graph, x: float, jxx: float, p: float = 1.0) -> np.ndarray:
    """Full 2^N Hamiltonian assembled term by term with Kronecker products."""
    n = graph.vertex_count
    couplings = {"clique": graph.jzz_clique or 0.0, "plain": graph.jzz}
    h = np.zeros((1 << n, 1 << n))
    for v in range(n):
        h += -p * graph.weights[v] * site_op(OCC, v, n)
        h += -(x / 2.0) * site_op(FLIP, v, n)
    for (i, j, kind) in graph.edges:
        h += p * couplings[kind] * (site_op(OCC, i, n) @ site_op(OCC, j, n))
    for (i, j) in graph.xx_edges:
        hop = site_op(RAISE, i, n) @ site_op(RAISE.T, j, n)
        h += (jxx / 4.0) * (hop + hop.T)
    return h


# ---------------------------------------------------------------------------
# brute-force graph combinatorics


def independent_sets(graph):
    """All independent vertex subsets, as bitmasks over vertices."""
    n = graph.vertex_count
    pair = np.zeros((n, n), dtype=bool)
    for (i, j, _k) in graph.edges:
        pair[i, j] = pair[j, i] = True
    for s in range(1 << n):
        members = [v for v in range(n) if (s >> v) & 1]
        ok = True
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                if pair[members[a]][members[b]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield s, members


def max_independent_sets(graph):
    """(best weight, list of maximizing bitmasks) by exhaustive search."""
    best, argbest = -1.0, []
    for s, members in independent_sets(graph):
        wt = sum(graph.weights[v] for v in members)
        if wt > best + 1e-12:
            best, argbest = wt, [s]
        elif abs(wt - best) <= 1e-12:
            argbest.append(s)
    return best, argbest


def classical_ising_energy(graph, members, p: float = 1.0) -> float:
    """Diagonal problem energy of an arbitrary vertex subset."""
    couplings = {"clique": graph.jzz_clique or 0.0, "plain": graph.jzz}
    e = -sum(graph.weights[v] for v in members)
    mset = set(members)
    for (i, j, kind) in graph.edges:
        if i in mset and j in mset:
            e += couplings[kind]
    return p * e


# ---------------------------------------------------------------------------
# hand-written tridiagonal eigensolver (QL with implicit shifts)


def tridiag_eigs_ql(diag, off, max_iter: int = 64) -> np.ndarray:
    """Eigenvalues of a symmetric tridiagonal matrix, ascending.

    Classic implicit-shift QL iteration (a tql1 port); no LAPACK involved.
    `off[i]` couples rows i and i+1.
    """
    d = [float(v) for v in diag]
    n = len(d)
    e = [float(v) for v in off] + [0.0]
    if len(e) != n:
        raise ValueError("off-diagonal must have length n-1")
    eps = np.finfo(float).eps
    for l in range(n):
        for it in range(max_iter + 1):
            m = l
            while m < n - 1:
                # the 1e-300 floor keeps subnormal couplings from stalling
                if abs(e[m]) <= eps * (abs(d[m]) + abs(d[m + 1])) + 1e-300:
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                raise RuntimeError("QL iteration failed to converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s, c, p = 1.0, 1.0, 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(np.array(d))


def ladder_tridiag(m: int, w: float, x: float):
    """Diagonal and off-diagonal of -x*CSX(m) - w*CSZ(m), built from the
    collective-spin ladder coefficients directly."""
    diag = np.array([-w * (m - a) for a in range(m + 1)])
    off = np.array([-(x / 2.0) * math.sqrt((m - a) * (a + 1))
                    for a in range(m)])
    return diag, off


# ---------------------------------------------------------------------------
# bare clique-family Hamiltonian as an explicit Kronecker sum


def kron_bare(sizes, ws, x: float, jxx: float) -> np.ndarray:
    """Kronecker sum of per-clique two-level blocks B_i; basis ascending in
    clique index, per-clique order (occupied, empty)."""
    m = len(sizes)
    h = np.zeros((1 << m, 1 << m))
    for i, (n_i, w_i) in enumerate(zip(sizes, ws)):
        w_eff = w_i - (n_i - 1) / 4.0 * jxx
        b = np.array([[-w_eff, -math.sqrt(n_i) * x / 2.0],
                      [-math.sqrt(n_i) * x / 2.0, 0.0]])
        h += site_op(b, i, m)
    return h


# ---------------------------------------------------------------------------
# symmetric-subspace embedding


def dicke_basis(m: int) -> np.ndarray:
    """Columns: normalized uniform superpositions of fixed up-count
    bitstrings of m spins, ordered by DESCENDING up count (all-up first);
    bit value 1 = up, vertex 0 = most significant bit."""
    cols = []
    for ups in range(m, -1, -1):
        v = np.zeros(1 << m)
        idx = [s for s in range(1 << m) if bin(s).count("1") == ups]
        v[idx] = 1.0 / math.sqrt(len(idx))
        cols.append(v)
    return np.array(cols).T


def permanence_symmetrizer(m: int, m_r: int) -> np.ndarray:
    """Isometry from the (m+1)(m_r+1) two-ladder product onto the
    2^(m+m_r) two-register space, L register most significant."""
    dl = dicke_basis(m)
    dr = dicke_basis(m_r)
    return np.kron(dl, dr)


# ---------------------------------------------------------------------------
# angular transform by projector comparison


def clique_seed_vectors(n: int, shared: bool) -> np.ndarray:
    """Seed family whose Gram-Schmidt complement spans the spin-0 space:
    returns the two named columns (same-sign, empty) plus the leading
    spin-0 vector, in the (empty, v_1..v_n) single-clique basis."""
    same = np.zeros(n + 1)
    same[1:] = 1.0 / math.sqrt(n)
    empty = np.zeros(n + 1)
    empty[0] = 1.0
    if n < 2:
        return np.column_stack([same, empty])
    lead = np.zeros(n + 1)
    if shared:
        n_a = n - 1
        lead[1:n] = -math.sqrt(1.0 / n) / math.sqrt(n_a)
        lead[n] = math.sqrt(n_a / n)
    else:
        # first rung of the Gram ladder inside the occupied span
        lead[1], lead[2] = 1.0, -1.0
        lead /= math.sqrt(2.0)
    return np.column_stack([same, empty, lead])
