"""Structured MIS instance families and clique identification.

Two instance families are supported, both consisting of m_l mutually
independent cliques L = {C_1..C_m} and a remainder vertex set R of size m_r:

* disjoint:  every clique vertex is adjacent to every R vertex; the global
  maximum (GM) of the induced MIS problem is R itself, m_g = m_r.
* shared:    each clique designates one shared vertex which has no edge to R;
  every other clique vertex is adjacent to all of R.  The GM is the union of
  the shared vertices and R, m_g = m_l + m_r.

Vertex numbering is deterministic: clique 0's vertices first (the shared
vertex, if any, is last within its clique), then clique 1, ..., then the R
vertices.  Intra-clique edges carry coupling class "clique" and double as the
XX-driver edge set; all other edges carry class "plain".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "CliqueSpec",
    "GicInstance",
    "ExplicitGraph",
    "DriverPartition",
    "CompositeInstance",
    "make_gdis",
    "make_gshare",
    "make_composite",
    "expand",
    "identify_cliques",
    "default_jzz",
    "parse_instance",
    "write_instance",
    "fmt_float",
]

DISJOINT = "disjoint"
SHARED = "shared"
COMPOSITE = "composite"


def fmt_float(v: float) -> str:
    """Format a float with 17 significant digits (exact float64 round-trip)."""
    return f"{float(v):.17g}"


def default_jzz(n_c: int) -> float:
    """Default plain-edge penalty 1 + (sqrt(n_c) + 1)/2 for max clique size n_c."""
    return 1.0 + (math.sqrt(n_c) + 1.0) / 2.0


@dataclass(frozen=True)
class CliqueSpec:
    """One clique of the L side: size n_i, vertex weight w_i, GM-sharing flag."""

    size: int
    weight: float = 1.0
    shares_with_gm: bool = False

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"clique size must be >= 1, got {self.size}")
        if not self.weight > 0:
            raise ValueError(f"clique weight must be > 0, got {self.weight}")
        if self.shares_with_gm and self.size < 2:
            raise ValueError("a sharing clique needs size >= 2")


@dataclass(frozen=True)
class GicInstance:
    """A graph-with-independent-cliques MIS instance.

    Fields mirror the construction parameters; `jzz_clique` may be left None
    and resolved later at schedule-attach time (see schedule.resolve_jzz_clique).
    """

    cliques: tuple[CliqueSpec, ...]
    m_r: int
    r_weight: float = 1.0
    structure: str = DISJOINT
    jzz: float = 0.0  # replaced by default_jzz in the factories when not given
    jzz_clique: float | None = None

    def __post_init__(self):
        if self.structure not in (DISJOINT, SHARED):
            raise ValueError(f"unknown structure {self.structure!r}")
        if len(self.cliques) < 1:
            raise ValueError("need at least one clique (m_l >= 1)")
        if self.m_r < 0:
            raise ValueError("m_r must be >= 0")
        if not self.r_weight > 0:
            raise ValueError("r_weight must be > 0")
        if self.structure == SHARED and not all(c.shares_with_gm for c in self.cliques):
            raise ValueError("shared structure requires every clique to share a vertex")
        if self.structure == DISJOINT and any(c.shares_with_gm for c in self.cliques):
            raise ValueError("disjoint structure admits no shared vertices")
        if not self.jzz > 0:
            raise ValueError("jzz must be > 0")
        # MIS encoding condition: the plain-edge penalty must beat every weight
        wmax = max([c.weight for c in self.cliques] + [self.r_weight])
        if self.m_r > 0 and not self.jzz > wmax:
            raise ValueError(
                f"jzz = {self.jzz} must exceed the largest vertex weight {wmax}"
            )
        if self.jzz_clique is not None and not self.jzz_clique > 0:
            raise ValueError("jzz_clique must be > 0 when given")

    # -- derived quantities -------------------------------------------------
    @property
    def m(self) -> int:
        return len(self.cliques)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(c.size for c in self.cliques)

    @property
    def n_c(self) -> int:
        """Largest clique size."""
        return max(c.size for c in self.cliques)

    @property
    def m_g(self) -> int:
        return self.m_r if self.structure == DISJOINT else self.m + self.m_r

    @property
    def n_vertices(self) -> int:
        return sum(self.sizes) + self.m_r

    @property
    def degeneracy(self) -> int:
        """Number of one-vertex-per-clique local-minimum configurations."""
        d = 1
        for n in self.sizes:
            d *= n
        return d

    @property
    def anticrossing_bearing(self) -> bool:
        """Standing assumption sum_i sqrt(n_i) > m_g for a bearing instance."""
        return sum(math.sqrt(n) for n in self.sizes) > self.m_g

    @property
    def uniform_weight(self) -> float | None:
        ws = {c.weight for c in self.cliques} | {self.r_weight}
        return ws.pop() if len(ws) == 1 else None


def make_gdis(m_l, sizes, m_r, w=1.0, jzz=None, jzz_clique=None) -> GicInstance:
    """Disjoint-structure instance: every clique vertex adjacent to all of R."""
    sizes = tuple(int(n) for n in sizes)
    if len(sizes) != m_l:
        raise ValueError(f"m_l={m_l} but {len(sizes)} sizes given")
    cliques = tuple(CliqueSpec(n, w) for n in sizes)
    if jzz is None:
        jzz = default_jzz(max(sizes))
    return GicInstance(cliques, int(m_r), w, DISJOINT, jzz, jzz_clique)


def make_gshare(m_l, sizes, m_r, w=1.0, jzz=None, jzz_clique=None) -> GicInstance:
    """Shared-structure instance: one designated shared vertex per clique."""
    sizes = tuple(int(n) for n in sizes)
    if len(sizes) != m_l:
        raise ValueError(f"m_l={m_l} but {len(sizes)} sizes given")
    cliques = tuple(CliqueSpec(n, w, shares_with_gm=True) for n in sizes)
    if jzz is None:
        jzz = default_jzz(max(sizes))
    return GicInstance(cliques, int(m_r), w, SHARED, jzz, jzz_clique)


# ---------------------------------------------------------------------------
# explicit graphs


@dataclass
class ExplicitGraph:
    """Explicit vertex/edge lists of an expanded instance.

    edges are (i, j, klass) with klass in {"clique", "plain"}; xx_edges is the
    driver edge set (a subset of the clique-class edges).  Coupling values for
    the two classes ride along so Hamiltonian builders need no side channel.
    """

    vertex_count: int
    weights: list[float]
    edges: list[tuple[int, int, str]]
    xx_edges: list[tuple[int, int]]
    jzz: float = 0.0
    jzz_clique: float | None = None
    # bookkeeping from expand(); None for hand-built graphs
    clique_vertices: list[list[int]] | None = None
    shared_vertices: list[int] | None = None
    r_vertices: list[int] | None = None

    def __post_init__(self):
        for (i, j, k) in self.edges:
            if i == j:
                raise ValueError("self-loop in edge list")
            if k not in ("clique", "plain"):
                raise ValueError(f"unknown edge class {k!r}")
        clique_set = {frozenset((i, j)) for (i, j, k) in self.edges if k == "clique"}
        for (i, j) in self.xx_edges:
            if frozenset((i, j)) not in clique_set:
                raise ValueError("xx_edges must be a subset of clique-class edges")

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.vertex_count)]
        for (i, j, _k) in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj


def expand(inst: GicInstance) -> ExplicitGraph:
    """Expand an instance into explicit vertex/edge lists.

    Deterministic: identical instances give identical numbering and edge order.
    """
    weights: list[float] = []
    clique_vertices: list[list[int]] = []
    shared_vertices: list[int] = []
    v = 0
    for c in inst.cliques:
        vs = list(range(v, v + c.size))
        clique_vertices.append(vs)
        weights.extend([c.weight] * c.size)
        if c.shares_with_gm:
            shared_vertices.append(vs[-1])  # shared vertex is last in its clique
        v += c.size
    r_vertices = list(range(v, v + inst.m_r))
    weights.extend([inst.r_weight] * inst.m_r)

    edges: list[tuple[int, int, str]] = []
    xx_edges: list[tuple[int, int]] = []
    for vs in clique_vertices:
        for a in range(len(vs)):
            for b in range(a + 1, len(vs)):
                edges.append((vs[a], vs[b], "clique"))
                xx_edges.append((vs[a], vs[b]))
    shared = set(shared_vertices)
    for vs in clique_vertices:
        for u in vs:
            if u in shared:
                continue  # the shared vertex has no edge to R
            for r in r_vertices:
                edges.append((u, r, "plain"))

    return ExplicitGraph(
        vertex_count=v + inst.m_r,
        weights=weights,
        edges=edges,
        xx_edges=xx_edges,
        jzz=inst.jzz,
        jzz_clique=inst.jzz_clique,
        clique_vertices=clique_vertices,
        shared_vertices=shared_vertices or None,
        r_vertices=r_vertices,
    )


# ---------------------------------------------------------------------------
# clique identification from a seed


@dataclass
class DriverPartition:
    cliques: list[set[int]]
    leftover: set[int]


class CliqueIdentificationError(ValueError):
    pass


def identify_cliques(graph: ExplicitGraph, seed) -> DriverPartition:
    """Recover the independent-clique structure from a maximal IS `seed`.

    For each seed vertex v, the candidate clique is
        {u : u adjacent to v, u non-adjacent to every other seed vertex} ∪ {v}.
    The candidate sets must be pairwise disjoint cliques with no edges between
    them; anything else is rejected (dependent-clique structures are not
    supported).
    """
    seed = list(dict.fromkeys(seed))  # preserve order, drop dups
    adj = graph.adjacency()
    for v in seed:
        if not (0 <= v < graph.vertex_count):
            raise CliqueIdentificationError(f"seed vertex {v} out of range")
    for i, u in enumerate(seed):
        for v in seed[i + 1:]:
            if v in adj[u]:
                raise CliqueIdentificationError("seed is not an independent set")
    # maximality: every non-seed vertex must see some seed vertex
    seed_set = set(seed)
    for u in range(graph.vertex_count):
        if u not in seed_set and not (adj[u] & seed_set):
            raise CliqueIdentificationError("seed is not maximal")

    cliques: list[set[int]] = []
    for v in seed:
        others = seed_set - {v}
        members = {u for u in adj[v] if not (adj[u] & others)}
        members.add(v)
        cliques.append(members)

    # validate the DriverPartition invariants
    seen: set[int] = set()
    for c in cliques:
        if c & seen:
            raise CliqueIdentificationError(
                "dependent clique structure not supported (overlapping cliques)"
            )
        seen |= c
        for a in c:
            for b in c:
                if a < b and b not in adj[a]:
                    raise CliqueIdentificationError(
                        "dependent clique structure not supported "
                        f"(candidate set {sorted(c)} is not a clique)"
                    )
    for i, c1 in enumerate(cliques):
        for c2 in cliques[i + 1:]:
            for a in c1:
                if adj[a] & c2:
                    raise CliqueIdentificationError(
                        "dependent clique structure not supported "
                        "(edges between candidate cliques)"
                    )
    leftover = set(range(graph.vertex_count)) - seen
    return DriverPartition(cliques=cliques, leftover=leftover)


# ---------------------------------------------------------------------------
# composites (several clique families over one remainder set)


@dataclass(frozen=True)
class CompositeInstance:
    """Several independent clique families sharing one remainder set R.

    Families are mutually fully adjacent (every vertex of family k is adjacent
    to every vertex of family l != k), so one-per-clique picks cannot be mixed
    across families; each family is a separate local-minimum structure.  All
    families here are disjoint-structure (every clique vertex adjacent to all
    of R).
    """

    families: tuple[tuple[int, ...], ...]  # clique sizes per family
    m_r: int
    w: float = 1.0
    jzz: float = 0.0
    jzz_clique: float | None = None

    def __post_init__(self):
        if len(self.families) < 1 or any(len(f) < 1 for f in self.families):
            raise ValueError("need at least one family with at least one clique")
        if not self.jzz > self.w:
            raise ValueError("jzz must exceed the vertex weight")

    @property
    def m_g(self) -> int:
        return self.m_r


def make_composite(families, m_r, w=1.0, jzz=None, jzz_clique=None) -> CompositeInstance:
    fams = tuple(tuple(int(n) for n in f) for f in families)
    if jzz is None:
        jzz = default_jzz(max(max(f) for f in fams))
    return CompositeInstance(fams, int(m_r), w, jzz, jzz_clique)


def expand_composite(comp: CompositeInstance) -> ExplicitGraph:
    """Explicit graph of a composite; family bookkeeping in clique_vertices order."""
    weights: list[float] = []
    clique_vertices: list[list[int]] = []
    family_of_clique: list[int] = []
    v = 0
    for fi, fam in enumerate(comp.families):
        for n in fam:
            vs = list(range(v, v + n))
            clique_vertices.append(vs)
            family_of_clique.append(fi)
            weights.extend([comp.w] * n)
            v += n
    r_vertices = list(range(v, v + comp.m_r))
    weights.extend([comp.w] * comp.m_r)

    edges: list[tuple[int, int, str]] = []
    xx_edges: list[tuple[int, int]] = []
    for vs in clique_vertices:
        for a in range(len(vs)):
            for b in range(a + 1, len(vs)):
                edges.append((vs[a], vs[b], "clique"))
                xx_edges.append((vs[a], vs[b]))
    # clique-R edges, then inter-family edges
    for vs in clique_vertices:
        for u in vs:
            for r in r_vertices:
                edges.append((u, r, "plain"))
    for ci, vs1 in enumerate(clique_vertices):
        for cj in range(ci + 1, len(clique_vertices)):
            if family_of_clique[ci] == family_of_clique[cj]:
                continue
            for u in vs1:
                for t in clique_vertices[cj]:
                    edges.append((u, t, "plain"))

    g = ExplicitGraph(
        vertex_count=v + comp.m_r,
        weights=weights,
        edges=edges,
        xx_edges=xx_edges,
        jzz=comp.jzz,
        jzz_clique=comp.jzz_clique,
        clique_vertices=clique_vertices,
        shared_vertices=None,
        r_vertices=r_vertices,
    )
    return g


# ---------------------------------------------------------------------------
# text format

_KEYS = ("structure", "cliques", "families", "m_r", "w", "jzz", "jzz_clique")


def write_instance(inst) -> str:
    """Serialize to the line-oriented `key = value` format."""
    if isinstance(inst, CompositeInstance):
        lines = [
            f"structure = {COMPOSITE}",
            "families = " + ";".join(",".join(str(n) for n in f)
                                     for f in inst.families),
            f"m_r = {inst.m_r}",
            f"w = {fmt_float(inst.w)}",
            f"jzz = {fmt_float(inst.jzz)}",
        ]
        if inst.jzz_clique is not None:
            lines.append(f"jzz_clique = {fmt_float(inst.jzz_clique)}")
        return "\n".join(lines) + "\n"
    w = inst.uniform_weight
    if w is None:
        raise ValueError("text format only covers uniform-weight instances")
    lines = [
        f"structure = {inst.structure}",
        "cliques = " + ",".join(str(n) for n in inst.sizes),
        f"m_r = {inst.m_r}",
        f"w = {fmt_float(w)}",
        f"jzz = {fmt_float(inst.jzz)}",
    ]
    if inst.jzz_clique is not None:
        lines.append(f"jzz_clique = {fmt_float(inst.jzz_clique)}")
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> GicInstance:
    """Parse the `key = value` instance format (inverse of write_instance)."""
    kv: dict[str, str] = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {ln}: expected `key = value`, got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in _KEYS:
            raise ValueError(f"line {ln}: unknown key {key!r}")
        if key in kv:
            raise ValueError(f"line {ln}: duplicate key {key!r}")
        kv[key] = val.strip()
    for req in ("structure", "m_r"):
        if req not in kv:
            raise ValueError(f"missing required key {req!r}")

    structure = kv["structure"]
    m_r = int(kv["m_r"])
    w = float(kv.get("w", "1"))
    jzz = float(kv["jzz"]) if "jzz" in kv else None
    jzz_clique = float(kv["jzz_clique"]) if "jzz_clique" in kv else None
    if structure == COMPOSITE:
        if "families" not in kv:
            raise ValueError("composite instances need a `families` key")
        fams = tuple(tuple(int(s) for s in grp.split(","))
                     for grp in kv["families"].split(";"))
        return make_composite(fams, m_r, w, jzz, jzz_clique)
    if "cliques" not in kv:
        raise ValueError("missing required key 'cliques'")
    sizes = tuple(int(s) for s in kv["cliques"].split(","))
    maker = {DISJOINT: make_gdis, SHARED: make_gshare}.get(structure)
    if maker is None:
        raise ValueError(f"unknown structure {structure!r}")
    return maker(len(sizes), sizes, m_r, w, jzz, jzz_clique)
