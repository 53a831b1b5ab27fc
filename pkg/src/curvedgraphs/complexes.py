"""Chain complexes spanned by canonical graphs.

Chains are finite rational combinations of nonzero canonical graph classes
of one flavor and minimum valence.  The differential contracts every edge
with its orientation sign; it lowers vertex and edge counts by one and
preserves genus and the number of connected components, so fixed-genus
truncations by vertex count are honest subcomplexes and homology computed
there agrees with the full complex in all degrees below the truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from .graphs import (
    COMMUTATIVE,
    RIBBON,
    CanonicalGraph,
    Graph,
    GraphError,
    canonicalize,
    contract_dart,
    contract_edge,
    disjoint_union,
    enumerate_connected,
    genus,
    sort_key,
)
from .linalg import SparseRationalMatrix, solve


class ComplexError(ValueError):
    pass


class ResourceCapExceeded(RuntimeError):
    """Raised when a basis grows beyond the configured cap."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


@dataclass
class GraphChain:
    """Finite rational combination of canonical graph basis classes."""

    flavor: str
    min_valence: int
    terms: dict[CanonicalGraph, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.terms = {g: Fraction(v) for g, v in self.terms.items() if v}

    def is_zero(self) -> bool:
        return not self.terms

    def add_term(self, g: CanonicalGraph, coeff: Fraction) -> None:
        if g.is_zero:
            return
        val = self.terms.get(g, Fraction(0)) + coeff
        if val:
            self.terms[g] = val
        else:
            self.terms.pop(g, None)

    def plus(self, other: "GraphChain", scale: Fraction = Fraction(1)) -> "GraphChain":
        out = GraphChain(self.flavor, self.min_valence, dict(self.terms))
        for g, v in other.terms.items():
            out.add_term(g, scale * v)
        return out

    def scaled(self, scale: Fraction) -> "GraphChain":
        return GraphChain(
            self.flavor, self.min_valence, {g: scale * v for g, v in self.terms.items()}
        )

    def graded_terms(self) -> dict[tuple[int, int], dict[CanonicalGraph, Fraction]]:
        """Group terms by (vertex count, edge count)."""
        out: dict[tuple[int, int], dict[CanonicalGraph, Fraction]] = {}
        for g, v in self.terms.items():
            out.setdefault((g.n_vertices, g.n_edges), {})[g] = v
        return out

    def max_edges(self) -> int:
        return max((g.n_edges for g in self.terms), default=0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphChain):
            return NotImplemented
        return (
            self.flavor == other.flavor
            and self.min_valence == other.min_valence
            and self.terms == other.terms
        )


def chain_of(g: Graph, flavor: str, min_valence: int = 1) -> GraphChain:
    """Chain represented by a labeled graph with its identity orientation."""
    cg, sign = canonicalize(g)
    out = GraphChain(flavor, min_valence)
    if sign:
        out.add_term(cg, Fraction(sign))
    return out


def differential(x: GraphChain) -> GraphChain:
    """Sum of signed edge contractions, extended linearly."""
    out = GraphChain(x.flavor, x.min_valence)
    for cg, coeff in x.terms.items():
        g = cg.graph
        for h in range(g.n_halfedges):
            if h > g.partner[h]:
                continue
            res = contract_edge(g, h)
            if res is None:
                continue
            target, sign = res
            if x.min_valence == 2 and min(target.graph.valences()) < 2:
                # cannot happen: contraction preserves valence >= 2
                continue
            out.add_term(target, coeff * sign)
    return out


# ---------------------------------------------------------------------------
# graded bases and homology


def graded_basis(
    flavor: str,
    min_valence: int,
    g: int,
    max_vertices: int,
    basis_cap: int | None = None,
) -> dict[int, list[CanonicalGraph]]:
    """Connected genus-g basis classes keyed by vertex count <= max_vertices."""
    if max_vertices < 1:
        raise ComplexError("max_vertices must be positive")
    max_edges = max_vertices + g - 1
    if max_edges < 1:
        return {}
    basis = enumerate_connected(
        max_edges, flavor, min_valence, max_vertices=max_vertices, max_genus=g
    )
    out: dict[int, list[CanonicalGraph]] = {}
    total = 0
    for cg in basis:
        if genus(cg.graph) != g:
            continue
        out.setdefault(cg.n_vertices, []).append(cg)
        total += 1
        if basis_cap is not None and total > basis_cap:
            raise ResourceCapExceeded(
                f"basis size exceeded cap {basis_cap}", partial=out
            )
    for n in out:
        out[n].sort(key=sort_key)
    return out


def differential_matrix(
    src: list[CanonicalGraph], dst: list[CanonicalGraph], flavor: str, min_valence: int
) -> SparseRationalMatrix:
    """Matrix of the contraction differential from span(src) to span(dst)."""
    index = {g: i for i, g in enumerate(dst)}
    m = SparseRationalMatrix(len(dst), len(src), {})
    for j, cg in enumerate(src):
        column = differential(
            GraphChain(flavor, min_valence, {cg: Fraction(1)})
        )
        for tg, v in column.terms.items():
            i = index.get(tg)
            if i is None:
                raise ComplexError("differential left the graded basis")
            m.set(i, j, m.entries.get((i, j), Fraction(0)) + v)
    return m


@dataclass(frozen=True)
class HomologyRow:
    flavor: str
    min_valence: int
    genus: int
    degree: int
    rank: int
    basis_size: int
    window_valid: bool


def homology_ranks(
    flavor: str,
    min_valence: int,
    g: int,
    max_vertices: int,
    basis_cap: int | None = None,
) -> list[HomologyRow]:
    """Exact homology ranks of the connected genus-g complex.

    Degrees (vertex counts) n <= max_vertices - 1 are reported: there the
    truncation by vertex count agrees with the full complex, because the
    incoming differential from degree n + 1 is fully present.
    """
    basis = graded_basis(flavor, min_valence, g, max_vertices, basis_cap)
    ranks: dict[int, int] = {}
    dims: dict[int, int] = {}
    mats: dict[int, int] = {}
    for n in range(1, max_vertices + 1):
        dims[n] = len(basis.get(n, []))
    for n in range(1, max_vertices + 1):
        src = basis.get(n, [])
        dst = basis.get(n - 1, [])
        if not src:
            mats[n] = 0
            continue
        mats[n] = differential_matrix(src, dst, flavor, min_valence).rank()
    rows = []
    for n in range(1, max_vertices):
        rank_h = dims[n] - mats[n] - mats.get(n + 1, 0)
        rows.append(
            HomologyRow(flavor, min_valence, g, n, rank_h, dims[n], True)
        )
    return rows


def homology_report_csv(rows: list[HomologyRow]) -> str:
    out = ["flavor,min_valence,genus,degree,rank,basis_size,window_valid"]
    for r in rows:
        out.append(
            f"{r.flavor},{r.min_valence},{r.genus},{r.degree},{r.rank},"
            f"{r.basis_size},{str(r.window_valid).lower()}"
        )
    return "\n".join(out) + "\n"


def homology_report_json(rows: list[HomologyRow]) -> list[dict]:
    return [
        {
            "flavor": r.flavor,
            "min_valence": r.min_valence,
            "genus": r.genus,
            "degree": r.degree,
            "rank": r.rank,
            "basis_size": r.basis_size,
            "window_valid": r.window_valid,
        }
        for r in rows
    ]


# ---------------------------------------------------------------------------
# boundary solving


def disconnected_basis(
    flavor: str, min_valence: int, max_edges: int, n_components: int
) -> list[CanonicalGraph]:
    """Nonzero classes with the given component count and total edge bound."""
    if n_components < 1 or max_edges < n_components:
        return []
    connected = enumerate_connected(
        max_edges - (n_components - 1), flavor, min_valence
    )
    if n_components == 1:
        return [c for c in connected if c.n_edges <= max_edges]
    out = []
    for combo in combinations_with_replacement(connected, n_components):
        if sum(c.n_edges for c in combo) > max_edges:
            continue
        union, sign = disjoint_union(list(combo))
        if sign == 0:
            continue
        out.append(union)
    return sorted(set(out), key=sort_key)


def is_boundary(
    x: GraphChain, edge_window: int, basis_cap: int | None = None
) -> GraphChain | None:
    """Solve d(eta) = x inside the edge window, or certify no solution.

    The equation is imposed on all classes with fewer than edge_window
    edges; eta ranges over classes with at most edge_window edges.  Because
    the differential lowers the edge count by exactly one and preserves the
    component count, the restricted system is closed and exact: a None
    verdict means x is not a boundary within this window.
    """
    if x.is_zero():
        return GraphChain(x.flavor, x.min_valence)
    if x.max_edges() > edge_window - 1:
        raise ComplexError("edge window too small to contain the chain")
    counts = sorted({len(g.graph.components()) for g in x.terms})
    result = GraphChain(x.flavor, x.min_valence)
    for k in counts:
        src = [
            c
            for c in disconnected_basis(x.flavor, x.min_valence, edge_window, k)
        ]
        dst = [c for c in src if c.n_edges <= edge_window - 1]
        if basis_cap is not None and len(src) > basis_cap:
            raise ResourceCapExceeded(f"boundary basis exceeded cap {basis_cap}")
        index_dst = {g: i for i, g in enumerate(dst)}
        m = SparseRationalMatrix(len(dst), len(src), {})
        for j, cg in enumerate(src):
            col = differential(GraphChain(x.flavor, x.min_valence, {cg: Fraction(1)}))
            for tg, v in col.terms.items():
                i = index_dst.get(tg)
                if i is None:
                    raise ComplexError("differential left the window basis")
                m.set(i, j, m.entries.get((i, j), Fraction(0)) + v)
        rhs = {}
        for gterm, v in x.terms.items():
            if len(gterm.graph.components()) != k:
                continue
            i = index_dst.get(gterm)
            if i is None:
                raise ComplexError("chain term outside the window basis")
            rhs[i] = v
        sol = solve(m, rhs)
        if sol is None:
            return None
        for j, v in sol.items():
            result.add_term(src[j], v)
    return result


# ---------------------------------------------------------------------------
# interior vertices and the proof homotopy


def _component_split(
    vertices: set[int], darts: set[int], g: Graph
) -> list[tuple[set[int], set[int]]]:
    """Connected components of the subgraph on the given vertices/darts."""
    adj: dict[int, set[int]] = {v: set() for v in vertices}
    for h in darts:
        p = g.partner[h]
        if p in darts:
            adj[g.vertex_of[h]].add(g.vertex_of[p])
            adj[g.vertex_of[p]].add(g.vertex_of[h])
    seen: set[int] = set()
    out = []
    for start in sorted(vertices):
        if start in seen:
            continue
        stack = [start]
        comp = {start}
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comp_darts = {
            h for h in darts if g.vertex_of[h] in comp and g.partner[h] in darts
        }
        out.append((comp, comp_darts))
    return out


def _is_line_segment(vertices: set[int], darts: set[int], g: Graph) -> bool:
    """Single vertex with no edges, or a path (valences <= 2, tree)."""
    val = {v: 0 for v in vertices}
    for h in darts:
        val[g.vertex_of[h]] += 1
    n_edges = len(darts) // 2
    if n_edges != len(vertices) - 1:
        return False
    return all(x <= 2 for x in val.values())


def interior_vertices(g: Graph) -> frozenset[int]:
    """Vertices that are not exterior.

    A vertex is exterior when its valence is at most one, or when it has
    valence two and deleting it (with both incident edges) leaves a
    line-segment component (an isolated vertex counts).  Valence >= 3
    vertices are always interior: with this reading star centers are the
    single-interior-vertex pieces, line segments and circles are entirely
    exterior, and attaching a pendant at an interior vertex changes no
    vertex's status, which is exactly what the graded contraction homotopy
    requires.
    """
    val = g.valences()
    out = set()
    for v in range(g.n_vertices):
        if val[v] <= 1:
            continue
        if val[v] == 2:
            rest_v = set(range(g.n_vertices)) - {v}
            rest_d = {
                h
                for h in range(g.n_halfedges)
                if g.vertex_of[h] != v and g.vertex_of[g.partner[h]] != v
            }
            comps = _component_split(rest_v, rest_d, g)
            if any(_is_line_segment(cv, cd, g) for cv, cd in comps):
                continue
        out.add(v)
    return frozenset(out)


def interior_data(g: Graph) -> tuple[frozenset[int], frozenset[int]]:
    """(interior vertices, darts of edges with both endpoints interior)."""
    iv = interior_vertices(g)
    darts = frozenset(
        h
        for h in range(g.n_halfedges)
        if g.vertex_of[h] in iv and g.vertex_of[g.partner[h]] in iv
    )
    return iv, darts


def interior_key(g: Graph) -> tuple:
    """Isomorphism invariant of the interior subgraph (grading label)."""
    iv, darts = interior_data(g)
    dart_list = sorted(darts)
    vs = sorted({g.vertex_of[h] for h in dart_list})
    isolated = len(iv) - len(vs)
    if not dart_list:
        return (len(iv), isolated, ())
    vmap = {v: i for i, v in enumerate(vs)}
    dmap = {d: i for i, d in enumerate(dart_list)}
    sub = Graph(
        len(vs),
        tuple(vmap[g.vertex_of[d]] for d in dart_list),
        tuple(dmap[g.partner[d]] for d in dart_list),
        None
        if g.succ is None
        else _induced_succ(g, dart_list, dmap),
    )
    cg, _ = canonicalize(sub)
    return (len(iv), isolated, cg.key)


def _induced_succ(g: Graph, dart_list: list[int], dmap: dict[int, int]) -> tuple[int, ...]:
    """Cyclic orders induced on a dart subset: skip missing darts."""
    keep = set(dart_list)
    out = []
    for d in dart_list:
        n = g.succ[d]  # type: ignore[index]
        while n not in keep:
            n = g.succ[n]  # type: ignore[index]
        out.append(dmap[n])
    return tuple(out)


def pendant_extension(g: Graph, h: int) -> tuple[Graph, int]:
    """Add a pendant edge at the vertex of dart h.

    Ribbon flavor: the new dart at the vertex goes one step counterclockwise
    from h, i.e. it becomes the immediate successor of h.  Returns the
    extended graph and the new dart at the old vertex (its partner is the
    last dart, at the new leaf).
    """
    H = g.n_halfedges
    v = g.vertex_of[h]
    vo = g.vertex_of + (v, g.n_vertices)
    pa = g.partner + (H + 1, H)
    su = None
    if g.succ is not None:
        s = list(g.succ) + [0, 0]
        s[H] = s[h]
        s[h] = H
        s[H + 1] = H + 1
        su = tuple(s)
    return Graph(g.n_vertices + 1, vo, pa, su), H


def interior_homotopy(g: Graph, h: int, flavor: str, min_valence: int = 1) -> GraphChain:
    """Proof homotopy on the interior-graded pieces: attach a pendant next
    to h, oriented so the original graph is a plus-one summand of the
    boundary of the result."""
    iv, idarts = interior_data(g)
    if h not in idarts:
        raise ComplexError("h must be a half-edge of the interior subgraph")
    if not idarts:
        raise ComplexError("interior subgraph has no edge")
    sg, new_dart = pendant_extension(g, h)
    res = contract_dart(sg, new_dart)
    if res is None:
        raise ComplexError("pendant contraction unexpectedly degenerate")
    back, tau, _ = res
    # back is g with the vertex of h rotated to the front of the vertex
    # order; normalize so the input reappears in the boundary with sign +1
    from .graded import perm_sign

    v = g.vertex_of[h]
    vperm = tuple(0 if w == v else (w + 1 if w < v else w) for w in range(g.n_vertices))
    tau *= perm_sign(vperm)
    return chain_of(sg, flavor, min_valence).scaled(Fraction(tau))


def graded_piece_differential(g: Graph, flavor: str, min_valence: int = 1):
    """Signed contractions of edges meeting at least one exterior vertex,
    at the labeled level: yields (labeled graph, sign, dart map) triples."""
    iv, _ = interior_data(g)
    for h in range(g.n_halfedges):
        if h > g.partner[h]:
            continue
        if g.vertex_of[h] in iv and g.vertex_of[g.partner[h]] in iv:
            continue
        res = contract_dart(g, h)
        if res is None:
            continue
        yield res
