"""Graphs and ribbon graphs with orientations.

A graph is stored through its half-edges (darts): ``vertex_of`` maps each
dart to its vertex, ``partner`` is the fixed-point-free involution pairing
the two darts of every edge, and ``succ`` (ribbon graphs only) is the
cyclic successor of a dart inside its vertex fiber.  Orientations are
orderings of all darts and all vertices together with a sign, modulo
sign-flipping transpositions; graphs are carried in canonical form with a
relative sign, and a graph isomorphic to its orientation reversal is zero.

Canonical labeling is an exhaustive lexicographic minimization with
frontier pruning, which also yields the automorphism count and the
orientation-reversal (zero) flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .graded import perm_sign

RIBBON = "ribbon"
COMMUTATIVE = "commutative"
FLAVORS = (RIBBON, COMMUTATIVE)

INF = 1 << 30  # token for "not yet labeled"


class GraphError(ValueError):
    """Raised for malformed graph data."""


@dataclass(frozen=True)
class Graph:
    """A (ribbon) graph on darts 0..2E-1 and vertices 0..n-1."""

    n_vertices: int
    vertex_of: tuple[int, ...]
    partner: tuple[int, ...]
    succ: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        H = len(self.vertex_of)
        if H % 2:
            raise GraphError("odd number of half-edges")
        if len(self.partner) != H:
            raise GraphError("partner map has wrong length")
        for h in range(H):
            p = self.partner[h]
            if not 0 <= p < H or p == h or self.partner[p] != h:
                raise GraphError("partner map is not a fixed-point-free involution")
        if not all(0 <= v < self.n_vertices for v in self.vertex_of):
            raise GraphError("vertex index out of range")
        seen = set(self.vertex_of)
        if len(seen) != self.n_vertices:
            raise GraphError("every vertex needs valence >= 1")
        if self.succ is not None:
            if len(self.succ) != H:
                raise GraphError("succ map has wrong length")
            for h in range(H):
                if self.vertex_of[self.succ[h]] != self.vertex_of[h]:
                    raise GraphError("succ leaves the vertex fiber")
            # succ restricted to each fiber must be a single cycle
            for v in range(self.n_vertices):
                fiber = [h for h in range(H) if self.vertex_of[h] == v]
                h0 = fiber[0]
                orbit = {h0}
                h = self.succ[h0]
                while h != h0:
                    orbit.add(h)
                    h = self.succ[h]
                if orbit != set(fiber):
                    raise GraphError("succ is not a single cycle on a fiber")

    @property
    def is_ribbon(self) -> bool:
        return self.succ is not None

    @property
    def n_halfedges(self) -> int:
        return len(self.vertex_of)

    @property
    def n_edges(self) -> int:
        return len(self.vertex_of) // 2

    def valences(self) -> tuple[int, ...]:
        val = [0] * self.n_vertices
        for v in self.vertex_of:
            val[v] += 1
        return tuple(val)

    def fiber(self, v: int) -> tuple[int, ...]:
        """Darts at v; in cyclic order starting at the least dart if ribbon."""
        darts = [h for h in range(self.n_halfedges) if self.vertex_of[h] == v]
        if self.succ is None:
            return tuple(darts)
        h0 = min(darts)
        out = [h0]
        h = self.succ[h0]
        while h != h0:
            out.append(h)
            h = self.succ[h]
        return tuple(out)

    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (h, self.partner[h]) for h in range(self.n_halfedges) if h < self.partner[h]
        )

    def components(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """Connected components as (sorted vertices, sorted darts)."""
        H = self.n_halfedges
        seen_v: set[int] = set()
        out = []
        for start in range(self.n_vertices):
            if start in seen_v:
                continue
            stack = [start]
            comp_v = {start}
            while stack:
                v = stack.pop()
                for h in range(H):
                    if self.vertex_of[h] == v:
                        w = self.vertex_of[self.partner[h]]
                        if w not in comp_v:
                            comp_v.add(w)
                            stack.append(w)
            seen_v |= comp_v
            darts = tuple(h for h in range(H) if self.vertex_of[h] in comp_v)
            out.append((tuple(sorted(comp_v)), darts))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def relabel(self, dart_perm: tuple[int, ...], vertex_perm: tuple[int, ...]) -> "Graph":
        """New graph with dart h renamed dart_perm[h], vertex v renamed
        vertex_perm[v]; the orientation sign of the relabeling is the product
        of the two permutation signs."""
        H = self.n_halfedges
        vo = [0] * H
        pa = [0] * H
        su = [0] * H if self.succ is not None else None
        for h in range(H):
            vo[dart_perm[h]] = vertex_perm[self.vertex_of[h]]
            pa[dart_perm[h]] = dart_perm[self.partner[h]]
            if su is not None:
                su[dart_perm[h]] = dart_perm[self.succ[h]]
        return Graph(self.n_vertices, tuple(vo), tuple(pa), tuple(su) if su else None)


def genus(g: Graph) -> int:
    """First Betti number |E| - |V| + 1 of a connected graph."""
    if not g.is_connected():
        raise GraphError("genus requires a connected graph")
    return g.n_edges - g.n_vertices + 1


def segment() -> Graph:
    return Graph(2, (0, 1), (1, 0), (0, 1))


def segment_commutative() -> Graph:
    return Graph(2, (0, 1), (1, 0), None)


def loop(ribbon: bool = True) -> Graph:
    return Graph(1, (0, 0), (1, 0), (1, 0) if ribbon else None)


def star(legs: int, ribbon: bool = True) -> Graph:
    """Star with a central vertex of the given valence and that many leaves.

    Central darts are 0..legs-1 in cyclic order, leaf dart for leg i is
    legs + i at vertex 1 + i.
    """
    if legs < 1:
        raise GraphError("a star needs at least one leg")
    vo = [0] * legs + [1 + i for i in range(legs)]
    pa = [legs + i for i in range(legs)] + list(range(legs))
    su = None
    if ribbon:
        su = [(i + 1) % legs for i in range(legs)] + list(range(legs, 2 * legs))
    return Graph(1 + legs, tuple(vo), tuple(pa), tuple(su) if su else None)


def theta_graph(edges: int = 3, ribbon: bool = True) -> Graph:
    """Two vertices joined by the given number of parallel edges."""
    vo = [0] * edges + [1] * edges
    pa = [edges + i for i in range(edges)] + list(range(edges))
    su = None
    if ribbon:
        su = [(i + 1) % edges for i in range(edges)] + [
            edges + (i + 1) % edges for i in range(edges)
        ]
    return Graph(2, tuple(vo), tuple(pa), tuple(su) if su else None)


# ---------------------------------------------------------------------------
# canonical labeling


def _encode(g: Graph) -> tuple:
    return (
        g.n_vertices,
        g.vertex_of,
        g.partner,
        g.succ if g.succ is not None else (),
    )


def _ribbon_labelings(g: Graph) -> tuple[tuple, list[tuple[tuple[int, ...], tuple[int, ...]]]]:
    """All minimal-encoding labelings of a connected ribbon graph.

    The traversal is deterministic per root dart: a newly discovered vertex
    has its whole fiber labeled in cyclic order starting at the entering
    dart, then darts are processed in label order and unlabeled partners
    spawn new vertices.  Minimizing over the 2E roots gives the canonical
    form; the minimal roots biject with the automorphisms.
    """
    H = g.n_halfedges
    best = None
    best_labelings = []
    for root in range(H):
        dart_label = [-1] * H
        vertex_label = [-1] * g.n_vertices
        order: list[int] = []

        def discover(d: int) -> None:
            v = g.vertex_of[d]
            vertex_label[v] = len({x for x in vertex_label if x >= 0})
            h = d
            while True:
                dart_label[h] = len(order)
                order.append(h)
                h = g.succ[h]  # type: ignore[index]
                if h == d:
                    break

        discover(root)
        i = 0
        while i < len(order):
            p = g.partner[order[i]]
            if dart_label[p] < 0:
                discover(p)
            i += 1
        if len(order) != H:
            raise GraphError("ribbon traversal did not cover the graph")
        dp = tuple(dart_label)
        vp = tuple(vertex_label)
        enc = _encode(g.relabel(dp, vp))
        if best is None or enc < best:
            best = enc
            best_labelings = [(dp, vp)]
        elif enc == best:
            best_labelings.append((dp, vp))
    return best, best_labelings


def _commutative_labelings(g: Graph) -> tuple[tuple, list[tuple[tuple[int, ...], tuple[int, ...]]]]:
    """All minimal labelings of a connected commutative graph.

    Lockstep lexicographic search: states label one dart per step; the token
    of a step is (vertex token, partner token), unlabeled entities reading as
    a large sentinel, and only token-minimal states survive.  The surviving
    complete labelings are exactly the automorphism orbit of the canonical
    labeling.
    """
    H = g.n_halfedges
    # state: (dart_label list, vertex_label list, labeled darts in order)
    states = []
    for root in range(H):
        states.append(([root], {g.vertex_of[root]: 0}))
    # prune after the root step too: all roots are equivalent tokens
    for step in range(1, H):
        proposals: list[tuple[tuple[int, int], tuple, dict]] = []
        for order, vlab in states:
            labeled = set(order)
            # frontier: unlabeled darts at labeled vertices, and unlabeled
            # partners of labeled darts (the latter are at new vertices)
            cands = set()
            for h in range(H):
                if h in labeled:
                    continue
                if g.vertex_of[h] in vlab:
                    cands.add(h)
                elif g.partner[h] in labeled:
                    cands.add(h)
            dart_index = {d: i for i, d in enumerate(order)}
            for h in sorted(cands):
                v = g.vertex_of[h]
                vtok = vlab.get(v, len(vlab))
                ptok = dart_index.get(g.partner[h], INF)
                new_vlab = vlab if v in vlab else {**vlab, v: len(vlab)}
                proposals.append(((vtok, ptok), order + [h], new_vlab))
        if not proposals:
            raise GraphError("commutative traversal did not cover the graph")
        min_tok = min(p[0] for p in proposals)
        states = [(order, vlab) for tok, order, vlab in proposals if tok == min_tok]
    best = None
    best_labelings = []
    for order, vlab in states:
        dp = [0] * H
        for i, d in enumerate(order):
            dp[d] = i
        vp = tuple(vlab[v] for v in range(g.n_vertices))
        enc = _encode(g.relabel(tuple(dp), vp))
        if best is None or enc < best:
            best = enc
            best_labelings = [(tuple(dp), vp)]
        elif enc == best:
            best_labelings.append((tuple(dp), vp))
    return best, best_labelings


@dataclass(frozen=True)
class CanonicalGraph:
    """A graph in canonical labeling with its reference orientation.

    The reference orientation is darts and vertices in canonical index
    order with sign +1.  ``is_zero`` marks graphs carrying an automorphism
    that reverses the orientation; such graphs vanish in the complexes.
    """

    graph: Graph
    is_zero: bool
    aut_count: int

    @property
    def key(self) -> tuple:
        return _encode(self.graph)

    @property
    def n_vertices(self) -> int:
        return self.graph.n_vertices

    @property
    def n_edges(self) -> int:
        return self.graph.n_edges

    def __hash__(self) -> int:
        return hash(self.key)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CanonicalGraph):
            return NotImplemented
        return self.key == other.key

    def __lt__(self, other: "CanonicalGraph") -> bool:
        return sort_key(self) < sort_key(other)


def sort_key(cg: CanonicalGraph) -> tuple:
    return (cg.graph.n_edges, cg.graph.n_vertices, cg.key)


@lru_cache(maxsize=200000)
def _canonicalize_connected_cached(enc: tuple, ribbon: bool):
    g = Graph(enc[0], enc[1], enc[2], enc[3] if ribbon else None)
    if ribbon:
        best, labelings = _ribbon_labelings(g)
    else:
        best, labelings = _commutative_labelings(g)
    signs = {
        perm_sign(dp) * perm_sign(vp) for dp, vp in labelings
    }
    is_zero = len(signs) == 2
    aut = len(labelings)
    dp, vp = labelings[0]
    sign = perm_sign(dp) * perm_sign(vp)
    canon = g.relabel(dp, vp)
    return canon, is_zero, aut, sign


def canonicalize(g: Graph) -> tuple[CanonicalGraph, int]:
    """Canonical form and the orientation sign of the identity-oriented input.

    Returns (canonical graph, sign); the sign is 0 exactly when the graph
    admits an orientation-reversing automorphism.  Disconnected graphs are
    canonicalized componentwise, ordering components by their encodings;
    two identical components with an odd vertex count also force zero.
    """
    comps = g.components()
    if len(comps) == 1:
        canon, is_zero, aut, sign = _canonicalize_connected_cached(
            _encode(g), g.is_ribbon
        )
        cg = CanonicalGraph(canon, is_zero, aut)
        return cg, 0 if is_zero else sign
    # split into component subgraphs
    pieces = []
    for verts, darts in comps:
        vmap = {v: i for i, v in enumerate(verts)}
        dmap = {d: i for i, d in enumerate(darts)}
        sub = Graph(
            len(verts),
            tuple(vmap[g.vertex_of[d]] for d in darts),
            tuple(dmap[g.partner[d]] for d in darts),
            tuple(dmap[g.succ[d]] for d in darts) if g.succ is not None else None,
        )
        canon, is_zero, aut, sign = _canonicalize_connected_cached(
            _encode(sub), g.is_ribbon
        )
        pieces.append((canon, is_zero, aut, sign, verts, darts))
    pieces.sort(key=lambda p: _encode(p[0]))
    # permutation signs of reordering original darts/vertices into blocks
    dart_order = [d for p in pieces for d in p[5]]
    vert_order = [v for p in pieces for v in p[4]]
    dperm = [0] * g.n_halfedges
    for newpos, d in enumerate(dart_order):
        dperm[d] = newpos
    vperm = [0] * g.n_vertices
    for newpos, v in enumerate(vert_order):
        vperm[v] = newpos
    total_sign = perm_sign(tuple(dperm)) * perm_sign(tuple(vperm))
    is_zero = any(p[1] for p in pieces)
    aut = 1
    enc_list = [_encode(p[0]) for p in pieces]
    run = 1
    for i, p in enumerate(pieces):
        aut *= p[2]
        total_sign *= p[3]
        if i and enc_list[i] == enc_list[i - 1]:
            run += 1
            if p[0].n_vertices % 2 == 1:
                is_zero = True
        else:
            for r in range(2, run + 1):
                aut *= r
            run = 1
    for r in range(2, run + 1):
        aut *= r
    # assemble the disjoint union on canonical pieces
    vo: list[int] = []
    pa: list[int] = []
    su: list[int] = []
    voff = 0
    doff = 0
    for p in pieces:
        cg = p[0]
        vo.extend(v + voff for v in cg.vertex_of)
        pa.extend(h + doff for h in cg.partner)
        if cg.succ is not None:
            su.extend(h + doff for h in cg.succ)
        voff += cg.n_vertices
        doff += cg.n_halfedges
    union = Graph(
        voff, tuple(vo), tuple(pa), tuple(su) if g.succ is not None else None
    )
    out = CanonicalGraph(union, is_zero, aut)
    return out, 0 if is_zero else total_sign


def automorphism_count(cg: CanonicalGraph) -> int:
    """Order of the automorphism group (cyclic orders preserved if ribbon)."""
    return cg.aut_count


def disjoint_union(parts: list[CanonicalGraph]) -> tuple[CanonicalGraph, int]:
    """Canonical disjoint union of canonical (usually connected) graphs."""
    vo: list[int] = []
    pa: list[int] = []
    su: list[int] = []
    ribbon = parts[0].graph.succ is not None
    voff = doff = 0
    for p in parts:
        g = p.graph
        vo.extend(v + voff for v in g.vertex_of)
        pa.extend(h + doff for h in g.partner)
        if ribbon:
            su.extend(h + doff for h in g.succ)  # type: ignore[arg-type]
        voff += g.n_vertices
        doff += g.n_halfedges
    return canonicalize(
        Graph(voff, tuple(vo), tuple(pa), tuple(su) if ribbon else None)
    )


# ---------------------------------------------------------------------------
# contraction


def contract_dart(g: Graph, h1: int) -> tuple[Graph, int, dict[int, int]] | None:
    """Contract the edge carrying dart h1 at the labeled level.

    Returns (contracted graph, orientation sign, old-dart -> new-dart map)
    or None when the edge is a loop or its component is a bare segment.
    The sign reorders the orientation so the two contracted darts lead the
    dart order and the two endpoints lead the vertex order; the contraction
    then drops them, keeping the merged vertex first.
    """
    h2 = g.partner[h1]
    v1, v2 = g.vertex_of[h1], g.vertex_of[h2]
    if v1 == v2:
        return None
    val = g.valences()
    if val[v1] == 1 and val[v2] == 1:
        return None  # bare segment component would leave a valence-0 vertex
    H = g.n_halfedges
    # dart permutation sign: (h1, h2, rest in order)
    rest = [h for h in range(H) if h not in (h1, h2)]
    dart_seq = [h1, h2] + rest
    dpos = [0] * H
    for pos, d in enumerate(dart_seq):
        dpos[d] = pos
    sign = perm_sign(tuple(dpos))
    # vertex permutation sign: (v1, v2, others in order)
    others = [v for v in range(g.n_vertices) if v not in (v1, v2)]
    vert_seq = [v1, v2] + others
    vpos = [0] * g.n_vertices
    for pos, v in enumerate(vert_seq):
        vpos[v] = pos
    sign *= perm_sign(tuple(vpos))
    # new labels: darts = rest in order, vertices = merged first then others
    dart_map = {d: i for i, d in enumerate(rest)}
    vmap = {v1: 0, v2: 0}
    for i, v in enumerate(others):
        vmap[v] = i + 1
    vo = tuple(vmap[g.vertex_of[d]] for d in rest)
    pa = tuple(dart_map[g.partner[d]] for d in rest)
    su = None
    if g.succ is not None:
        # cyclic fibers with the contracted dart last: (a_1..a_{i-1}, b_1..b_{j-1})
        def cyc_from(d0: int) -> list[int]:
            out = [d0]
            d = g.succ[d0]
            while d != d0:
                out.append(d)
                d = g.succ[d]
            return out

        a = cyc_from(g.succ[h1])[:-1]  # starts after h1, drops h1
        b = cyc_from(g.succ[h2])[:-1]
        merged = a + b
        new_succ = {}
        if merged:
            for i, d in enumerate(merged):
                new_succ[d] = merged[(i + 1) % len(merged)]
        for d in rest:
            if d in new_succ:
                continue
            if g.vertex_of[d] in (v1, v2):
                continue
            new_succ[d] = g.succ[d]
        su = tuple(dart_map[new_succ[d]] for d in rest)
    return Graph(g.n_vertices - 1, vo, pa, su), sign, dart_map


def contract_edge(g: Graph, h1: int) -> tuple[CanonicalGraph, int] | None:
    """Contract the edge carrying dart h1; canonical result with total sign.

    None encodes zero: a loop, a bare segment component, or a result with
    an orientation-reversing automorphism.
    """
    res = contract_dart(g, h1)
    if res is None:
        return None
    contracted, sign, _ = res
    cg, csign = canonicalize(contracted)
    if csign == 0:
        return None
    return cg, sign * csign


# ---------------------------------------------------------------------------
# enumeration


def _augmentations(g: Graph):
    """All one-edge extensions of a connected graph, as labeled graphs.

    New darts take the two highest labels; a pendant extension adds a new
    leaf vertex, an internal extension joins two (not necessarily distinct)
    existing vertices, inserting into the cyclic orders in all ways.
    """
    H = g.n_halfedges
    ribbon = g.succ is not None

    def insert_positions(v: int):
        """Darts after which a new dart can sit at v; None = fresh fiber."""
        fiber = g.fiber(v)
        return list(fiber)

    # pendant: new dart d1 at v, partner d2 at a fresh leaf vertex
    for v in range(g.n_vertices):
        if ribbon:
            for anchor in insert_positions(v):
                vo = g.vertex_of + (v, g.n_vertices)
                pa = g.partner + (H + 1, H)
                su = list(g.succ) + [0, 0]
                su[H] = g.succ[anchor]
                su[anchor] = H
                su[H + 1] = H + 1
                yield Graph(g.n_vertices + 1, vo, pa, tuple(su))
        else:
            vo = g.vertex_of + (v, g.n_vertices)
            pa = g.partner + (H + 1, H)
            yield Graph(g.n_vertices + 1, vo, pa, None)
    # internal edge (including loops): darts d1 at v, d2 at w
    for v in range(g.n_vertices):
        for w in range(v, g.n_vertices):
            if ribbon:
                for a1 in insert_positions(v):
                    vo = g.vertex_of + (v, w)
                    pa = g.partner + (H + 1, H)
                    base = list(g.succ) + [0, 0]
                    base[H] = base[a1]
                    base[a1] = H
                    # insert the second dart, possibly right after the first
                    anchors2 = [h for h in range(H + 1) if vo[h] == w]
                    for a2 in anchors2:
                        su = list(base)
                        su[H + 1] = su[a2]
                        su[a2] = H + 1
                        yield Graph(g.n_vertices, vo, pa, tuple(su))
            else:
                vo = g.vertex_of + (v, w)
                pa = g.partner + (H + 1, H)
                yield Graph(g.n_vertices, vo, pa, None)


def _enumeration_levels(
    flavor: str,
    max_edges: int,
    max_vertices: int | None = None,
    max_genus: int | None = None,
) -> list[dict[tuple, CanonicalGraph]]:
    """Connected isomorphism classes by edge count, including zero classes.

    Augmentation is monotone in vertex count and genus, so those bounds
    prune the search without losing completeness below them.
    """
    ribbon = flavor == RIBBON
    seg = segment() if ribbon else segment_commutative()
    lp = loop(ribbon)

    def admit(g: Graph) -> bool:
        if max_vertices is not None and g.n_vertices > max_vertices:
            return False
        if max_genus is not None and g.n_edges - g.n_vertices + 1 > max_genus:
            return False
        return True

    level: dict[tuple, CanonicalGraph] = {}
    for g in (seg, lp):
        if admit(g):
            cg, _ = canonicalize(g)
            level[cg.key] = cg
    levels = [level]
    for _ in range(1, max_edges):
        nxt: dict[tuple, CanonicalGraph] = {}
        for cg in levels[-1].values():
            for aug in _augmentations(cg.graph):
                if not admit(aug):
                    continue
                acg, _ = canonicalize(aug)
                nxt.setdefault(acg.key, acg)
        levels.append(nxt)
    return levels


def enumerate_connected(
    max_edges: int,
    flavor: str,
    min_valence: int = 1,
    max_vertices: int | None = None,
    max_genus: int | None = None,
) -> list[CanonicalGraph]:
    """Duplicate-free sorted list of nonzero connected canonical graphs.

    Zero (orientation-reversible) classes are kept internally during the
    build, since nonzero graphs arise as extensions of zero ones, but are
    not emitted.
    """
    if max_edges < 1:
        return []
    if flavor not in FLAVORS:
        raise GraphError(f"unknown flavor {flavor!r}")
    if min_valence not in (1, 2):
        raise GraphError("min_valence must be 1 or 2")
    levels = _enumeration_levels(flavor, max_edges, max_vertices, max_genus)
    out = []
    for level in levels:
        for cg in level.values():
            if cg.is_zero:
                continue
            if min_valence == 2 and min(cg.graph.valences()) < 2:
                continue
            out.append(cg)
    return sorted(out, key=sort_key)


# ---------------------------------------------------------------------------
# text exchange format


def graph_to_text(g: Graph) -> str:
    """Line-oriented record: flavor, vertex count, one line per half-edge
    with its vertex, partner and ribbon successor ('-' when commutative)."""
    lines = [f"graph {RIBBON if g.is_ribbon else COMMUTATIVE}"]
    lines.append(f"vertices {g.n_vertices}")
    for h in range(g.n_halfedges):
        s = g.succ[h] if g.succ is not None else "-"
        lines.append(f"halfedge {h} {g.vertex_of[h]} {g.partner[h]} {s}")
    lines.append("end")
    return "\n".join(lines)


def graph_from_text(text: str) -> Graph:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("graph "):
        raise GraphError("missing graph header")
    flavor = lines[0].split()[1]
    if flavor not in FLAVORS:
        raise GraphError(f"unknown flavor {flavor!r}")
    if not lines[1].startswith("vertices "):
        raise GraphError("missing vertex count")
    n = int(lines[1].split()[1])
    vo: list[int] = []
    pa: list[int] = []
    su: list[int] = []
    for ln in lines[2:]:
        if ln == "end":
            break
        parts = ln.split()
        if parts[0] != "halfedge" or len(parts) != 5:
            raise GraphError(f"bad half-edge line: {ln!r}")
        idx = int(parts[1])
        if idx != len(vo):
            raise GraphError("half-edge lines out of order")
        vo.append(int(parts[2]))
        pa.append(int(parts[3]))
        if parts[4] != "-":
            su.append(int(parts[4]))
    if su and len(su) != len(vo):
        raise GraphError("inconsistent ribbon data")
    return Graph(
        n,
        tuple(vo),
        tuple(pa),
        tuple(su) if flavor == RIBBON else None,
    )
