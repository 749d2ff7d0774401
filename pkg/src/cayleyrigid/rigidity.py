"""Graph isomorphisms between Cayley graphs and checks of their induced maps.

Everything here is verified on finite pieces (balls, cylinders, windows).
A negative answer from :func:`find_ball_isomorphism` only concerns the balls
it was given, never the infinite Cayley graphs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import NotQuasiAlgebraic, SearchLimitExceeded
from .geodesics import LineWindow, quasi_type
from .groups import (
    GeneratingSet,
    GroupElement,
    GroupSpec,
    count_order_le_2,
    make_group,
    torsion_elements,
)
from .metric import DEFAULT_MAX_VERTICES, MetricBall, growth_sequence, torsion_diameter, word_metric

__all__ = [
    "SimpleGraph",
    "VertexBijection",
    "CayleyMapCheck",
    "BallIsomorphismResult",
    "AffinityReport",
    "GroupAffinityReport",
    "QuasiTypeReport",
    "ParityReport",
    "WindowTooSmall",
    "RadiusTooSmall",
    "cartesian_product",
    "complete_graph",
    "ball_graph",
    "build_corollary_witness",
    "corollary_pair_isomorphism",
    "find_ball_isomorphism",
    "flip_map",
    "translation_map",
    "negation_map",
    "verify_graph_automorphism",
    "verify_cayley_isomorphism",
    "induced_free_map",
    "group_affinity",
    "image_quasi_type_consistency",
    "torsion_parity",
    "rank_via_growth",
]


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {(u, v)} out of range")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @cached_property
    def adjacency(self) -> list[frozenset[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return [frozenset(a) for a in adj]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]


def ball_graph(b: MetricBall) -> SimpleGraph:
    return SimpleGraph(b.size, frozenset(b.edges()))


def cartesian_product(a: SimpleGraph, b: SimpleGraph) -> SimpleGraph:
    """Box product; vertex ``(u, x)`` has index ``u * b.n + x``."""
    edges = set()
    for u in range(a.n):
        for x, y in b.edges:
            edges.add((u * b.n + x, u * b.n + y))
    for u, v in a.edges:
        for x in range(b.n):
            edges.add((u * b.n + x, v * b.n + x))
    return SimpleGraph(a.n * b.n, frozenset(edges))


def complete_graph(k: int) -> SimpleGraph:
    if k < 1:
        raise ValueError("complete graph needs at least one vertex")
    return SimpleGraph(k, frozenset(itertools.combinations(range(k), 2)))


@dataclass(frozen=True, eq=False)
class VertexBijection:
    """A bijection between the vertex sets of two finite graphs.

    ``domain`` and ``codomain`` are vertex labels (group elements) indexed
    like the graphs; ``mapping[i]`` is the codomain index of domain vertex
    ``i``.
    """

    domain: tuple
    codomain: tuple
    domain_graph: SimpleGraph = field(repr=False)
    codomain_graph: SimpleGraph = field(repr=False)
    mapping: tuple[int, ...]
    domain_ball: MetricBall | None = field(default=None, repr=False)
    codomain_ball: MetricBall | None = field(default=None, repr=False)

    def is_bijective(self) -> bool:
        return (
            len(self.mapping) == self.domain_graph.n == self.codomain_graph.n
            and sorted(self.mapping) == list(range(self.codomain_graph.n))
        )

    def preserves_edges(self) -> bool:
        """``{u, v}`` is an edge iff ``{phi(u), phi(v)}`` is one."""
        if not self.is_bijective():
            return False
        if len(self.domain_graph.edges) != len(self.codomain_graph.edges):
            return False
        f = self.mapping
        return all(self.codomain_graph.has_edge(f[u], f[v]) for u, v in self.domain_graph.edges)

    def preserves_shells(self) -> bool:
        if self.domain_ball is None or self.codomain_ball is None:
            raise ValueError("shell check needs metric balls on both sides")
        d1, d2 = self.domain_ball.dist, self.codomain_ball.dist
        return all(d1[i] == d2[j] for i, j in enumerate(self.mapping))

    def fixes_origin(self) -> bool:
        return self.mapping[0] == 0 if self.domain_ball is not None else False

    def inverse(self) -> VertexBijection:
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return VertexBijection(
            self.codomain,
            self.domain,
            self.codomain_graph,
            self.domain_graph,
            tuple(inv),
            self.codomain_ball,
            self.domain_ball,
        )

    def then(self, other: VertexBijection) -> VertexBijection:
        """``other o self``; the middle vertex sets must be indexed identically."""
        if other.domain_graph.n != self.codomain_graph.n:
            raise ValueError("cannot compose: middle graphs differ in size")
        return VertexBijection(
            self.domain,
            other.codomain,
            self.domain_graph,
            other.codomain_graph,
            tuple(other.mapping[j] for j in self.mapping),
            self.domain_ball,
            other.codomain_ball,
        )

    def as_function(self) -> Callable:
        table = {self.domain[i]: self.codomain[j] for i, j in enumerate(self.mapping)}

        def phi(x):
            try:
                return table[x]
            except KeyError:
                raise KeyError(f"{x!r} is outside the domain of the bijection") from None

        return phi

    def to_json(self) -> dict:
        def label(v):
            return v.to_json() if isinstance(v, GroupElement) else v

        return {
            "map": list(self.mapping),
            "domain": [label(v) for v in self.domain],
            "codomain": [label(v) for v in self.codomain],
        }


def _induced_cayley_graph(s: GeneratingSet, vertices: Sequence[GroupElement]) -> SimpleGraph:
    index = {v.coords: i for i, v in enumerate(vertices)}
    reduce = s.group.reduce
    gens = [e.coords for e in s.edge_generators]
    edges = set()
    for i, v in enumerate(vertices):
        c = v.coords
        for g in gens:
            j = index.get(reduce([a + b for a, b in zip(c, g)]))
            if j is not None and j != i:
                edges.add((min(i, j), max(i, j)))
    return SimpleGraph(len(vertices), frozenset(edges))


def _corollary_genset(g: GroupSpec) -> GeneratingSet:
    basis = [g.element(tuple(int(i == j) for j in range(g.rank)), (0,) * len(g.torsion)) for i in range(g.rank)]
    tors = [t for t in torsion_elements(g) if not t.is_zero()]
    return GeneratingSet(g, basis + tors)


def build_corollary_witness(g: GroupSpec, r: int) -> tuple[GeneratingSet, VertexBijection]:
    """Identify ``Cay(G, S u tors G)`` with ``Cay(Z^d, basis) [] K_k`` on a finite piece.

    ``S`` is the standard basis of the free part.  The domain is the cylinder
    ``{(x, t) : |x|_1 <= r}`` inside ``G``; the codomain is the product of the
    radius-``r`` ball of ``Z^d`` with ``K_k``.  Codomain vertices are labelled
    by elements of the model group ``Z^d x Z/k`` (``K_k`` is the Cayley graph
    of ``Z/k`` for all non-zero elements).  The map ``(x, t) -> (x, index(t))``
    sends the identity to the identity and is checked to be an isomorphism of
    induced subgraphs.
    """
    d, k = g.rank, g.torsion_order()
    s = _corollary_genset(g)
    zd = make_group(d)
    zd_basis = GeneratingSet(zd, [zd.element(tuple(int(i == j) for j in range(d))) for i in range(d)])
    zball = word_metric(zd_basis).ball(r)
    model = GroupSpec(d, (k,) if k > 1 else ())
    tors = torsion_elements(g)
    tindex = {t.torsion: i for i, t in enumerate(tors)}

    product = cartesian_product(ball_graph(zball), complete_graph(k))
    codomain = tuple(
        model.element(x.free, (i,) if k > 1 else ()) for x in zball.vertices for i in range(k)
    )
    domain = tuple(g.element(x.free, t.torsion) for x in zball.vertices for t in tors)
    domain_graph = _induced_cayley_graph(s, domain)
    mapping = tuple(
        u * k + tindex[v.torsion] for u in range(zball.size) for v in domain[u * k : (u + 1) * k]
    )
    phi = VertexBijection(domain, codomain, domain_graph, product, mapping)
    if not phi.preserves_edges():
        raise RuntimeError(f"corollary witness for {g} failed edge verification at radius {r}")
    return s, phi


def corollary_pair_isomorphism(g1: GroupSpec, g2: GroupSpec, r: int) -> VertexBijection:
    """Origin-fixing isomorphism between the radius-``r`` balls of two groups of equal rank and torsion order.

    Obtained by composing the two corollary witnesses through the shared
    product graph, then checked directly on the word-metric balls of
    ``Cay(G_i, S_i u tors G_i)``.
    """
    if g1.rank != g2.rank or g1.torsion_order() != g2.torsion_order():
        raise ValueError("groups differ in rank or torsion order")
    s1, w1 = build_corollary_witness(g1, r)
    s2, w2 = build_corollary_witness(g2, r)
    composed = w1.then(w2.inverse())
    f = composed.as_function()
    b1, b2 = word_metric(s1).ball(r), word_metric(s2).ball(r)
    mapping = tuple(b2.index[f(v).coords] for v in b1.vertices)
    phi = VertexBijection(
        tuple(b1.vertices), tuple(b2.vertices), ball_graph(b1), ball_graph(b2), mapping, b1, b2
    )
    if not (phi.preserves_edges() and phi.preserves_shells()):
        raise RuntimeError(f"composed witness {g1} -> {g2} failed on the radius-{r} balls")
    return phi


@dataclass(frozen=True)
class BallIsomorphismResult:
    bijection: VertexBijection | None
    nodes: int
    radius: tuple[int, int]
    fix_origin: bool

    @property
    def found(self) -> bool:
        return self.bijection is not None

    def to_json(self) -> dict:
        out = {
            "found": self.found,
            "nodes_explored": self.nodes,
            "radius": list(self.radius),
            "fix_origin": self.fix_origin,
        }
        if self.bijection is not None:
            out["witness"] = self.bijection.to_json()
        else:
            out["scope"] = "non-existence holds for these finite balls only"
        return out


def _refine(graphs: list[SimpleGraph], colors: list[list]) -> list[list[int]]:
    """Colour refinement run jointly so that colour ids are comparable across graphs."""
    cur = [list(c) for c in colors]
    palette: dict = {}
    cur = [[palette.setdefault(c, len(palette)) for c in cs] for cs in cur]
    while True:
        palette = {}
        nxt = []
        for g, cs in zip(graphs, cur):
            row = []
            for v in range(g.n):
                sig = (cs[v], tuple(sorted(cs[u] for u in g.adjacency[v])))
                row.append(palette.setdefault(sig, len(palette)))
            nxt.append(row)
        if all(len(set(a)) == len(set(b)) for a, b in zip(cur, nxt)):
            return nxt
        cur = nxt


def find_ball_isomorphism(
    a: MetricBall, b: MetricBall, fix_origin: bool = True, max_nodes: int = 1_000_000
) -> BallIsomorphismResult:
    """Backtracking search for an isomorphism between two balls' induced graphs.

    Candidates are pruned by refined colours seeded with (distance shell,
    degree) and by adjacency to already-mapped vertices.  With
    ``fix_origin`` the identity must map to the identity.  Raises
    :class:`SearchLimitExceeded` after ``max_nodes`` candidate trials.
    """
    ga, gb = ball_graph(a), ball_graph(b)
    radius = (a.radius, b.radius)

    def fail(nodes=0):
        return BallIsomorphismResult(None, nodes, radius, fix_origin)

    if ga.n != gb.n or len(ga.edges) != len(gb.edges):
        return fail()
    if sorted(ga.degrees()) != sorted(gb.degrees()):
        return fail()
    seed_a = [(int(a.dist[v]) if fix_origin else 0, len(ga.adjacency[v])) for v in range(ga.n)]
    seed_b = [(int(b.dist[v]) if fix_origin else 0, len(gb.adjacency[v])) for v in range(gb.n)]
    ca, cb = _refine([ga, gb], [seed_a, seed_b])
    if sorted(ca) != sorted(cb):
        return fail()

    by_color: dict[int, list[int]] = {}
    for v, c in enumerate(cb):
        by_color.setdefault(c, []).append(v)

    # BFS order from the origin keeps every later vertex adjacent to a mapped one
    order, seen = [], {0}
    queue = [0]
    while queue:
        v = queue.pop(0)
        order.append(v)
        for u in sorted(ga.adjacency[v]):
            if u not in seen:
                seen.add(u)
                queue.append(u)
    order += [v for v in range(ga.n) if v not in seen]
    position = {v: i for i, v in enumerate(order)}
    anchors = []
    for v in order:
        earlier = [u for u in ga.adjacency[v] if position[u] < position[v]]
        anchors.append(earlier)

    f = [-1] * ga.n
    used = [False] * gb.n
    nodes = 0

    def candidates(i: int):
        v = order[i]
        if i == 0 and fix_origin:
            return [0] if ca[v] == cb[0] else []
        prev = anchors[i]
        pool = gb.adjacency[f[prev[0]]] if prev else by_color[ca[v]]
        return sorted(c for c in pool if not used[c] and cb[c] == ca[v])

    def consistent(i: int, c: int) -> bool:
        v = order[i]
        nbr = gb.adjacency[c]
        if any(f[u] not in nbr for u in anchors[i]):
            return False
        # no extra edges from c into the already-mapped part
        return sum(1 for w in nbr if used[w]) == len(anchors[i])

    stack = [iter(candidates(0))]
    while stack:
        i = len(stack) - 1
        placed = False
        for c in stack[-1]:
            nodes += 1
            if nodes > max_nodes:
                raise SearchLimitExceeded(nodes)
            if consistent(i, c):
                f[order[i]] = c
                used[c] = True
                placed = True
                break
        if not placed:
            stack.pop()
            if stack:
                j = len(stack) - 1
                used[f[order[j]]] = False
                f[order[j]] = -1
            continue
        if len(stack) == ga.n:
            phi = VertexBijection(
                tuple(a.vertices), tuple(b.vertices), ga, gb, tuple(f), a, b
            )
            return BallIsomorphismResult(phi, nodes, radius, fix_origin)
        stack.append(iter(candidates(len(stack))))
    return fail(nodes)


_ZZ2 = GroupSpec(1, (2,))


def flip_map(n: int) -> Callable[[GroupElement], GroupElement]:
    """The involution of ``Z x Z/2`` that swaps the torsion bit over ``x = n``."""

    def flip(g: GroupElement) -> GroupElement:
        if g.group != _ZZ2:
            raise ValueError(f"flip maps are defined on Z x Z/2, not {g.group}")
        (x,), (y,) = g.free, g.torsion
        return g if x != n else GroupElement(_ZZ2, (x,), (1 - y,))

    flip.__name__ = f"flip_{n}"
    return flip


def translation_map(z: GroupElement) -> Callable[[GroupElement], GroupElement]:
    return lambda g: g + z


def negation_map(g: GroupElement) -> GroupElement:
    return -g


@dataclass(frozen=True)
class CayleyMapCheck:
    ok: bool
    radius: int
    vertices: int
    violation: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_cayley_isomorphism(
    phi: Callable[[GroupElement], GroupElement],
    s: GeneratingSet,
    s2: GeneratingSet,
    r: int,
    center: GroupElement | None = None,
) -> CayleyMapCheck:
    """Check that ``phi`` is injective and preserves adjacency both ways on a ball.

    The ball has radius ``r`` around ``center`` (default: the identity).
    Edges and non-edges are tested algebraically (``w - v`` in ``S`` versus
    ``phi(w) - phi(v)`` in ``S'``) for every pair of ball vertices that is
    adjacent on either side.
    """
    b = word_metric(s).ball(r)
    c = center if center is not None else s.group.zero()
    verts = [c + v for v in b.vertices]
    images = [phi(v) for v in verts]
    for im in images:
        if im.group != s2.group:
            raise ValueError(f"image {im!r} is not in {s2.group}")
    pre = {}
    for v, im in zip(verts, images):
        if im in pre:
            return CayleyMapCheck(False, r, len(verts), {"kind": "not injective", "x": [pre[im].to_json(), v.to_json()]})
        pre[im] = v
    inside = {v: im for v, im in zip(verts, images)}
    gens, gens2 = s.edge_generators, s2.edge_generators
    for v, im in zip(verts, images):
        for t in gens:
            w = v + t
            if w in inside and (inside[w] - im) not in s2:
                return CayleyMapCheck(
                    False, r, len(verts),
                    {"kind": "edge lost", "edge": [v.to_json(), w.to_json()],
                     "image": [im.to_json(), inside[w].to_json()]},
                )
        for t in gens2:
            u = im + t
            w = pre.get(u)
            if w is not None and (w - v) not in s:
                return CayleyMapCheck(
                    False, r, len(verts),
                    {"kind": "edge created", "pair": [v.to_json(), w.to_json()],
                     "image": [im.to_json(), u.to_json()]},
                )
    return CayleyMapCheck(True, r, len(verts))


def verify_graph_automorphism(
    phi: Callable[[GroupElement], GroupElement], s: GeneratingSet, r: int
) -> CayleyMapCheck:
    """Automorphism check of ``Cay(G, S)`` on the radius-``r`` ball."""
    return verify_cayley_isomorphism(phi, s, s, r)


class WindowTooSmall(ValueError):
    pass


class RadiusTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class AffinityReport:
    well_defined: bool
    affine: bool
    linear_part: tuple[tuple[int, ...], ...] | None
    determinant: int | None
    bijective: bool
    translation: tuple[int, ...]
    samples: int
    violation: dict | None = None

    @property
    def ok(self) -> bool:
        return self.well_defined and self.affine and self.bijective

    def to_json(self) -> dict:
        return {
            "well_defined": self.well_defined,
            "affine": self.affine,
            "bijective": self.bijective,
            "linear_part": None if self.linear_part is None else [list(r) for r in self.linear_part],
            "determinant": self.determinant,
            "translation": list(self.translation),
            "samples": self.samples,
            "violation": self.violation,
        }


def _as_callable(phi) -> Callable:
    return phi.as_function() if isinstance(phi, VertexBijection) else phi


def _det(rows: list[list[int]]) -> int:
    from sympy import Matrix

    return int(Matrix(rows).det()) if rows else 1


def induced_free_map(
    phi, g: GroupSpec, g2: GroupSpec, window: Iterable[GroupElement]
) -> AffinityReport:
    """Check that ``[x] -> [phi(x)]`` is a well-defined affine bijection of free quotients.

    With ``psi(x) = pi(phi(x)) - pi(phi(0))``:

    1. ``pi(phi(x))`` depends only on ``pi(x)`` over the sample window;
    2. ``psi(x + y) = psi(x) + psi(y)`` whenever ``x, y, x + y`` are sampled;
    3. the matrix with columns ``psi(e_i)`` reproduces ``psi`` on the window
       and has determinant ``+-1``.

    The window must contain the identity and the free basis vectors.
    """
    f = _as_callable(phi)
    window = list(dict.fromkeys(window))
    zero = g.zero()
    present = set(window)
    basis = [g.element(tuple(int(i == j) for j in range(g.rank)), (0,) * len(g.torsion)) for i in range(g.rank)]
    missing = [e for e in [zero] + basis if e not in present]
    if missing:
        raise WindowTooSmall(f"sample window lacks {missing}; cannot determine the linear part")
    image = {x: f(x) for x in window}
    for im in image.values():
        if im.group != g2:
            raise ValueError(f"image {im!r} is not in {g2}")
    origin = image[zero].free

    def psi(x):
        return tuple(a - b for a, b in zip(image[x].free, origin))

    violation = None
    well_defined = True
    by_class: dict = {}
    for x in window:
        ref = by_class.setdefault(x.free, x)
        if image[ref].free != image[x].free:
            well_defined = False
            violation = {"kind": "not well defined", "x": x.to_json(), "x_prime": ref.to_json()}
            break

    affine = True
    if violation is None:
        for x, y in itertools.product(window, repeat=2):
            z = x + y
            if z in present:
                lhs = psi(z)
                rhs = tuple(p + q for p, q in zip(psi(x), psi(y)))
                if lhs != rhs:
                    affine = False
                    violation = {"kind": "not additive", "x": x.to_json(), "y": y.to_json(),
                                 "psi_sum": list(lhs), "sum_psi": list(rhs)}
                    break

    cols = [psi(e) for e in basis]
    matrix = tuple(tuple(col[i] for col in cols) for i in range(g2.rank))
    bijective = False
    det = None
    if g.rank == g2.rank:
        det = _det([list(r) for r in matrix])
        bijective = abs(det) == 1
    if violation is None:
        for x in window:
            pred = tuple(sum(matrix[i][j] * x.free[j] for j in range(g.rank)) for i in range(g2.rank))
            if pred != psi(x):
                affine = False
                violation = {"kind": "linear part mismatch", "x": x.to_json(),
                             "psi": list(psi(x)), "predicted": list(pred)}
                break
    return AffinityReport(well_defined, affine, matrix, det, bijective, origin, len(window), violation)


@dataclass(frozen=True)
class GroupAffinityReport:
    affine: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.affine


def group_affinity(phi, window: Sequence[GroupElement]) -> GroupAffinityReport:
    """Whether ``psi(x) = phi(x) - phi(0)`` is additive on the window, in ``G`` itself.

    Doubling pairs ``x = y`` are scanned first, smallest free part first and
    positive before negative, so the witness reported is the simplest
    ``psi(2x) != 2 psi(x)`` when one exists.
    """
    f = _as_callable(phi)
    window = sorted(
        dict.fromkeys(window),
        key=lambda x: (sum(abs(c) for c in x.free), tuple(-c for c in x.free), x.torsion),
    )
    present = set(window)
    zero = window[0].group.zero()
    base = f(zero)

    def psi(x):
        return f(x) - base

    pairs = itertools.chain(((x, x) for x in window), itertools.product(window, repeat=2))
    for x, y in pairs:
        z = x + y
        if z not in present:
            continue
        lhs, rhs = psi(z), psi(x) + psi(y)
        if lhs != rhs:
            return GroupAffinityReport(
                False,
                {"x": x.to_json(), "y": y.to_json(), "sum": z.to_json(),
                 "psi_sum": list(lhs.coords), "sum_psi": list(rhs.coords)},
            )
    return GroupAffinityReport(True)


@dataclass(frozen=True)
class QuasiTypeReport:
    quasi_types: list
    agree: bool
    not_quasi_algebraic: list[int]

    def to_json(self) -> dict:
        return {
            "quasi_types": [None if q is None else list(q) for q in self.quasi_types],
            "agree": self.agree,
            "not_quasi_algebraic": self.not_quasi_algebraic,
        }


def image_quasi_type_consistency(phi, lines: Sequence[LineWindow], codomain: GeneratingSet) -> QuasiTypeReport:
    """Quasi-types of the images of parallel quasi-algebraic lines.

    Images that fail to be quasi-algebraic are listed separately from a
    disagreement between quasi-algebraic images.
    """
    f = _as_callable(phi)
    types = []
    bad = []
    for i, line in enumerate(lines):
        image = line.map(f, codomain)
        try:
            types.append(quasi_type(image))
        except NotQuasiAlgebraic:
            types.append(None)
            bad.append(i)
    found = {t for t in types if t is not None}
    return QuasiTypeReport(types, len(found) <= 1, bad)


@dataclass(frozen=True)
class ParityReport:
    radius: int
    beta: int
    parity: int
    torsion_order: int
    order_le_2: int

    @property
    def agree(self) -> bool:
        return self.parity == self.torsion_order % 2 == self.order_le_2 % 2

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "beta": self.beta,
            "parity": "odd" if self.parity else "even",
            "torsion_order": self.torsion_order,
            "order_le_2": self.order_le_2,
            "agree": self.agree,
        }


def torsion_parity(s: GeneratingSet, max_vertices: int = DEFAULT_MAX_VERTICES) -> ParityReport:
    """Parity of ``|tors G|`` read off one ball size.

    Uses ``r = diam tors G + 1``; negation is a graph automorphism fixing the
    ball whose fixed points are the elements of order at most 2.
    """
    r = torsion_diameter(s, max_vertices) + 1
    beta = growth_sequence(s, r, max_vertices)[r]
    g = s.group
    return ParityReport(r, beta, beta % 2, g.torsion_order(), count_order_le_2(g))


def rank_via_growth(s: GeneratingSet, r_max: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> int:
    """Polynomial growth degree: least-squares slope of ``log beta`` against ``log r``.

    The fit uses radii from ``ceil(r_max / 2)`` to ``r_max``.
    """
    if r_max < 4:
        raise RadiusTooSmall(f"r_max={r_max} is too small for a growth fit (need >= 4)")
    beta = growth_sequence(s, r_max, max_vertices)
    rs = np.arange(math.ceil(r_max / 2), r_max + 1)
    slope = np.polyfit(np.log(rs), np.log(np.array(beta, dtype=float)[rs]), 1)[0]
    return int(round(slope))
