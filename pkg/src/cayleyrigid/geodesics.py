"""Geodesic segments and lines in Cayley graphs of Abelian groups.

Lines are handled through finite windows ``gamma_a, ..., gamma_b`` with
``a <= 0 <= b``; every line-level property is checked on the window only.
All norm comparisons are exact: squared Euclidean norms and inner products
of free parts are integers, and the quasi-convexity constants are obtained
as rational ceilings.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import GeodesicLimitExceeded, NotQuasiAlgebraic
from .groups import GeneratingSet, GroupElement, torsion_elements
from .metric import DEFAULT_MAX_VERTICES, word_metric

__all__ = [
    "Segment",
    "LineWindow",
    "QuasiConvexityCertificate",
    "CertificateError",
    "NotMaximal",
    "ZeroQuasiType",
    "ConvexityResult",
    "FellowTravellerResult",
    "TransferReport",
    "MaxNormGenerators",
    "enumerate_geodesics",
    "count_geodesics",
    "reorder_segment",
    "algebraic_line",
    "quasi_type",
    "is_geodesic_window",
    "max_norm_generators",
    "is_convex_on_window",
    "nonconvexity_witness_by_reordering",
    "quasiconvexity_certificate",
    "check_fellow_traveller",
    "periodicize",
    "parallel_geodesic_transfer",
]

DEFAULT_MAX_GEODESICS = 100_000


def _sq(v: Sequence[int]) -> int:
    return sum(x * x for x in v)


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def _check_steps(genset: GeneratingSet, points: Sequence[GroupElement]) -> None:
    reduce = genset.group.reduce
    for j in range(len(points) - 1):
        step = reduce([b - a for a, b in zip(points[j].coords, points[j + 1].coords)])
        if not genset.contains_coords(step) or not any(step):
            raise ValueError(f"step {j} ({points[j]!r} -> {points[j + 1]!r}) is not a generator")


@dataclass(frozen=True)
class Segment:
    """A path ``(g_0, ..., g_n)`` whose steps ``g_{j+1} - g_j`` lie in ``S``."""

    genset: GeneratingSet = field(repr=False)
    points: tuple[GroupElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise ValueError("a segment needs at least one point")
        _check_steps(self.genset, self.points)

    def __len__(self) -> int:
        return len(self.points) - 1

    @property
    def start(self) -> GroupElement:
        return self.points[0]

    @property
    def end(self) -> GroupElement:
        return self.points[-1]

    @property
    def steps(self) -> list[GroupElement]:
        return [b - a for a, b in zip(self.points, self.points[1:])]

    def is_geodesic(self) -> bool:
        return word_metric(self.genset).distance(self.start, self.end) == len(self)

    def to_json(self) -> list[list[int]]:
        return [list(p.coords) for p in self.points]


@dataclass(frozen=True)
class LineWindow:
    """The slice ``gamma_a, ..., gamma_b`` of a Z-path, stored from ``a`` on."""

    genset: GeneratingSet = field(repr=False)
    a: int
    points: tuple[GroupElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if self.a > 0 or self.b < 0:
            raise ValueError(f"window [{self.a}, {self.b}] must contain 0")
        _check_steps(self.genset, self.points)

    @classmethod
    def from_steps(
        cls, genset: GeneratingSet, start: GroupElement, steps: Sequence[GroupElement], a: int = 0
    ) -> LineWindow:
        """Window with ``gamma_a = start`` that then follows ``steps``."""
        pts = [start]
        for s in steps:
            pts.append(pts[-1] + s)
        return cls(genset, a, tuple(pts))

    @property
    def b(self) -> int:
        return self.a + len(self.points) - 1

    @property
    def base(self) -> GroupElement:
        return self.points[-self.a]

    def __getitem__(self, n: int) -> GroupElement:
        if not self.a <= n <= self.b:
            raise IndexError(f"index {n} outside window [{self.a}, {self.b}]")
        return self.points[n - self.a]

    @property
    def steps(self) -> list[GroupElement]:
        return [q - p for p, q in zip(self.points, self.points[1:])]

    def is_algebraic(self) -> bool:
        return len(set(self.steps)) <= 1

    def is_quasi_algebraic(self) -> bool:
        return len({s.free for s in self.steps}) <= 1

    def segment(self, n: int, m: int) -> Segment:
        return Segment(self.genset, self.points[n - self.a : m - self.a + 1])

    def map(self, phi, genset: GeneratingSet) -> LineWindow:
        """Pointwise image ``phi o gamma`` as a window in another Cayley graph."""
        return LineWindow(genset, self.a, tuple(phi(p) for p in self.points))

    def to_json(self) -> dict:
        return {"a": self.a, "points": [list(p.coords) for p in self.points]}


def enumerate_geodesics(
    s: GeneratingSet,
    x: GroupElement,
    y: GroupElement,
    max_geodesics: int = DEFAULT_MAX_GEODESICS,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> list[Segment]:
    """All geodesic segments from ``x`` to ``y``, in lexicographic step order.

    Depth-first search from ``x`` over steps that decrease the distance to
    ``y`` by exactly one.  Raises :class:`GeodesicLimitExceeded` (carrying the
    exact count) when there are more than ``max_geodesics`` of them.
    """
    metric = word_metric(s, max_vertices)
    g = y - x
    total = metric.geodesic_count(g)
    if total > max_geodesics:
        raise GeodesicLimitExceeded(total, max_geodesics)
    steps = [e.coords for e in sorted(s.edge_generators)]
    target = g.coords
    k = metric.norm(target)
    reduce = metric.reduce
    out: list[list[tuple[int, ...]]] = []

    def walk(path: list[tuple[int, ...]], remaining: int):
        if remaining == 0:
            out.append(list(path))
            return
        here = path[-1]
        for t in steps:
            nxt = reduce([a + b for a, b in zip(here, t)])
            if metric.norm([a - b for a, b in zip(target, nxt)]) == remaining - 1:
                path.append(nxt)
                walk(path, remaining - 1)
                path.pop()

    walk([(0,) * s.group.dim], k)
    grp = s.group
    return [Segment(s, tuple(x + grp.from_coords(c) for c in p)) for p in out]


def count_geodesics(
    s: GeneratingSet, x: GroupElement, y: GroupElement, max_vertices: int = DEFAULT_MAX_VERTICES
) -> int:
    """Number of geodesics from ``x`` to ``y`` (shortest-path count on the ball of radius ``d(x, y)``)."""
    return word_metric(s, max_vertices).geodesic_count(y - x)


def reorder_segment(seg: Segment, perm: Sequence[int]) -> Segment:
    """Apply the steps of a geodesic segment in the order ``perm``.

    In an Abelian group the result is again a geodesic with the same
    endpoints.
    """
    n = len(seg)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{list(perm)} is not a permutation of range({n})")
    if not seg.is_geodesic():
        raise ValueError("reordering requires a geodesic segment")
    steps = seg.steps
    pts = [seg.start]
    for i in perm:
        pts.append(pts[-1] + steps[i])
    return Segment(seg.genset, tuple(pts))


def algebraic_line(
    s: GeneratingSet, h: GroupElement, step: GroupElement, a: int, b: int
) -> LineWindow:
    """Window ``n -> h + n * step`` for ``a <= n <= b``."""
    if step not in s or step.is_zero():
        raise ValueError(f"{step!r} is not a generator")
    return LineWindow(s, a, tuple(h + n * step for n in range(a, b + 1)))


def quasi_type(line: LineWindow) -> tuple[int, ...]:
    """Common free part of all steps of a quasi-algebraic window."""
    steps = line.steps
    if not steps:
        raise ValueError("a window with no steps has no quasi-type")
    free = steps[0].free
    for i, st in enumerate(steps):
        if st.free != free:
            raise NotQuasiAlgebraic(line.a + i)
    return free


def is_geodesic_window(line: LineWindow) -> bool:
    # a path is geodesic iff its endpoints are at distance equal to its length
    metric = word_metric(line.genset)
    return metric.distance(line.points[0], line.points[-1]) == line.b - line.a


class MaxNormGenerators(NamedTuple):
    elements: list[GroupElement]
    all_torsion: bool


def max_norm_generators(s: GeneratingSet) -> MaxNormGenerators:
    """Generators whose free part has maximal Euclidean norm.

    Empty (with ``all_torsion`` set) when every generator is a torsion element.
    """
    gens = s.edge_generators
    best = max((_sq(e.free) for e in gens), default=0)
    if best == 0:
        return MaxNormGenerators([], True)
    return MaxNormGenerators([e for e in gens if _sq(e.free) == best], False)


@dataclass(frozen=True)
class ConvexityResult:
    convex: bool
    witness: tuple[int, int, Segment] | None = None

    def __bool__(self) -> bool:
        return self.convex


def is_convex_on_window(line: LineWindow) -> ConvexityResult:
    """Whether every ``gamma_n -> gamma_m`` has exactly one geodesic (the sub-path).

    A second geodesic for the shortest failing pair is returned as witness.
    """
    if len(line.points) <= 2:
        return ConvexityResult(True)
    s = line.genset
    metric = word_metric(s)
    if metric.distance(line.points[0], line.points[-1]) != line.b - line.a:
        raise ValueError("convexity is only defined for geodesic windows")
    # uniqueness for the whole window implies it for every sub-pair
    if count_geodesics(s, line.points[0], line.points[-1]) == 1:
        return ConvexityResult(True)
    for length in range(2, line.b - line.a + 1):
        for n in range(line.a, line.b - length + 1):
            m = n + length
            if count_geodesics(s, line[n], line[m]) > 1:
                own = line.segment(n, m).points
                for seg in enumerate_geodesics(s, line[n], line[m], max_geodesics=10**9):
                    if seg.points != own:
                        return ConvexityResult(False, (n, m, seg))
    raise AssertionError("geodesic count exceeded 1 but no pair failed")  # pragma: no cover


def nonconvexity_witness_by_reordering(line: LineWindow) -> tuple[Segment, Segment] | None:
    """Second geodesic obtained by moving a late step to the front.

    For a non-algebraic geodesic window, pick ``n = a`` and the first ``m``
    whose incoming step ``s`` differs from the first step; then
    ``(gamma_n, gamma_n + s, gamma_{n+1} + s, ..., gamma_{m-1} + s)`` is a
    different geodesic with the same endpoints.  Returns ``None`` for
    algebraic windows.
    """
    steps = line.steps
    if not steps:
        return None
    first = steps[0]
    for i, st in enumerate(steps):
        if st != first:
            n, m = line.a, line.a + i + 1
            original = line.segment(n, m)
            moved = (line[n],) + tuple(line[j] + st for j in range(n, m))
            return original, Segment(line.genset, moved)
    return None


class CertificateError(ValueError):
    pass


class NotMaximal(CertificateError):
    pass


class ZeroQuasiType(CertificateError):
    pass


@dataclass(frozen=True)
class QuasiConvexityCertificate:
    """Fellow-traveller constants for quasi-algebraic lines of a maximal type.

    With ``N = |pi(s)|^2`` and ``M`` the largest inner product
    ``<pi(t), pi(s)>`` over generators of a different quasi-type, the signed
    projection bound is ``mu = M / sqrt(N)`` and

    * ``k_bound(c) = ceil(4 c N / (N - M))`` bounds the off-type steps of a
      geodesic between ``c``-close points,
    * ``C(c) = c + ceil(8 c N / (N - M)) + torsion_diam``.

    ``M`` is ``None`` when every generator has the quasi-type of ``s``; then
    ``k_bound`` is 0 and ``C(c) = c + torsion_diam``.
    """

    type_elem: GroupElement
    norm_sq: int
    max_inner: int | None
    torsion_diam: int

    @property
    def no_off_type(self) -> bool:
        return self.max_inner is None

    @property
    def mu_sq(self) -> Fraction:
        """``mu^2`` carrying the sign of ``mu``."""
        if self.max_inner is None:
            return Fraction(0)
        m = self.max_inner
        return Fraction(m * abs(m), self.norm_sq)

    def _ratio(self, c: int, scale: int) -> int:
        if self.max_inner is None or c == 0:
            return 0
        num = scale * c * self.norm_sq
        den = self.norm_sq - self.max_inner
        return -(-num // den)

    def k_bound(self, c: int) -> int:
        return self._ratio(c, 4)

    def C(self, c: int) -> int:
        return c + self._ratio(c, 8) + self.torsion_diam

    def to_json(self, cs: Iterable[int] = (0, 1, 2)) -> dict:
        mu = self.mu_sq
        return {
            "type": self.type_elem.to_json(),
            "mu_sq": [mu.numerator, mu.denominator],
            "C": {str(c): self.C(c) for c in cs},
        }


def quasiconvexity_certificate(
    s: GeneratingSet, type_elem: GroupElement, c: int | None = None
) -> QuasiConvexityCertificate:
    """Build the certificate for quasi-algebraic lines of quasi-type ``pi(type_elem)``.

    ``type_elem`` must be a generator with non-zero free part of maximal norm.
    ``c`` is accepted for call-site symmetry with the CLI; the certificate
    evaluates ``C`` for any closeness on demand.
    """
    from .metric import torsion_diameter

    if type_elem not in s:
        raise ValueError(f"{type_elem!r} is not in the generating set")
    norm_sq = _sq(type_elem.free)
    if norm_sq == 0:
        raise ZeroQuasiType(f"{type_elem!r} is a torsion element")
    if any(_sq(t.free) > norm_sq for t in s.edge_generators):
        raise NotMaximal(f"{type_elem!r} does not have maximal free norm in S")
    inner = [_dot(t.free, type_elem.free) for t in s.edge_generators if t.free != type_elem.free]
    max_inner = max(inner) if inner else None
    if max_inner is not None and max_inner >= norm_sq:  # pragma: no cover - excluded by maximality
        raise NotMaximal("projection bound is not strictly below the type norm")
    return QuasiConvexityCertificate(type_elem, norm_sq, max_inner, torsion_diameter(s))


@dataclass(frozen=True)
class FellowTravellerResult:
    ok: bool
    C: int
    pairs_checked: int = 0
    violation: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


def _interval_layers(metric, g: tuple[int, ...], steps) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Layers ``{v : d(0, v) = j, d(v, g) = k - j}`` for ``j = 0..k = d(0, g)``.

    A vertex lies on some geodesic from ``0`` to ``g`` at index ``j`` exactly
    when it belongs to layer ``j``; layers for ``x -> y`` are the translates
    of those for ``0 -> y - x``.
    """
    key = ("layers", g)
    hit = metric.cache.get(key)
    if hit is not None:
        return hit
    reduce = metric.reduce
    k = metric.norm(g)
    layer = {(0,) * len(g)}
    layers = [layer]
    for j in range(k):
        nxt = set()
        for v in layer:
            for t in steps:
                u = reduce([a + b for a, b in zip(v, t)])
                if u not in nxt and metric.norm([p - q for p, q in zip(g, u)]) == k - j - 1:
                    nxt.add(u)
        layer = nxt
        layers.append(layer)
    out = tuple(tuple(sorted(layer)) for layer in layers)
    metric.cache[key] = out
    return out


def _max_deviation(metric, layers, rels) -> int:
    """``max d(u + rel_j, 0)`` over ``u`` in layer ``j``, memoized per offset pattern."""
    key = ("dev", layers, rels)
    hit = metric.cache.get(key)
    if hit is None:
        reduce = metric.reduce
        hit = max(
            metric.norm(reduce([p + q for p, q in zip(u, rel)]))
            for layer, rel in zip(layers, rels)
            for u in layer
        )
        metric.cache[key] = hit
    return hit


def check_fellow_traveller(
    line: LineWindow, cert: QuasiConvexityCertificate | int, c: int
) -> FellowTravellerResult:
    """Check that geodesics between ``c``-close points stay ``C(c)``-close index by index.

    For all ``a <= n <= m`` with ``m + 2c <= b`` (so that every compared
    index ``n + j`` lies in the window), all ``x`` with ``d(x, gamma_n) <= c``
    and ``y`` with ``d(y, gamma_m) <= c``, and every vertex ``v`` at position
    ``j`` of a geodesic from ``x`` to ``y``: ``d(v, gamma_{n+j}) <= C``.
    Positions are enumerated as geodesic-interval layers, which covers every
    geodesic without listing them.  ``cert`` may be a plain integer ``C``.
    """
    s = line.genset
    metric = word_metric(s)
    if isinstance(cert, QuasiConvexityCertificate):
        if quasi_type(line) != cert.type_elem.free:
            raise ValueError("window quasi-type differs from the certificate type")
        bound = cert.C(c)
    else:
        bound = int(cert)
    if not is_geodesic_window(line):
        raise ValueError("fellow-traveller check requires a geodesic window")
    steps = [e.coords for e in s.edge_generators]
    near = [v for v in metric.ball(c).keys]
    reduce = metric.reduce
    pts = [p.coords for p in line.points]
    a, b = line.a, line.b
    pairs = 0
    for n in range(a, b - 2 * c + 1):
        for m in range(n, b - 2 * c + 1):
            pairs += 1
            gn, gm = pts[n - a], pts[m - a]
            for dx in near:
                x = reduce([p + q for p, q in zip(gn, dx)])
                for dy in near:
                    y = reduce([p + q for p, q in zip(gm, dy)])
                    layers = _interval_layers(metric, reduce([p - q for p, q in zip(y, x)]), steps)
                    rels = tuple(
                        reduce([p - q for p, q in zip(x, pts[n + j - a])]) for j in range(len(layers))
                    )
                    if _max_deviation(metric, layers, rels) <= bound:
                        continue
                    for j, layer in enumerate(layers):
                        for u in layer:
                            d = metric.norm(reduce([p + q for p, q in zip(u, rels[j])]))
                            if d > bound:
                                v = reduce([p + q for p, q in zip(u, x)])
                                return FellowTravellerResult(
                                    False, bound, pairs, _violation(s, n, m, x, y, j, v, d)
                                )
    return FellowTravellerResult(True, bound, pairs)


def _violation(s, n, m, x, y, j, v, d) -> dict:
    g = s.group
    xe, ye, ve = g.from_coords(x), g.from_coords(y), g.from_coords(v)
    head = enumerate_geodesics(s, xe, ve, max_geodesics=10**9)[0]
    tail = enumerate_geodesics(s, ve, ye, max_geodesics=10**9)[0]
    witness = Segment(s, head.points + tail.points[1:])
    return {
        "n": n,
        "m": m,
        "x": list(x),
        "y": list(y),
        "index": j,
        "vertex": list(v),
        "distance": d,
        "geodesic": witness.to_json(),
    }


def periodicize(line: LineWindow, n: int, m: int) -> LineWindow:
    """Periodic extension of ``gamma_n, ..., gamma_m`` over the same index window.

    ``eta(z) = floor(z / p) * (gamma_m - gamma_n) + gamma_{n + (z mod p)}``
    with period ``p = m - n``.
    """
    if m <= n:
        raise ValueError("periodicize needs n < m")
    if not (line.a <= n and m <= line.b):
        raise IndexError(f"[{n}, {m}] is not inside [{line.a}, {line.b}]")
    p = m - n
    jump = line[m] - line[n]
    pts = tuple((z // p) * jump + line[n + z % p] for z in range(line.a, line.b + 1))
    return LineWindow(line.genset, line.a, pts)


@dataclass(frozen=True)
class TransferReport:
    quasi_type: tuple[int, ...]
    lines_checked: int
    geodesic: int
    exhaustive: bool
    counterexample: LineWindow | None = None
    example_geodesic: LineWindow | None = None

    @property
    def uniform(self) -> bool:
        """Either every sampled line is geodesic or none is."""
        return self.geodesic in (0, self.lines_checked)

    @property
    def all_geodesic(self) -> bool:
        return self.geodesic == self.lines_checked

    def to_json(self) -> dict:
        return {
            "quasi_type": list(self.quasi_type),
            "lines_checked": self.lines_checked,
            "geodesic": self.geodesic,
            "exhaustive": self.exhaustive,
            "uniform": self.uniform,
            "counterexample": None if self.counterexample is None else self.counterexample.to_json(),
        }


def parallel_geodesic_transfer(
    s: GeneratingSet,
    type_elem: GroupElement,
    a: int,
    b: int,
    bases: Sequence[GroupElement] | None = None,
    max_lines: int = 4096,
    seed: int = 0,
) -> TransferReport:
    """Test every quasi-algebraic step pattern of the quasi-type of ``type_elem``.

    Step sequences use all generators ``t`` with ``pi(t) = pi(type_elem)``.
    If there are more than ``max_lines`` patterns per base a seeded random
    sample is taken.  The report is uniform exactly when geodesicity is
    shared by all sampled lines; when it is not, a non-geodesic line is
    returned next to a geodesic one.
    """
    if a > 0 or b < 0:
        raise ValueError("window must contain 0")
    same = sorted(t for t in s.edge_generators if t.free == type_elem.free)
    if not same:
        raise ValueError(f"no generator has quasi-type {type_elem.free}")
    length = b - a
    if bases is None:
        bases = torsion_elements(s.group)
    rng = random.Random(seed)
    total = len(same) ** length
    exhaustive = total <= max_lines
    if exhaustive:
        patterns = list(itertools.product(same, repeat=length))
    else:
        patterns = [tuple(rng.choice(same) for _ in range(length)) for _ in range(max_lines)]
    checked = geodesic = 0
    bad = good = None
    for h in bases:
        for pat in patterns:
            line = LineWindow.from_steps(s, h, pat, a)
            checked += 1
            if is_geodesic_window(line):
                geodesic += 1
                good = good or line
            else:
                bad = bad or line
    report = TransferReport(type_elem.free, checked, geodesic, exhaustive, None, good)
    if not report.uniform:
        report = TransferReport(type_elem.free, checked, geodesic, exhaustive, bad, good)
    return report
