"""Word-metric balls of Cayley graphs and the quantities read off them."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from ._backend import kernels
from .errors import ResourceLimitExceeded
from .groups import GeneratingSet, GroupElement, torsion_elements

__all__ = [
    "DEFAULT_MAX_VERTICES",
    "MetricBall",
    "WordMetric",
    "word_metric",
    "ball",
    "distance",
    "growth_sequence",
    "torsion_diameter",
]

DEFAULT_MAX_VERTICES = 5_000_000


@dataclass(frozen=True, eq=False)
class MetricBall:
    """All elements within word distance ``radius`` of the identity.

    Vertices are stored in BFS order, so vertex 0 is the identity and
    ``dist`` is non-decreasing.  ``indptr``/``indices`` hold the in-ball
    adjacency in CSR form; ``boundary[i]`` marks vertices with a neighbour
    outside the ball (only possible when ``dist[i] == radius``).
    """

    genset: GeneratingSet
    radius: int
    coords: np.ndarray
    dist: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    boundary: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.dist)

    @property
    def size(self) -> int:
        return len(self.dist)

    @property
    def group(self):
        return self.genset.group

    @cached_property
    def keys(self) -> list[tuple[int, ...]]:
        return [tuple(c) for c in self.coords.tolist()]

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {k: i for i, k in enumerate(self.keys)}

    @cached_property
    def vertices(self) -> list[GroupElement]:
        g = self.group
        return [g.from_coords(k) for k in self.keys]

    @cached_property
    def path_counts(self) -> list[int]:
        """Number of geodesics from the identity to each vertex."""
        return kernels.path_counts(self.indptr, self.indices, self.dist)

    @property
    def saturated(self) -> bool:
        """True when the ball is the whole (finite) group."""
        return not bool(self.boundary.any())

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def dist_of(self, element: GroupElement | tuple) -> int | None:
        key = element.coords if isinstance(element, GroupElement) else tuple(element)
        i = self.index.get(key)
        return None if i is None else int(self.dist[i])

    def shell_sizes(self) -> list[int]:
        return np.bincount(self.dist, minlength=self.radius + 1).tolist()

    def growth(self) -> list[int]:
        return np.cumsum(self.shell_sizes()).tolist()

    def restrict(self, r: int) -> MetricBall:
        """The sub-ball of radius ``r`` (a prefix in BFS order)."""
        if r >= self.radius:
            return self
        n = int(np.searchsorted(self.dist, r, side="right"))
        starts = self.indptr[:n]
        ends = self.indptr[1 : n + 1]
        indptr = [0]
        indices = []
        boundary = np.zeros(n, dtype=bool)
        for i in range(n):
            row = self.indices[starts[i] : ends[i]]
            keep = row[row < n]
            indices.append(keep)
            indptr.append(indptr[-1] + len(keep))
            boundary[i] = bool(self.boundary[i]) or len(keep) < len(row)
        return MetricBall(
            self.genset,
            r,
            self.coords[:n],
            self.dist[:n],
            np.array(indptr, dtype=np.int64),
            np.concatenate(indices).astype(np.int32) if indices else np.zeros(0, np.int32),
            boundary,
        )

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for i in range(self.size):
            for j in self.neighbors(i).tolist():
                if i < j:
                    out.append((i, j))
        return out

    def sorted_order(self) -> list[int]:
        """Vertex indices sorted by canonical coordinates."""
        return sorted(range(self.size), key=self.keys.__getitem__)

    def to_json(self) -> dict:
        order = self.sorted_order()
        rank = {v: i for i, v in enumerate(order)}
        edges = sorted(
            tuple(sorted((rank[i], rank[j]))) for i, j in self.edges()
        )
        return {
            "group": self.group.to_json(),
            "radius": self.radius,
            "vertices": [self.vertices[v].to_json() for v in order],
            "dist": [int(self.dist[v]) for v in order],
            "edges": [list(e) for e in edges],
        }

    def to_dot(self) -> str:
        data = self.to_json()
        lines = ["graph cayley_ball {"]
        lines += [f"  {i};" for i in range(len(data["vertices"]))]
        lines += [f"  {i} -- {j};" for i, j in data["edges"]]
        lines.append("}")
        return "\n".join(lines) + "\n"

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _lower_bound(gens: list[tuple[int, ...]], rank: int, coords: tuple[int, ...]) -> int:
    """Cheap lower bound on word length from the l1 norm of the free part."""
    step = max((sum(abs(x) for x in g[:rank]) for g in gens), default=0)
    if step == 0:
        return 0
    return -(-sum(abs(x) for x in coords[:rank]) // step)


class WordMetric:
    """The word metric ``d_S`` with a cached, growing ball around the identity."""

    def __init__(self, genset: GeneratingSet, max_vertices: int = DEFAULT_MAX_VERTICES):
        self.genset = genset
        self.group = genset.group
        self.max_vertices = int(max_vertices)
        self.gens = sorted(e.coords for e in genset.edge_generators)
        self._ball: MetricBall | None = None
        # scratch space for translation-invariant derived data (geodesic intervals etc.)
        self.cache: dict = {}

    def _compute(self, r: int) -> MetricBall:
        g = self.group
        coords, dist, indptr, indices, boundary, truncated = kernels.bfs_ball(
            g.rank, g.torsion, self.gens, r, self.max_vertices
        )
        if truncated:
            exc = ResourceLimitExceeded(
                f"ball of radius {r} exceeds {self.max_vertices} vertices", len(dist)
            )
            exc.partial = (coords, dist)
            raise exc
        return MetricBall(self.genset, r, coords, dist, indptr, indices, boundary)

    def covering_ball(self, r: int) -> MetricBall:
        """A cached ball of radius at least ``r`` (or the whole finite group)."""
        b = self._ball
        if b is not None and (b.radius >= r or b.saturated):
            return b
        b = self._compute(r)
        self._ball = b
        return b

    def ball(self, r: int) -> MetricBall:
        if r < 0:
            raise ValueError("radius must be non-negative")
        b = self.covering_ball(r)
        if b.radius > r:
            return b.restrict(r)
        if b.radius < r:
            # saturated finite group: same vertex set, larger nominal radius
            return MetricBall(self.genset, r, b.coords, b.dist, b.indptr, b.indices, b.boundary)
        return b

    def reduce(self, coords) -> tuple[int, ...]:
        return self.group.reduce(coords)

    def _locate(self, key: tuple[int, ...]) -> tuple[MetricBall, int]:
        b = self._ball
        if b is not None:
            i = b.index.get(key)
            if i is not None:
                return b, i
            if b.saturated:
                raise ValueError(f"{key} is not in the subgroup generated by S")
        r = max(4, _lower_bound(self.gens, self.group.rank, key))
        if b is not None:
            r = max(r, b.radius * 2)
        while True:
            try:
                b = self.covering_ball(r)
            except ResourceLimitExceeded as exc:
                coords, dist = exc.partial
                for i, c in enumerate(coords.tolist()):
                    if tuple(c) == key:
                        # BFS discovery distances are exact even in a partial ball
                        raise _PartialHit(int(dist[i]), len(dist)) from None
                raise
            i = b.index.get(key)
            if i is not None:
                return b, i
            if b.saturated:
                raise ValueError(f"{key} is not in the subgroup generated by S")
            r *= 2

    def norm(self, element) -> int:
        """Word length ``d_S(0, g)``."""
        key = self.reduce(element.coords if isinstance(element, GroupElement) else element)
        try:
            b, i = self._locate(key)
        except _PartialHit as hit:
            return hit.dist
        return int(b.dist[i])

    def distance(self, x: GroupElement, y: GroupElement) -> int:
        return self.norm(tuple(b - a for a, b in zip(x.coords, y.coords)))

    def geodesic_count(self, element) -> int:
        """Number of geodesics from the identity to ``element``."""
        key = self.reduce(element.coords if isinstance(element, GroupElement) else element)
        b, i = self._locate(key)
        return b.path_counts[i]


class _PartialHit(ResourceLimitExceeded):
    """Target found in a truncated ball: its distance is known, its geodesics are not."""

    def __init__(self, dist: int, partial_size: int):
        super().__init__("target located only in a truncated ball", partial_size)
        self.dist = dist


@lru_cache(maxsize=128)
def word_metric(s: GeneratingSet, max_vertices: int = DEFAULT_MAX_VERTICES) -> WordMetric:
    """Shared :class:`WordMetric` per generating set."""
    return WordMetric(s, max_vertices)


def ball(s: GeneratingSet, r: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> MetricBall:
    return word_metric(s, max_vertices).ball(r)


def distance(
    s: GeneratingSet, x: GroupElement, y: GroupElement, max_vertices: int = DEFAULT_MAX_VERTICES
) -> int:
    return word_metric(s, max_vertices).distance(x, y)


def growth_sequence(s: GeneratingSet, r_max: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> list[int]:
    """``[beta(0), ..., beta(r_max)]``, the sizes of the balls around the identity."""
    if r_max < 0:
        raise ValueError("r_max must be non-negative")
    return ball(s, r_max, max_vertices).growth()


def torsion_diameter(s: GeneratingSet, max_vertices: int = DEFAULT_MAX_VERTICES) -> int:
    """``max d_S(t, t')`` over the torsion subgroup, i.e. ``max_t d_S(0, t)``."""
    m = word_metric(s, max_vertices)
    return max(m.norm(t) for t in torsion_elements(s.group))
