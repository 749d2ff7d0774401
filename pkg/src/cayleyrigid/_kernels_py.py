"""Pure-Python graph kernels.

These define the reference behaviour; ``_kernels.pyx`` must return identical
arrays.  Elements are coordinate tuples ``free + torsion`` with the torsion
part reduced.  Generators must be passed in a fixed (sorted) order, which
fixes the BFS vertex order and the neighbour order of each adjacency row.
"""

from __future__ import annotations

import numpy as np

NAME = "python"


def _adder(rank: int, torsion: tuple[int, ...]):
    if not torsion:
        return lambda c, g: tuple(a + b for a, b in zip(c, g))
    mods = (None,) * rank + tuple(torsion)

    def add(c, g):
        return tuple(a + b if m is None else (a + b) % m for a, b, m in zip(c, g, mods))

    return add


def bfs_ball(rank, torsion, gens, radius, max_vertices):
    """Breadth-first ball of ``radius`` around the origin.

    Returns ``(coords, dist, indptr, indices, boundary, truncated)``.  Vertices
    appear in BFS order (so ``dist`` is non-decreasing and the origin is
    vertex 0).  Adjacency rows list in-ball neighbours in generator order;
    ``boundary[i]`` is set when some neighbour of ``i`` lies outside the ball.
    If more than ``max_vertices`` vertices would be needed the partial vertex
    list is returned with ``truncated=True`` and no adjacency.
    """
    torsion = tuple(torsion)
    dim = rank + len(torsion)
    gens = [tuple(g) for g in gens]
    add = _adder(rank, torsion)
    origin = (0,) * dim
    index = {origin: 0}
    order = [origin]
    dist = [0]
    truncated = False
    start = 0
    for level in range(1, radius + 1):
        end = len(order)
        for i in range(start, end):
            c = order[i]
            for g in gens:
                nb = add(c, g)
                if nb not in index:
                    if len(order) >= max_vertices:
                        truncated = True
                        break
                    index[nb] = len(order)
                    order.append(nb)
                    dist.append(level)
            if truncated:
                break
        if truncated or len(order) == end:
            break
        start = end

    coords = np.array(order, dtype=np.int64).reshape(len(order), dim)
    dist_arr = np.array(dist, dtype=np.int32)
    if truncated:
        return coords, dist_arr, None, None, None, True

    indptr = np.zeros(len(order) + 1, dtype=np.int64)
    indices = []
    boundary = np.zeros(len(order), dtype=bool)
    for i, c in enumerate(order):
        for g in gens:
            j = index.get(add(c, g))
            if j is None:
                boundary[i] = True
            else:
                indices.append(j)
        indptr[i + 1] = len(indices)
    return coords, dist_arr, indptr, np.array(indices, dtype=np.int32), boundary, False


def path_counts(indptr, indices, dist):
    """Number of shortest paths from vertex 0 to every vertex of a BFS ball."""
    n = len(dist)
    counts = [0] * n
    if n:
        counts[0] = 1
    ptr = indptr.tolist()
    idx = indices.tolist()
    dl = dist.tolist()
    for v in range(1, n):
        want = dl[v] - 1
        total = 0
        for j in range(ptr[v], ptr[v + 1]):
            u = idx[j]
            if dl[u] == want:
                total += counts[u]
        counts[v] = total
    return counts
