"""Slow, obviously-correct reference implementations used to check the package.

Nothing here imports from ``cayleyrigid``: groups are plain ``(rank, torsion)``
pairs and elements are coordinate tuples.
"""

from collections import deque
from itertools import product


def reduce(rank, torsion, v):
    return tuple(v[:rank]) + tuple(x % d for x, d in zip(v[rank:], torsion))


def symmetrize(rank, torsion, gens):
    out = set()
    for g in gens:
        g = reduce(rank, torsion, g)
        out.add(g)
        out.add(reduce(rank, torsion, [-x for x in g]))
    zero = (0,) * (rank + len(torsion))
    out.discard(zero)
    return sorted(out)


def bfs_distances(rank, torsion, gens, radius):
    """Map element -> word length for every element within ``radius``."""
    gens = symmetrize(rank, torsion, gens)
    zero = (0,) * (rank + len(torsion))
    dist = {zero: 0}
    q = deque([zero])
    while q:
        v = q.popleft()
        if dist[v] == radius:
            continue
        for g in gens:
            w = reduce(rank, torsion, [a + b for a, b in zip(v, g)])
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def growth(rank, torsion, gens, radius):
    dist = bfs_distances(rank, torsion, gens, radius)
    return [sum(1 for d in dist.values() if d <= r) for r in range(radius + 1)]


def word_length(rank, torsion, gens, target, limit=30):
    """Length of the shortest word, found by brute-force word enumeration."""
    gens = symmetrize(rank, torsion, gens)
    target = reduce(rank, torsion, target)
    frontier = {(0,) * (rank + len(torsion))}
    seen = set(frontier)
    for k in range(limit + 1):
        if target in frontier:
            return k
        nxt = set()
        for v in frontier:
            for g in gens:
                w = reduce(rank, torsion, [a + b for a, b in zip(v, g)])
                if w not in seen:
                    seen.add(w)
                    nxt.add(w)
        frontier = nxt
    raise ValueError("target not reached")


def all_geodesic_words(rank, torsion, gens, target):
    """Every word of minimal length whose sum is ``target`` (exhaustive over ``S^k``)."""
    gens = symmetrize(rank, torsion, gens)
    target = reduce(rank, torsion, target)
    k = word_length(rank, torsion, gens, target)
    out = []
    for word in product(gens, repeat=k):
        total = [0] * (rank + len(torsion))
        for g in word:
            total = [a + b for a, b in zip(total, g)]
        if reduce(rank, torsion, total) == target:
            out.append(word)
    return out


def geodesic_count(rank, torsion, gens, target):
    return len(all_geodesic_words(rank, torsion, gens, target))


def elements(torsion):
    return list(product(*(range(d) for d in torsion)))


def order_le_2(torsion):
    return sum(1 for t in elements(torsion) if all((2 * x) % d == 0 for x, d in zip(t, torsion)))


def torsion_diameter(rank, torsion, gens):
    tors = [(0,) * rank + t for t in elements(torsion)]
    return max(word_length(rank, torsion, gens, t) for t in tors)


def induced_edges(rank, torsion, gens, vertices):
    gens = symmetrize(rank, torsion, gens)
    vs = set(vertices)
    edges = set()
    for v in vertices:
        for g in gens:
            w = reduce(rank, torsion, [a + b for a, b in zip(v, g)])
            if w in vs and w != v:
                edges.add(frozenset((v, w)))
    return edges
