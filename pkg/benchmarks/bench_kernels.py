"""Time the compiled and pure-Python BFS / path-count kernels on the same balls.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from cayleyrigid import _kernels_py

try:
    from cayleyrigid import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

CASES = [
    ("Z^2 square, r=200", 2, (), [(1, 0), (-1, 0), (0, 1), (0, -1)], 200),
    ("Z^2 diag, r=150", 2, (), [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)], 150),
    ("Z x Z/2, r=20000", 1, (2,), [(1, 0), (-1, 0), (1, 1), (-1, 1)], 20000),
    ("Z^3 + (1,1,1), r=25", 3, (), [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1),
                                    (1, 1, 1), (-1, -1, -1)], 25),
    ("Z^2 x Z/4, r=40", 2, (4,), [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, 3)], 40),
]


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    mods = [("python", _kernels_py)] + ([("cython", _kernels_c)] if _kernels_c else [])
    print(f"{'case':28s} {'vertices':>9s} " + " ".join(f"{m + ' bfs':>12s} {m + ' paths':>13s}" for m, _ in mods)
          + (f" {'speedup':>8s}" if len(mods) == 2 else ""))
    for label, rank, torsion, gens, radius in CASES:
        row = []
        results = []
        for _, mod in mods:
            t_bfs, res = timed(lambda: mod.bfs_ball(rank, torsion, gens, radius, 10**8), args.repeat)
            coords, dist, indptr, indices, *_ = res
            t_paths, counts = timed(lambda: mod.path_counts(indptr, indices, dist), args.repeat)
            row.append((t_bfs, t_paths))
            results.append((coords, counts))
        if len(results) == 2:
            assert np.array_equal(results[0][0], results[1][0]) and results[0][1] == results[1][1]
        n = len(results[0][0])
        cells = " ".join(f"{b * 1e3:10.1f}ms {p * 1e3:11.1f}ms" for b, p in row)
        speed = ""
        if len(row) == 2:
            speed = f" {sum(row[0]) / sum(row[1]):7.1f}x"
        print(f"{label:28s} {n:9d} {cells}{speed}")
    if _kernels_c is None:
        print("compiled kernels not built; only the Python fallback was timed")


if __name__ == "__main__":
    main()
