# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels.

Same contract as ``_kernels_py``.  The BFS runs over a dense mixed-radix grid
covering the bounding box of the ball (free coordinate ``i`` lies in
``[-R_i, R_i]`` with ``R_i = radius * max_g |g_i|``); when that box is too
large the pure-Python dictionary BFS is used instead.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, int32_t, uint64_t

from . import _kernels_py

cnp.import_array()

NAME = "cython"
GRID_LIMIT = 1 << 24


def bfs_ball(int rank, torsion, gens, int radius, long max_vertices):
    cdef int t, dim, ng, level, gi, k
    cdef long n = 1, head = 0, end, lin, v, cap
    cdef bint inside, truncated = False
    torsion = tuple(int(d) for d in torsion)
    t = len(torsion)
    dim = rank + t
    ng = len(gens)
    if dim == 0 or ng == 0 or radius == 0:
        return _kernels_py.bfs_ball(rank, torsion, gens, radius, max_vertices)

    G_arr = np.array(gens, dtype=np.int64).reshape(ng, dim)
    R_arr = np.zeros(dim, dtype=np.int64)
    size_arr = np.zeros(dim, dtype=np.int64)
    total = 1
    for k in range(dim):
        if k < rank:
            R_arr[k] = radius * int(np.abs(G_arr[:, k]).max())
            size_arr[k] = 2 * R_arr[k] + 1
        else:
            size_arr[k] = torsion[k - rank]
        total *= int(size_arr[k])
    if total > GRID_LIMIT:
        return _kernels_py.bfs_ball(rank, torsion, gens, radius, max_vertices)
    stride_arr = np.ones(dim, dtype=np.int64)
    for k in range(dim - 2, -1, -1):
        stride_arr[k] = stride_arr[k + 1] * size_arr[k + 1]

    cdef int64_t[:, ::1] G = G_arr
    cdef int64_t[::1] R = R_arr
    cdef int64_t[::1] size = size_arr
    cdef int64_t[::1] stride = stride_arr
    grid_arr = np.full(total, -1, dtype=np.int32)
    cdef int32_t[::1] grid = grid_arr

    cap = min(total, max_vertices, 4096)
    coords_arr = np.zeros((cap, dim), dtype=np.int64)
    dist_arr = np.zeros(cap, dtype=np.int32)
    cdef int64_t[:, ::1] C = coords_arr
    cdef int32_t[::1] D = dist_arr

    grid[_origin_index(R, stride, rank)] = 0

    for level in range(1, radius + 1):
        end = n
        while head < end:
            for gi in range(ng):
                lin = 0
                inside = True
                for k in range(dim):
                    v = C[head, k] + G[gi, k]
                    if k < rank:
                        if v < -R[k] or v > R[k]:
                            inside = False
                            break
                        lin += (v + R[k]) * stride[k]
                    else:
                        if v >= size[k]:
                            v -= size[k]
                        lin += v * stride[k]
                if not inside or grid[lin] >= 0:
                    continue
                if n >= max_vertices:
                    truncated = True
                    break
                if n >= cap:
                    cap = min(2 * cap, total)
                    coords_arr = np.resize(coords_arr, (cap, dim))
                    dist_arr = np.resize(dist_arr, cap)
                    C = coords_arr
                    D = dist_arr
                grid[lin] = n
                for k in range(dim):
                    v = C[head, k] + G[gi, k]
                    if k >= rank and v >= size[k]:
                        v -= size[k]
                    C[n, k] = v
                D[n] = level
                n += 1
            if truncated:
                break
            head += 1
        if truncated or n == end:
            break

    coords_out = np.ascontiguousarray(coords_arr[:n])
    dist_out = np.ascontiguousarray(dist_arr[:n])
    if truncated:
        return coords_out, dist_out, None, None, None, True

    indptr_arr = np.zeros(n + 1, dtype=np.int64)
    indices_arr = np.zeros(n * ng, dtype=np.int32)
    boundary_arr = np.zeros(n, dtype=np.uint8)
    cdef int64_t[::1] P = indptr_arr
    cdef int32_t[::1] I = indices_arr
    cdef cnp.uint8_t[::1] B = boundary_arr
    cdef long i, m = 0
    cdef int32_t j
    for i in range(n):
        for gi in range(ng):
            lin = 0
            inside = True
            for k in range(dim):
                v = C[i, k] + G[gi, k]
                if k < rank:
                    if v < -R[k] or v > R[k]:
                        inside = False
                        break
                    lin += (v + R[k]) * stride[k]
                else:
                    if v >= size[k]:
                        v -= size[k]
                    lin += v * stride[k]
            j = grid[lin] if inside else -1
            if j < 0:
                B[i] = 1
            else:
                I[m] = j
                m += 1
        P[i + 1] = m
    return (coords_out, dist_out, indptr_arr, indices_arr[:m].copy(),
            boundary_arr.astype(bool), False)


cdef long _origin_index(int64_t[::1] R, int64_t[::1] stride, int rank):
    cdef long lin = 0
    cdef int k
    for k in range(rank):
        lin += R[k] * stride[k]
    return lin


def path_counts(indptr, indices, dist):
    cdef long n = len(dist)
    if n == 0:
        return []
    cdef int64_t[::1] P = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef int32_t[::1] I = np.ascontiguousarray(indices, dtype=np.int32)
    cdef int32_t[::1] D = np.ascontiguousarray(dist, dtype=np.int32)
    counts_arr = np.zeros(n, dtype=np.uint64)
    cdef uint64_t[::1] cnt = counts_arr
    cdef uint64_t total, add
    cdef long v, j
    cdef int32_t want
    cnt[0] = 1
    for v in range(1, n):
        want = D[v] - 1
        total = 0
        for j in range(P[v], P[v + 1]):
            if D[I[j]] == want:
                add = cnt[I[j]]
                if total > 0xFFFFFFFFFFFFFFFF - add:
                    # exact big-integer counts needed
                    return _kernels_py.path_counts(indptr, indices, dist)
                total += add
        cnt[v] = total
    return counts_arr.tolist()
