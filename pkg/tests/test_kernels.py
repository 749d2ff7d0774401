import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cayleyrigid import _kernels_py
from cayleyrigid._backend import BACKEND, kernels
from cases import FIXTURES, oracle_args

try:
    from cayleyrigid import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

needs_ext = pytest.mark.skipif(_kernels_c is None, reason="compiled kernels not built")


def _run(mod, rank, torsion, gens, radius, cap=10**6):
    return mod.bfs_ball(rank, tuple(torsion), gens, radius, cap)


def _sym(rank, torsion, gens):
    return oracles.symmetrize(rank, torsion, gens)


def test_backend_name_matches_module():
    assert BACKEND == kernels.NAME in ("cython", "python")


@needs_ext
@pytest.mark.parametrize("name", [f[0] for f in FIXTURES])
@pytest.mark.parametrize("radius", [0, 1, 4])
def test_backends_agree_on_fixtures(name, radius):
    rank, torsion, gens = oracle_args(name)
    gens = _sym(rank, torsion, gens)
    a = _run(_kernels_py, rank, torsion, gens, radius)
    b = _run(_kernels_c, rank, torsion, gens, radius)
    for x, y in zip(a[:5], b[:5]):
        np.testing.assert_array_equal(x, y)
    assert a[5] is b[5] is False
    pa = _kernels_py.path_counts(a[2], a[3], a[1])
    pb = _kernels_c.path_counts(b[2], b[3], b[1])
    assert pa == pb


@needs_ext
@given(
    st.sampled_from([(1, []), (2, []), (1, [2]), (1, [3]), (0, [6]), (2, [2])]),
    st.data(),
    st.integers(0, 5),
)
@settings(max_examples=60, deadline=None)
def test_backends_agree_on_random_gensets(spec, data, radius):
    rank, torsion = spec
    dim = rank + len(torsion)
    gens = data.draw(
        st.lists(st.tuples(*[st.integers(-2, 2)] * dim), min_size=1, max_size=4)
    )
    gens = _sym(rank, torsion, gens)
    if not gens:
        return
    a = _run(_kernels_py, rank, torsion, gens, radius)
    b = _run(_kernels_c, rank, torsion, gens, radius)
    for x, y in zip(a[:5], b[:5]):
        np.testing.assert_array_equal(x, y)


@needs_ext
def test_truncation_agrees():
    gens = [(-1, 0), (0, -1), (0, 1), (1, 0)]
    a = _run(_kernels_py, 2, [], gens, 10, cap=30)
    b = _run(_kernels_c, 2, [], gens, 10, cap=30)
    assert a[5] and b[5]
    assert len(a[1]) == len(b[1]) == 30
    np.testing.assert_array_equal(a[0], b[0])


@pytest.mark.parametrize("mod", [_kernels_py, pytest.param(_kernels_c, marks=needs_ext)])
def test_bfs_order_and_identity(mod):
    gens = _sym(1, [2], [(1, 0), (1, 1)])
    coords, dist, indptr, indices, boundary, trunc = _run(mod, 1, [2], gens, 3)
    assert tuple(coords[0]) == (0, 0)
    assert np.all(np.diff(dist) >= 0)
    assert dist.tolist().count(3) == 4
    # only the outer shell can touch the outside
    assert not boundary[dist < 3].any()


@pytest.mark.parametrize("mod", [_kernels_py, pytest.param(_kernels_c, marks=needs_ext)])
def test_path_counts_exceed_machine_words(mod):
    n = 40
    gens = _sym(2, [], [(1, 0), (0, 1)])
    coords, dist, indptr, indices, *_ = _run(mod, 2, [], gens, 2 * n)
    counts = mod.path_counts(indptr, indices, dist)
    where = {tuple(c): i for i, c in enumerate(coords.tolist())}
    assert counts[where[(n, n)]] == math.comb(2 * n, n) > 2**64
    assert counts[where[(3, -2)]] == math.comb(5, 2)
