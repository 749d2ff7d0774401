import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cases import FIXTURES, genset, oracle_args
from cayleyrigid import (
    GeneratingSet,
    GeodesicLimitExceeded,
    LineWindow,
    NotMaximal,
    NotQuasiAlgebraic,
    Segment,
    ZeroQuasiType,
    algebraic_line,
    check_fellow_traveller,
    count_geodesics,
    enumerate_geodesics,
    is_convex_on_window,
    is_geodesic_window,
    make_group,
    max_norm_generators,
    nonconvexity_witness_by_reordering,
    parallel_geodesic_transfer,
    periodicize,
    quasi_type,
    quasiconvexity_certificate,
    reorder_segment,
    word_metric,
)

NAMES = [f[0] for f in FIXTURES]


def el(s, *coords):
    return s.group.from_coords(coords)


def staircase():
    s = genset("Z2_square")
    pts = [(-3, 0), (-2, 0), (-1, 0), (0, 0), (0, 1), (1, 1), (2, 1), (3, 1)]
    return LineWindow(s, -3, tuple(el(s, *p) for p in pts))


def alternating(length=4, a=0):
    s = genset("ZxZ2_diag")
    steps = [el(s, 1, i % 2) for i in range(length)]
    return LineWindow.from_steps(s, s.group.zero(), steps, a)


def oracle_paths(name, x, y):
    """All geodesic point sequences from x to y via exhaustive word search."""
    rank, torsion, gens = oracle_args(name)
    diff = [b - a for a, b in zip(x, y)]
    out = set()
    for word in oracles.all_geodesic_words(rank, torsion, gens, diff):
        pts = [tuple(x)]
        for g in word:
            pts.append(oracles.reduce(rank, torsion, [p + q for p, q in zip(pts[-1], g)]))
        out.add(tuple(pts))
    return out


# ---- enumeration and counting ----


def test_square_lattice_geodesics():
    s = genset("Z2_square")
    segs = enumerate_geodesics(s, s.group.zero(), el(s, 2, 1))
    assert len(segs) == 3
    assert {tuple(p.coords for p in seg.points) for seg in segs} == oracle_paths(
        "Z2_square", (0, 0), (2, 1)
    )
    assert all(seg.is_geodesic() for seg in segs)


def test_geodesic_count_z_times_z2():
    # the two geodesics to (2,0) are (1,0)+(1,0) and (1,1)+(1,1)
    s = genset("ZxZ2_diag")
    assert count_geodesics(s, s.group.zero(), el(s, 2, 0)) == 2
    assert count_geodesics(s, s.group.zero(), el(s, 2, 1)) == 2
    assert oracles.geodesic_count(*oracle_args("ZxZ2_diag"), (2, 0)) == 2


def test_trivial_segment():
    s = genset("Z2_diag")
    x = el(s, 3, -1)
    segs = enumerate_geodesics(s, x, x)
    assert len(segs) == 1 and len(segs[0]) == 0


def test_enumeration_cap_reports_count():
    s = genset("Z2_square")
    with pytest.raises(GeodesicLimitExceeded) as exc:
        enumerate_geodesics(s, s.group.zero(), el(s, 4, 4), max_geodesics=10)
    assert exc.value.count == 70


@pytest.mark.parametrize("name", NAMES)
def test_enumeration_matches_oracle(name):
    s = genset(name)
    rng = random.Random(name)
    b = word_metric(s).ball(3)
    for _ in range(4):
        y = b.keys[rng.randrange(b.size)]
        x = s.group.zero().coords
        segs = enumerate_geodesics(s, s.group.zero(), s.group.from_coords(y))
        got = {tuple(p.coords for p in seg.points) for seg in segs}
        assert got == oracle_paths(name, x, y)


def test_enumeration_order_is_deterministic():
    s = genset("Z2_diag")
    a = [seg.to_json() for seg in enumerate_geodesics(s, s.group.zero(), el(s, 3, 1))]
    b = [seg.to_json() for seg in enumerate_geodesics(s, s.group.zero(), el(s, 3, 1))]
    assert a == b == sorted(a)


@given(st.sampled_from(NAMES), st.data())
@settings(max_examples=60, deadline=None)
def test_count_translation_invariant_and_bounded(name, data):
    s = genset(name)
    b = word_metric(s).ball(4)
    x = s.group.from_coords(b.keys[data.draw(st.integers(0, b.size - 1))])
    y = s.group.from_coords(b.keys[data.draw(st.integers(0, b.size - 1))])
    n = count_geodesics(s, x, y)
    assert n == count_geodesics(s, s.group.zero(), y - x)
    assert 1 <= n <= len(s.edge_generators) ** word_metric(s).distance(x, y)


# ---- reordering ----


def test_reorder_example():
    s = genset("Z2_square")
    seg = Segment(s, tuple(el(s, *p) for p in [(0, 0), (1, 0), (2, 0), (2, 1)]))
    out = reorder_segment(seg, [2, 0, 1])
    assert [p.coords for p in out.points] == [(0, 0), (0, 1), (1, 1), (2, 1)]
    assert out.is_geodesic()


def test_reorder_rejects_non_geodesic():
    s = genset("Z_pm1_pm2")
    seg = Segment(s, (el(s, 0), el(s, 1), el(s, 2)))
    with pytest.raises(ValueError):
        reorder_segment(seg, [1, 0])
    with pytest.raises(ValueError):
        reorder_segment(Segment(s, (el(s, 0), el(s, 2))), [0, 0])


@given(st.sampled_from(NAMES), st.data())
@settings(max_examples=60, deadline=None)
def test_reorder_closure(name, data):
    s = genset(name)
    rank, torsion, gens = oracle_args(name)
    b = word_metric(s).ball(5)
    y = s.group.from_coords(b.keys[data.draw(st.integers(0, b.size - 1))])
    segs = enumerate_geodesics(s, s.group.zero(), y, max_geodesics=10**6)
    seg = segs[data.draw(st.integers(0, len(segs) - 1))]
    perm = data.draw(st.permutations(range(len(seg))))
    out = reorder_segment(seg, perm)
    assert out.start == seg.start and out.end == seg.end
    assert out.is_geodesic()
    assert oracles.word_length(rank, torsion, gens, y.coords) == len(out)


# ---- lines and quasi-types ----


def test_algebraic_line_and_type():
    s = genset("Z2_diag")
    line = algebraic_line(s, el(s, 2, 0), el(s, 1, 1), -2, 3)
    assert line.is_algebraic()
    assert line[0] == el(s, 2, 0) and line[-2] == el(s, 0, -2)
    assert quasi_type(line) == (1, 1)
    with pytest.raises(ValueError):
        algebraic_line(s, s.group.zero(), el(s, 2, 0), 0, 2)


def test_quasi_type_alternating():
    line = alternating()
    assert not line.is_algebraic() and line.is_quasi_algebraic()
    assert quasi_type(line) == (1,)


def test_not_quasi_algebraic():
    with pytest.raises(NotQuasiAlgebraic) as exc:
        quasi_type(staircase())
    assert exc.value.index == 0


def test_window_must_contain_zero():
    s = genset("Z_pm1")
    with pytest.raises(ValueError):
        LineWindow(s, 1, (el(s, 0), el(s, 1)))
    with pytest.raises(ValueError):
        LineWindow(s, 0, (el(s, 0), el(s, 3)))


def test_geodesic_window_z_12():
    s = genset("Z_pm1_pm2")
    assert not is_geodesic_window(algebraic_line(s, el(s, 0), el(s, 1), -4, 4))
    assert is_geodesic_window(algebraic_line(s, el(s, 0), el(s, 2), -4, 4))
    assert is_geodesic_window(algebraic_line(s, el(s, 0), el(s, 1), 0, 1))


def test_staircase_is_geodesic():
    assert is_geodesic_window(staircase())


def test_max_norm_generators_examples():
    s = genset("Z2_diag")
    assert sorted(e.coords for e in max_norm_generators(s).elements) == [(-1, -1), (1, 1)]
    assert len(max_norm_generators(genset("ZxZ2_diag")).elements) == 4
    res = max_norm_generators(genset("Z6_12"))
    assert res.elements == [] and res.all_torsion


# ---- convexity ----


def test_diagonal_type_convex():
    s = genset("Z2_diag")
    for h in [(0, 0), (3, -2), (-5, 1)]:
        line = algebraic_line(s, el(s, *h), el(s, 1, 1), -4, 4)
        assert is_convex_on_window(line)
        assert nonconvexity_witness_by_reordering(line) is None


def test_short_windows_are_convex():
    s = genset("Z2_square")
    assert is_convex_on_window(LineWindow(s, 0, (el(s, 0, 0),)))
    assert is_convex_on_window(LineWindow(s, 0, (el(s, 0, 0), el(s, 1, 0))))


def test_staircase_not_convex():
    res = is_convex_on_window(staircase())
    assert not res
    n, m, seg = res.witness
    assert (n, m) == (-1, 1)
    assert [p.coords for p in seg.points] == [(-1, 0), (-1, 1), (0, 1)]


def test_staircase_reordering_witness():
    line = staircase()
    original, moved = nonconvexity_witness_by_reordering(line)
    assert original.start == moved.start and original.end == moved.end
    assert original.points != moved.points
    assert moved.is_geodesic() and len(moved) == len(original)


def test_alternating_line_reordering_witness():
    line = alternating(6)
    assert is_geodesic_window(line)
    assert not is_convex_on_window(line)
    original, moved = nonconvexity_witness_by_reordering(line)
    assert original.points != moved.points and moved.is_geodesic()


@given(st.sampled_from(["Z2_square", "Z2_diag", "ZxZ2_diag", "ZxZ3_std", "Z3_diag"]), st.data())
@settings(max_examples=40, deadline=None)
def test_convex_windows_are_algebraic(name, data):
    s = genset(name)
    gens = s.edge_generators
    steps = data.draw(st.lists(st.sampled_from(gens), min_size=1, max_size=5))
    line = LineWindow.from_steps(s, s.group.zero(), steps)
    if not is_geodesic_window(line):
        return
    res = is_convex_on_window(line)
    if res:
        assert line.is_algebraic()
        assert nonconvexity_witness_by_reordering(line) is None
    else:
        n, m, seg = res.witness
        assert seg.is_geodesic() and seg.points != line.segment(n, m).points


# ---- quasi-convexity certificate ----


def test_certificate_z2_diagonal():
    s = genset("Z2_diag")
    cert = quasiconvexity_certificate(s, el(s, 1, 1))
    assert cert.mu_sq == Fraction(1, 2)
    assert cert.norm_sq == 2 and cert.max_inner == 1
    assert cert.k_bound(1) == 8
    assert [cert.C(c) for c in (0, 1, 2)] == [0, 17, 34]


def test_certificate_z_times_z2():
    s = genset("ZxZ2_diag")
    cert = quasiconvexity_certificate(s, el(s, 1, 1))
    assert cert.max_inner == -1
    assert cert.mu_sq == Fraction(-1, 1)
    assert cert.torsion_diam == 2
    assert [cert.C(c) for c in (0, 1, 2)] == [2, 7, 12]
    assert cert.k_bound(2) == 4


def test_certificate_without_off_type_generators():
    s = genset("Z_pm1")
    # the only other generator is -1, which is off-type
    cert = quasiconvexity_certificate(s, el(s, 1))
    assert cert.max_inner == -1 and cert.C(1) == 1 + 4
    z = make_group(1)
    one_sided = GeneratingSet(z, [el(s, 1)], symmetrize=False)
    cert = quasiconvexity_certificate(one_sided, el(s, 1))
    assert cert.no_off_type and cert.k_bound(3) == 0 and cert.C(3) == 3


def test_certificate_errors():
    with pytest.raises(ZeroQuasiType):
        s = genset("ZxZ2_std")
        quasiconvexity_certificate(s, el(s, 0, 1))
    s = genset("Z2_diag")
    with pytest.raises(NotMaximal):
        quasiconvexity_certificate(s, el(s, 1, 0))


# ---- fellow travelling ----


def oracle_fellow_constant(name, pts, a, c):
    """Smallest C for which the fellow-traveller condition holds, by brute force."""
    rank, torsion, gens = oracle_args(name)
    near = [v for v, d in oracles.bfs_distances(rank, torsion, gens, c).items()]
    b = a + len(pts) - 1
    worst = 0
    for n in range(a, b - 2 * c + 1):
        for m in range(n, b - 2 * c + 1):
            for dx in near:
                x = oracles.reduce(rank, torsion, [p + q for p, q in zip(pts[n - a], dx)])
                for dy in near:
                    y = oracles.reduce(rank, torsion, [p + q for p, q in zip(pts[m - a], dy)])
                    for path in oracle_paths(name, x, y):
                        for j, v in enumerate(path):
                            ref = pts[n + j - a]
                            diff = [p - q for p, q in zip(v, ref)]
                            worst = max(worst, oracles.word_length(rank, torsion, gens, diff))
    return worst


def test_staircase_fellow_traveller_constant():
    line = staircase()
    pts = [p.coords for p in line.points]
    assert oracle_fellow_constant("Z2_square", pts, -3, 0) == 2
    assert not check_fellow_traveller(line, 0, 0)
    res = check_fellow_traveller(line, 1, 0)
    assert not res and res.violation["distance"] == 2
    assert check_fellow_traveller(line, 2, 0)


def test_small_constant_is_violated():
    s = genset("ZxZ2_diag")
    line = algebraic_line(s, s.group.zero(), el(s, 1, 0), 0, 4)
    res = check_fellow_traveller(line, 0, 0)
    assert not res
    v = res.violation
    assert v["distance"] > 0 and len(v["geodesic"]) == v["m"] - v["n"] + 1


@pytest.mark.parametrize("c", [0, 1])
@pytest.mark.parametrize("pattern", [(0, 0, 0, 0), (1, 1, 1, 1), (0, 1, 0, 1), (1, 0, 0, 1)])
def test_certificate_constant_dominates_oracle(c, pattern):
    s = genset("ZxZ2_diag")
    line = LineWindow.from_steps(s, s.group.zero(), [el(s, 1, t) for t in pattern])
    cert = quasiconvexity_certificate(s, el(s, 1, 0))
    exact = oracle_fellow_constant("ZxZ2_diag", [p.coords for p in line.points], 0, c)
    assert exact <= cert.C(c)
    assert check_fellow_traveller(line, cert, c)
    assert check_fellow_traveller(line, exact, c)
    if exact > 0:
        assert not check_fellow_traveller(line, exact - 1, c)


def test_fellow_traveller_requires_matching_type():
    s = genset("Z2_diag")
    cert = quasiconvexity_certificate(s, el(s, 1, 1))
    line = algebraic_line(s, s.group.zero(), el(s, 1, 0), 0, 2)
    with pytest.raises(ValueError):
        check_fellow_traveller(line, cert, 0)


# ---- periodic extension and transfer ----


def test_periodicize_algebraic_is_identity():
    s = genset("Z2_diag")
    line = algebraic_line(s, el(s, 1, 2), el(s, 1, 1), -3, 3)
    assert periodicize(line, 0, 2).points == line.points
    # a base index n != 0 reparametrizes the same line: eta(z) = gamma(z + n)
    shifted = periodicize(line, -1, 2)
    step = el(s, 1, 1)
    assert all(shifted[z] == line[z] + (-1) * step for z in range(-3, 4))


def test_periodicize_alternating():
    line = alternating(6, a=-2)
    per = periodicize(line, 0, 2)
    assert [p.coords for p in per.steps] == [p.coords for p in line.steps]
    assert quasi_type(per) == quasi_type(line)


def test_periodicize_period_one():
    s = genset("ZxZ2_diag")
    line = LineWindow.from_steps(s, s.group.zero(), [el(s, 1, 1), el(s, 1, 0), el(s, 1, 0)], -1)
    per = periodicize(line, 0, 1)
    assert per.is_algebraic()
    assert per.steps[0] == line[1] - line[0]
    assert per[0] == line[0]


def test_periodicize_formula_and_errors():
    s = genset("ZxZ2_diag")
    steps = [el(s, 1, t) for t in (1, 0, 0, 1, 1, 0, 1)]
    line = LineWindow.from_steps(s, s.group.zero(), steps, -3)
    n, m = -1, 2
    per = periodicize(line, n, m)
    p = m - n
    for z in range(line.a, line.b + 1):
        assert per[z] == (z // p) * (line[m] - line[n]) + line[n + z % p]
    for z in range(line.a, line.b - p + 1):
        assert per[z + p] - per[z] == line[m] - line[n]
    with pytest.raises(ValueError):
        periodicize(line, 2, 2)
    with pytest.raises(IndexError):
        periodicize(line, -5, 0)


def test_transfer_z_times_z2():
    s = genset("ZxZ2_diag")
    rep = parallel_geodesic_transfer(s, el(s, 1, 0), 0, 4, bases=[s.group.zero()])
    assert rep.lines_checked == 16 and rep.exhaustive
    assert rep.all_geodesic and rep.uniform


def test_transfer_torsion_free():
    s = genset("Z2_diag")
    rep = parallel_geodesic_transfer(s, el(s, 1, 1), -2, 2, bases=[s.group.zero()])
    assert rep.lines_checked == 1 and rep.all_geodesic


def test_transfer_non_geodesic_type():
    s = genset("Z_pm1_pm2")
    rep = parallel_geodesic_transfer(s, el(s, 1), -2, 2)
    assert rep.geodesic == 0 and rep.uniform


def test_transfer_sampling_is_seeded():
    s = genset("ZxZ2_diag")
    a = parallel_geodesic_transfer(s, el(s, 1, 0), 0, 14, max_lines=64, seed=3)
    b = parallel_geodesic_transfer(s, el(s, 1, 0), 0, 14, max_lines=64, seed=3)
    assert not a.exhaustive and a.to_json() == b.to_json()
    assert a.all_geodesic


def test_line_json():
    line = staircase()
    data = line.to_json()
    assert data["a"] == -3 and data["points"][3] == [0, 0]
