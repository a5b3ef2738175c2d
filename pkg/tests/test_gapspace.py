import itertools
import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tightstrings.gapspace import (EXACT, FLOAT, GapSpace, GapSpaceError, TriangleInequalityError,
                                   circle_arc_metric, collinear_points, digraph_gaps, is_metric, polygon_points,
                                   random_digraph_gaps, random_graph_metric, read_space, regular_polygon,
                                   two_parallel_lines, uniform_metric, validate)

from conftest import directed_cycle, with_potential


def test_validate_single_point():
    assert validate([[0]]).ok


def test_validate_uniform_ok():
    assert validate(uniform_metric(4).gaps).ok


def test_validate_reports_violation():
    report = validate([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    assert not report.ok
    assert [(v[0], v[1], v[2]) for v in report.violations] == [(0, 1, 2)]
    x, y, z, lhs, rhs = report.violations[0]
    assert (lhs, rhs) == (2, 3)


def test_validate_asymmetric_lists_every_ordered_triple():
    m = [[0, 1, 5], [1, 0, 1], [1, 1, 0]]
    bad = {(x, y, z) for x, y, z, *_ in validate(m).violations}
    brute = {(x, y, z) for x, y, z in itertools.product(range(3), repeat=3) if m[x][y] + m[y][z] < m[x][z]}
    assert bad == brute


def test_validate_errors():
    with pytest.raises(GapSpaceError):
        validate([[0, 1], [1]])
    with pytest.raises(GapSpaceError):
        validate([[0]], tolerance=-1)
    with pytest.raises(GapSpaceError):
        validate([])


def test_float_tolerance_in_validate():
    eps = 1e-12
    m = [[0.0, 1.0, 2.0 + eps], [1.0, 0.0, 1.0], [2.0 + eps, 1.0, 0.0]]
    assert validate(m, 1e-9).ok
    assert not validate(m, 1e-15).ok


def test_is_metric():
    assert is_metric(uniform_metric(3))
    assert not is_metric(directed_cycle())
    assert not is_metric(GapSpace.from_matrix([[0, 0], [0, 0]]))


def test_uniform_metric():
    u = uniform_metric(3)
    assert u.gaps == tuple(tuple(Fraction(int(i != j)) for j in range(3)) for i in range(3))
    assert uniform_metric(1).gaps == ((0,),)
    assert validate(uniform_metric(4).gaps).ok and is_metric(uniform_metric(4))
    with pytest.raises(GapSpaceError):
        uniform_metric(0)


def test_collinear():
    c = collinear_points([0, 5, 7, 12])
    assert list(c.gaps[0]) == [0, 5, 7, 12]
    c3 = collinear_points([0, 1, 2])
    assert c3.d(0, 2) == c3.d(0, 1) + c3.d(1, 2) == 2
    assert c.mode == EXACT
    with pytest.raises(GapSpaceError):
        collinear_points([1, 2, 1])


def test_two_parallel_lines():
    s = two_parallel_lines(3, 3, separation=1, spacing=1)
    assert s.mode == FLOAT and s.n == 6
    assert s.d(0, 1) == 1 and s.d(0, 2) == 2
    for i in range(3):
        for j in range(3):
            assert math.isclose(s.d(i, 3 + j), math.sqrt((i - j) ** 2 + 1))
    assert two_parallel_lines(3, 4).n == 7
    with pytest.raises(GapSpaceError):
        two_parallel_lines(2, 3)


def test_polygon_points():
    s = polygon_points([3, 3, 3], regular_polygon(3))
    assert s.n == 6 and s.metric
    assert polygon_points([3, 3, 3, 3], regular_polygon(4)).n == 8
    with pytest.raises(GapSpaceError):
        polygon_points([3, 3, 3, 3], [(0, 0), (2, 0), (1, 0.2), (1, 2)])  # reflex corner
    with pytest.raises(GapSpaceError):
        polygon_points([2, 3, 3], regular_polygon(3))


def test_circle_arc():
    c = circle_arc_metric([0, 2, 6, 8], 12)
    assert (c.d(0, 2), c.d(0, 1), c.d(1, 2)) == (6, 2, 4)
    two = circle_arc_metric([0, 1], 2)
    assert two.d(0, 1) == two.d(1, 0) == 1
    with pytest.raises(GapSpaceError):
        circle_arc_metric([0, 12], 12)


def test_digraph():
    g = directed_cycle()
    assert g.d(0, 1) == 1 and g.d(1, 0) == 2
    assert not g.symmetric
    sym = digraph_gaps(3, [(0, 1, 2), (1, 0, 2), (1, 2, 3), (2, 1, 3)])
    assert sym.symmetric and sym.d(0, 2) == 5
    with pytest.raises(GapSpaceError, match="strongly connected"):
        digraph_gaps(3, [(0, 1, 1), (1, 2, 1)])
    with pytest.raises(GapSpaceError, match="negative"):
        digraph_gaps(2, [(0, 1, -1), (1, 0, 1)])


def test_negative_gaps_are_accepted():
    s = with_potential(uniform_metric(3), [0, 2, 5])
    assert min(v for row in s.gaps for v in row) < 0
    assert validate(s.gaps).ok and not s.metric


def test_triangle_violation_rejected_on_construction():
    with pytest.raises(TriangleInequalityError) as info:
        GapSpace.from_matrix([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    assert not info.value.report.ok


def test_mixed_modes_rejected():
    with pytest.raises(GapSpaceError, match="mixed"):
        GapSpace.from_matrix([[Fraction(0), 1.0], [1.0, Fraction(0)]])


def test_exact_json_round_trip():
    s = GapSpace.from_matrix([[0, Fraction(1, 3), Fraction(2, 3)], [Fraction(1, 3), 0, Fraction(1, 3)],
                              [Fraction(2, 3), Fraction(1, 3), 0]], ["a", "b", "c"])
    text = json.dumps(s.to_json())
    back = read_space(text)
    assert back.gaps == s.gaps and back.labels == s.labels
    assert all(isinstance(v, Fraction) for row in back.gaps for v in row)


def test_json_decimal_strings():
    s = read_space('{"gaps": [["0", "0.1"], ["0.1", "0"]], "mode": "exact"}')
    assert s.d(0, 1) == Fraction(1, 10)


def test_csv_reader():
    s = read_space("a,b,c\n0,1,2\n1,0,1\n2,1,0\n", "csv")
    assert s.labels == ("a", "b", "c") and s.d(0, 2) == 2
    with pytest.raises(GapSpaceError, match="line 3"):
        read_space("a,b\n0,1\n1,x\n", "csv")


def test_large_exact_values_fall_back():
    big = Fraction(10**30)
    s = collinear_points([0, big, 2 * big])
    arr, _ = s.numeric()
    assert arr is None


def _gon_holds(space, seq):
    d = space.gaps
    total = sum((d[a][b] for a, b in zip(seq, seq[1:])), 0)
    return total >= d[seq[0]][seq[-1]]


def test_ngon_inequality_follows_from_triangles():
    rng = random.Random(3)
    for _ in range(100):
        space = random_graph_metric(rng.randint(3, 7), rng) if rng.random() < 0.5 else \
            random_digraph_gaps(rng.randint(3, 7), rng)
        for k in range(3, 9):
            seq = [rng.randrange(space.n) for _ in range(k)]
            assert _gon_holds(space, seq)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.integers(0, 10**6))
def test_digraph_output_always_validates(n, seed):
    space = random_digraph_gaps(n, random.Random(seed))
    assert validate(space.gaps).ok


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.integers(0, 10**6))
def test_symmetric_ordered_vs_unordered_validation(n, seed):
    rng = random.Random(seed)
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = rng.randint(1, 6)
    ordered = validate(m).ok
    unordered = all(m[x][y] + m[y][z] >= m[x][z]
                    for x, z in itertools.combinations(range(n), 2) for y in range(n))
    assert ordered == unordered
