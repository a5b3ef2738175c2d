import math
import random
from fractions import Fraction

import pytest

from tightstrings.complex import homology
from tightstrings.construct import sphere_four_points
from tightstrings.gapspace import collinear_points, two_parallel_lines, uniform_metric
from tightstrings.persistence import (Filtration, FiltrationError, Interval, barcode, betti_curve,
                                      build_filtration, subset_births)
from tightstrings.strings import birth, enumerate_eps_strings

import lemmas
from conftest import random_spaces


def test_circle_barcode():
    bc = barcode(build_filtration(sphere_four_points()))
    assert bc.intervals == [Interval(0, 0, None), Interval(2, 0, 4)]
    assert bc.zero_length == 6
    assert bc.to_text() == "0 0 inf\n2 0 4\n"


def test_uniform_barcode():
    bc = barcode(build_filtration(uniform_metric(3)))
    assert bc.intervals == [Interval(0, 1, None)]
    assert bc.zero_length == 3


def test_betti_curve():
    filt = build_filtration(sphere_four_points())
    grid = [0, Fraction(39, 10), 4]
    assert betti_curve(filt, 2, grid) == [(0, 1), (Fraction(39, 10), 1), (4, 0)]
    with pytest.raises(ValueError):
        betti_curve(filt, 2, [1, 0])


def test_subset_births_match_pointwise_birth(fixture_space, backend):
    if fixture_space.n > 8:
        pytest.skip("pointwise check is quadratic in subsets")
    births = subset_births(fixture_space, backend=backend)
    for s, b in births.items():
        ref = birth(fixture_space, s)
        assert ref is not None
        if fixture_space.tolerance:
            assert math.isclose(b, ref, rel_tol=1e-9, abs_tol=1e-9)
        else:
            assert b == ref


def test_dfs_and_dp_paths_agree():
    space = random_spaces(1, 9, (7, 7))[0]
    dp = subset_births(space)            # full size: dynamic programme
    dfs = subset_births(space, 4)        # capped: ordered enumeration
    assert {s: b for s, b in dp.items() if len(s) <= 4} == dfs


def test_final_level_is_full_simplex(fixture_space):
    filt = build_filtration(fixture_space)
    top = filt.level(filt.distinct_births()[-1])
    assert len(top) == 2 ** fixture_space.n - 1
    assert homology(top).betti == (1,) + (0,) * (fixture_space.n - 1)


def test_monotone_levels(fixture_space):
    filt = build_filtration(fixture_space)
    births = filt.distinct_births()
    prev = set()
    for b in births:
        cur = filt.level(b).simplex_set()
        assert prev <= cur
        prev = cur


def test_locally_constant_between_births(fixture_space):
    filt = build_filtration(fixture_space)
    births = filt.distinct_births()
    for a, b in zip(births, births[1:]):
        mid = (a + b) / 2
        assert filt.level(mid).simplex_set() == filt.level(a).simplex_set()


def test_levels_match_eps_strings(fixture_space):
    filt = build_filtration(fixture_space)
    for eps in filt.distinct_births():
        assert filt.level(eps).simplex_set() == set(enumerate_eps_strings(fixture_space, eps))


def test_barcode_matches_level_homology(fixture_space, backend):
    filt = build_filtration(fixture_space)
    bc = barcode(filt, backend=backend)
    levels = lemmas.sample_levels(filt, 20, random.Random(1))
    assert lemmas.barcode_level_mismatches(fixture_space, bc, filt, levels) == []


def test_tie_break_independence(fixture_space):
    filt = build_filtration(fixture_space)
    ref = barcode(filt).multiset()
    rng = random.Random(2)
    salt = {s: rng.random() for s in filt.simplices}
    alt = filt.resorted(lambda s, b: (b, len(s), salt[s]))
    rev = filt.resorted(lambda s, b: (b, len(s), tuple(-v for v in s)))
    assert barcode(alt).multiset() == ref
    assert barcode(rev).multiset() == ref


def test_bad_order_rejected():
    filt = build_filtration(collinear_points(range(3)))
    bad = filt.resorted(lambda s, b: -len(s))
    with pytest.raises(FiltrationError):
        barcode(bad)


def test_float_filtration_is_monotone():
    filt = build_filtration(two_parallel_lines(3, 4))
    pos = {s: b for s, b in zip(filt.simplices, filt.births)}
    for s, b in pos.items():
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            if f:
                assert pos[f] <= b


def test_max_dim_caps_simplices():
    filt = build_filtration(collinear_points(range(6)), max_dim=2)
    assert max(len(s) for s in filt.simplices) == 3


def test_dfs_budget():
    with pytest.raises(FiltrationError):
        build_filtration(uniform_metric(30), max_dim=6)
