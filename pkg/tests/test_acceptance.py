"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the PASS/FAIL lines
are printed even when output capture is on.
"""
import itertools
import random
import time
from fractions import Fraction

import pytest

from tightstrings.complex import INTEGER, MOD2, build_complex, connected_components, homology
from tightstrings.construct import (SURFACE_BETTI, candidate_complexes, minimal_sphere_points, realize,
                                    sphere_four_points, surface_library, verify_realization)
from tightstrings.gapspace import FLOAT, collinear_points, polygon_points, regular_polygon, two_parallel_lines, \
    uniform_metric
from tightstrings.persistence import barcode, build_filtration, subset_births
from tightstrings.strings import birth, enumerate_eps_strings, oracle_enumerate

import lemmas
from conftest import FIXTURES, random_spaces


@pytest.fixture
def report(capsys):
    def emit(label, ok, seconds, limit=None, detail=""):
        within = limit is None or seconds < limit
        status = "PASS" if ok and within else "FAIL"
        budget = f" / {limit:g}s" if limit is not None else ""
        with capsys.disabled():
            print(f"\n{status}  {label}: {detail} ({seconds:.2f}s{budget})")
        assert ok, detail
        assert within, f"took {seconds:.2f}s, limit {limit}s"
    return emit


def _complex(space, eps=0):
    return build_complex(enumerate_eps_strings(space, eps))


def _full_simplex(n):
    return {s for k in range(1, n + 1) for s in itertools.combinations(range(n), k)}


def test_c1_uniform_metric(report):
    t0 = time.perf_counter()
    problems = []
    for n in range(3, 9):
        strings = enumerate_eps_strings(uniform_metric(n), 0)
        cx = build_complex(strings)
        if len(strings) or len(cx):
            problems.append(f"n={n}: {len(strings)} strings")
    report("C1 uniform metric", not problems, time.perf_counter() - t0, 1,
           "; ".join(problems) or "no strings and empty complex for n=3..8")


def test_c2_collinear(report):
    rng = random.Random(2)
    problems = []
    timing = 0.0
    for n in range(3, 11):
        pos = sorted({Fraction(rng.randint(0, 10**4), rng.randint(1, 97)) for _ in range(4 * n)})[:n]
        t0 = time.perf_counter()
        space = collinear_points(pos)
        cx = _complex(space)
        betti = homology(cx).betti
        elapsed = time.perf_counter() - t0
        if n == 10:
            timing = elapsed
        if len(cx) != 2 ** n - 1 or cx.simplex_set() != _full_simplex(n) or betti != (1,) + (0,) * (n - 1):
            problems.append(f"n={n}: {len(cx)} simplices, Betti {betti}")
    report("C2 collinear rationals", not problems, timing, 5,
           "; ".join(problems) or "full simplex with point homology for n=3..10 (time shown for n=10)")


def test_c3_parallel_lines(report):
    t0 = time.perf_counter()
    problems = []
    for m, n in [(3, 3), (3, 5), (4, 4)]:
        space = two_parallel_lines(m, n)
        assert space.mode == FLOAT and space.tolerance == 1e-9
        cx = _complex(space)
        count, _ = connected_components(cx)
        want = {s for s in _full_simplex(m)} | {tuple(m + i for i in s) for s in _full_simplex(n)}
        if count != 2 or cx.simplex_set() != want:
            problems.append(f"({m},{n}): {count} components, maximal {cx.maximal_simplices()}")
    report("C3 two parallel lines", not problems, time.perf_counter() - t0, 1,
           "; ".join(problems) or "two disjoint full simplices of dims m-1, n-1")


def _cycle_of_simplices(maximal, k):
    """k simplices, each meeting exactly two others in one vertex, forming one cycle."""
    if len(maximal) != k:
        return False
    sets = [set(s) for s in maximal]
    nbrs = {i: [j for j in range(k) if j != i and sets[i] & sets[j]] for i in range(k)}
    if any(len(v) != 2 or any(len(sets[i] & sets[j]) != 1 for j in v) for i, v in nbrs.items()):
        return False
    seen, cur, prev = {0}, 0, None
    while True:
        nxt = next(j for j in nbrs[cur] if j != prev)
        if nxt == 0:
            return len(seen) == k
        seen.add(nxt)
        prev, cur = cur, nxt


def test_c4_polygons(report):
    t0 = time.perf_counter()
    problems = []
    for k in (3, 4, 5):
        for interior in (1, 2):
            space = polygon_points([2 + interior] * k, regular_polygon(k))
            assert space.mode == FLOAT
            cx = _complex(space)
            maximal = cx.maximal_simplices()
            betti = homology(cx, MOD2).betti
            if not _cycle_of_simplices(maximal, k) or betti[:2] != (1, 1) or any(betti[2:]):
                problems.append(f"k={k}, {interior} interior: maximal {maximal}, Betti {betti}")
    report("C4 convex polygons", not problems, time.perf_counter() - t0, 1,
           "; ".join(problems) or "k simplices in a cycle meeting in single corners, Betti (1,1)")


def test_c5_circle_and_minimal_sphere(report):
    t0 = time.perf_counter()
    cx = _complex(sphere_four_points())
    boundary = {s for s in _full_simplex(4) if len(s) < 4}
    betti = homology(cx).betti
    small = [cx3 for n in (1, 2, 3) for cx3 in candidate_complexes(n)
             if homology(cx3).betti == (1, 0, 1)]
    search = minimal_sphere_points()
    ok = cx.simplex_set() == boundary and betti == (1, 0, 1) and not small and search.minimal_points == 4
    report("C5 circle-arc rectangle", ok, time.perf_counter() - t0, 10,
           f"complex = boundary of tetrahedron: {cx.simplex_set() == boundary}, Betti {betti}, "
           f"sphere shapes on <=3 points: {len(small)}, fewest points: {search.minimal_points}")


def test_c6_surface_realizations(report):
    t0 = time.perf_counter()
    problems, details = [], []
    expected_f = {"sphere": (4, 6, 4), "torus": (7, 21, 14)}
    for name in ("sphere", "torus", "klein", "rp2", "disk"):
        tri = surface_library(name)
        if name in expected_f and tri.f_vector() != expected_f[name]:
            problems.append(f"{name}: f-vector {tri.f_vector()}")
        space = realize(tri)
        rep = verify_realization(space, tri, strict=False)
        h = homology(_complex(space), INTEGER)
        torsion_ok = h.torsion[1] == ((2,) if name in ("klein", "rp2") else ())
        if not (rep.flags_exact and rep.edge_in_middle and rep.no_long_strings and rep.isomorphic):
            problems.append(f"{name}: {rep.summary()}")
        if h.betti != SURFACE_BETTI[name] or not torsion_ok:
            problems.append(f"{name}: H = {[h.group(k) for k in range(3)]}")
        details.append(f"{name} H1={h.group(1)}")
    report("C6 surface realizations", not problems, time.perf_counter() - t0, 30,
           "; ".join(problems) or "all checks pass; " + ", ".join(details))


def _brute_births(space):
    d = space.gaps
    out = {}
    for k in range(3, space.n + 1):
        for s in itertools.combinations(range(space.n), k):
            out[s] = min(sum(d[a][b] for a, b in zip(o, o[1:])) - d[o[0]][o[-1]]
                         for o in itertools.permutations(s))
    return out


def _quartiles(values):
    v = sorted(values)
    return [v[(len(v) - 1) * q // 4] for q in (1, 2, 3)]


def test_c7_oracle_equivalence(report):
    t0 = time.perf_counter()
    rng = random.Random(7)
    spaces = random_spaces(200, 70, (3, 7)) + random_spaces(100, 71, (3, 7), digraph_share=1.0)
    assert sum(not s.symmetric for s in spaces) >= 90
    problems = []
    for idx, space in enumerate(spaces):
        brute = _brute_births(space)
        eps_choices = [Fraction(0)] + _quartiles(brute.values())
        # births: all-subsets DP and single-set DP against min over orders
        dp = subset_births(space)
        if any(dp[s] != b for s, b in brute.items()):
            problems.append(f"space {idx}: subset DP differs")
        for s in rng.sample(sorted(brute), min(4, len(brute))):
            if birth(space, s) != brute[s]:
                problems.append(f"space {idx}: birth{s} = {birth(space, s)}, brute {brute[s]}")
        # strings: pruned enumerator against brute force at a random level
        eps = rng.choice(eps_choices)
        fast = enumerate_eps_strings(space, eps)
        slow = oracle_enumerate(space, eps)
        if {s: r.birth for s, r in fast.items()} != {s: r.birth for s, r in slow.items()}:
            problems.append(f"space {idx}: strings differ at eps={eps}")
        # the other levels against the brute birth table
        for e in eps_choices:
            got = {s for s in enumerate_eps_strings(space, e) if len(s) >= 3}
            if got != {s for s, b in brute.items() if b <= e}:
                problems.append(f"space {idx}: size>=3 strings differ at eps={e}")
    report("C7 oracle equivalence", not problems, time.perf_counter() - t0, 60,
           "; ".join(problems[:5]) or f"{len(spaces)} spaces (100 directed), enumerator and births match brute force")


def test_c8_lemma_suites(report):
    t0 = time.perf_counter()
    rng = random.Random(8)
    spaces = [f() for f in FIXTURES.values()] + random_spaces(500, 80, (3, 7), digraph_share=0.4)
    violations = []
    for space in spaces:
        violations += lemmas.all_violations(space, rng)
    report("C8 string lemma suites", not violations, time.perf_counter() - t0, None,
           "; ".join(violations[:5]) or f"{len(spaces)} spaces, zero violations")


def test_c9_persistence(report):
    t0 = time.perf_counter()
    rng = random.Random(9)
    problems = []
    for name, make in sorted(FIXTURES.items()):
        space = make()
        filt = build_filtration(space)
        bc = barcode(filt)
        levels = lemmas.sample_levels(filt, 50, rng)
        assert len(levels) == 50
        problems += [f"{name}: {m}" for m in lemmas.barcode_level_mismatches(space, bc, filt, levels)]
        top = filt.level(filt.distinct_births()[-1])
        if space.n >= 3 and top.simplex_set() != _full_simplex(space.n):
            problems.append(f"{name}: final complex is not the full simplex")
        salt = {s: rng.random() for s in filt.simplices}
        alt = filt.resorted(lambda s, b: (b, len(s), salt[s]))
        if barcode(alt).multiset() != bc.multiset():
            problems.append(f"{name}: barcode depends on tie-break")
    report("C9 persistence", not problems, time.perf_counter() - t0, 60,
           "; ".join(problems[:5]) or f"{len(FIXTURES)} fixtures x 50 levels, full simplex at the top, "
                                       "tie-break independent")
