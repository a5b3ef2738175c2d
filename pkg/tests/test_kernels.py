import random
from fractions import Fraction

import numpy as np
import pytest

from tightstrings import _pycore, kernels
from tightstrings.gapspace import collinear_points, random_digraph_gaps, random_graph_metric, two_parallel_lines
from tightstrings.strings import birth, enumerate_eps_strings

compiled_only = pytest.mark.skipif("compiled" not in kernels.available_backends(),
                                   reason="compiled extension not built")


def _int_matrix(space):
    arr, _ = space.numeric()
    return arr


def _spaces(count, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(3, 8)
        out.append(random_graph_metric(n, rng) if rng.random() < 0.6 else random_digraph_gaps(n, rng))
    return out


def test_backend_selection():
    assert kernels.BACKEND in kernels.available_backends()
    assert kernels.get("python") is _pycore
    with pytest.raises(ValueError):
        kernels.get("fortran")


@compiled_only
@pytest.mark.parametrize("eps", [0, 1, 3])
def test_dfs_backends_agree(eps):
    core = kernels.get("compiled")
    for space in _spaces(40, eps):
        D = _int_matrix(space)
        for bounded in (True, False):
            a = core.dfs_strings(D, eps, 0.0, space.n, bounded)
            b = _pycore.dfs_strings(D.tolist(), eps, 0.0, space.n, bounded)
            assert {k: v[0] for k, v in a.items()} == {k: v[0] for k, v in b.items()}


@compiled_only
def test_dfs_backends_agree_float():
    core = kernels.get("compiled")
    space = two_parallel_lines(3, 4)
    D = space.numeric()[0]
    a = core.dfs_strings(D, 0.0, 1e-9, space.n, True)
    b = _pycore.dfs_strings(D.tolist(), 0.0, 1e-9, space.n, True)
    assert set(a) == set(b)


@compiled_only
def test_subset_births_and_held_karp_agree():
    core = kernels.get("compiled")
    for space in _spaces(40, 7):
        D = _int_matrix(space)
        assert list(core.subset_births(D, 0.0, space.n)) == list(_pycore.subset_births(D.tolist(), 0.0, space.n))
        assert core.held_karp(D, 0.0)[0] == _pycore.held_karp(D.tolist(), 0.0)[0]


def _random_columns(rng, n_rows, n_cols):
    return [sorted(rng.sample(range(n_rows), rng.randint(0, min(4, n_rows)))) for _ in range(n_cols)]


def _rank_gf2_numpy(columns, n_rows):
    m = np.zeros((n_rows, len(columns)), dtype=np.uint8)
    for j, col in enumerate(columns):
        for i in col:
            m[i, j] ^= 1
    rank, row = 0, 0
    for c in range(m.shape[1]):
        piv = next((r for r in range(row, n_rows) if m[r, c]), None)
        if piv is None:
            continue
        m[[row, piv]] = m[[piv, row]]
        for r in range(n_rows):
            if r != row and m[r, c]:
                m[r] ^= m[row]
        row += 1
        rank += 1
    return rank


@pytest.mark.parametrize("seed", range(5))
def test_reduce_gf2_rank(backend, seed):
    rng = random.Random(seed)
    mod = kernels.get(backend)
    for _ in range(30):
        n_rows, n_cols = rng.randint(1, 12), rng.randint(1, 12)
        cols = _random_columns(rng, n_rows, n_cols)
        lows = mod.reduce_gf2(cols, n_rows)
        pivots = [l for l in lows if l >= 0]
        assert len(pivots) == len(set(pivots))
        assert len(pivots) == _rank_gf2_numpy(cols, n_rows)


def test_huge_exact_values_use_generic_path(backend):
    big = Fraction(10**25)
    space = collinear_points([0, big, 3 * big, Fraction(7, 3) * big])
    strings = enumerate_eps_strings(space, 0, backend=backend)
    assert len(strings) == 15
    assert birth(space, (0, 1, 2, 3), backend=backend) == 0


def test_scaled_rationals_round_trip(backend):
    space = collinear_points([0, Fraction(1, 3), Fraction(5, 7), Fraction(11, 9)])
    strings = enumerate_eps_strings(space, 0, backend=backend)
    assert len(strings) == 15
    assert all(isinstance(r.birth, Fraction) for r in strings.values())


def test_reduce_gf2_cancels_repeated_rows(backend):
    mod = kernels.get(backend)
    assert mod.reduce_gf2([[2, 0, 2], [1, 1], [0, 0, 0, 1]], 3) == [0, -1, 1]
