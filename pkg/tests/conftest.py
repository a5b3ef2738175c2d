import random
from fractions import Fraction

import pytest

from tightstrings import kernels
from tightstrings.construct import realize, sphere_four_points, surface_library
from tightstrings.gapspace import (GapSpace, circle_arc_metric, collinear_points, digraph_gaps, polygon_points,
                                   random_digraph_gaps, random_graph_metric, regular_polygon, two_parallel_lines,
                                   uniform_metric)


def with_potential(space, potential):
    """Add d'(x, y) = d(x, y) + f(y) - f(x); every excess is unchanged."""
    n = space.n
    f = [Fraction(p) for p in potential]
    m = [[space.gaps[i][j] + f[j] - f[i] for j in range(n)] for i in range(n)]
    return GapSpace.from_matrix(m)


def directed_cycle():
    return digraph_gaps(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)])


FIXTURES = {
    "uniform5": lambda: uniform_metric(5),
    "collinear6": lambda: collinear_points(range(6)),
    "collinear_gaps": lambda: collinear_points([0, 5, 7, 12]),
    "parallel33": lambda: two_parallel_lines(3, 3),
    "triangle_mid": lambda: polygon_points([3, 3, 3], regular_polygon(3)),
    "square_mid": lambda: polygon_points([3, 3, 3, 3], regular_polygon(4)),
    "circle": sphere_four_points,
    "dicycle": directed_cycle,
    "negative": lambda: with_potential(collinear_points([0, 1, 3, 4]), [0, 2, -3, 5]),
    "random_metric": lambda: random_graph_metric(7, random.Random(11)),
    "random_digraph": lambda: random_digraph_gaps(6, random.Random(5)),
    "realized_disk": lambda: realize(surface_library("disk")),
}


@pytest.fixture(params=sorted(FIXTURES))
def fixture_space(request):
    return FIXTURES[request.param]()


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return request.param


def random_spaces(count, seed, n_range=(3, 7), digraph_share=0.0):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(*n_range)
        if rng.random() < digraph_share:
            out.append(random_digraph_gaps(n, rng))
        else:
            out.append(random_graph_metric(n, rng))
    return out
