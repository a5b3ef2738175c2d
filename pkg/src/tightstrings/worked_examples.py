"""Regenerates the standard example spaces and surface realizations and
checks each against its known string complex."""
from __future__ import annotations

import time
from dataclasses import dataclass

from .complex import INTEGER, build_complex, connected_components, homology
from .construct import (SURFACE_BETTI, minimal_sphere_points, realize, sphere_four_points,
                        surface_library, verify_realization)
from .gapspace import (collinear_points, polygon_points, regular_polygon, two_parallel_lines,
                       uniform_metric)
from .strings import enumerate_eps_strings


@dataclass
class Check:
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name:<28} {self.detail}  ({self.seconds:.2f}s)"


def _complex(space):
    return build_complex(enumerate_eps_strings(space, 0))


def _timed(name, fn):
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # report, do not abort the run
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Check(name, ok, detail, time.perf_counter() - t0)


def example_uniform():
    sizes = [len(enumerate_eps_strings(uniform_metric(n), 0)) for n in range(3, 9)]
    return all(s == 0 for s in sizes), f"string counts for n=3..8: {sizes}"


def example_collinear():
    out = []
    for n in range(3, 11):
        cx = _complex(collinear_points(range(n)))
        out.append(len(cx) == 2 ** n - 1 and cx.dim == n - 1 and homology(cx).betti[0] == 1
                   and not any(homology(cx).betti[1:]))
    return all(out), "full simplex with point homology for n=3..10"


def example_parallel_lines():
    got = []
    for m, n in [(3, 3), (3, 5), (4, 4)]:
        cx = _complex(two_parallel_lines(m, n))
        count, _ = connected_components(cx)
        dims = sorted(len(s) - 1 for s in cx.maximal_simplices())
        got.append(count == 2 and dims == sorted([m - 1, n - 1]))
    return all(got), "two disjoint simplices of dims m-1, n-1"


def example_polygon():
    res = []
    for k in (3, 4, 5):
        for per_edge in (3, 4):
            cx = _complex(polygon_points([per_edge] * k, regular_polygon(k)))
            res.append(len(cx.maximal_simplices()) == k and homology(cx).betti[:2] == (1, 1))
    return all(res), "k simplices in a cycle, Betti (1,1)"


def example_circle():
    cx = _complex(sphere_four_points())
    betti = homology(cx).betti
    search = minimal_sphere_points()
    ok = cx.f_vector() == (4, 6, 4) and betti == (1, 0, 1) and search.minimal_points == 4
    return ok, f"f-vector {cx.f_vector()}, Betti {betti}, fewest points for a sphere: {search.minimal_points}"


def surface_check(name: str):
    def run():
        tri = surface_library(name)
        space = realize(tri)
        report = verify_realization(space, tri, strict=False)
        h = homology(build_complex(enumerate_eps_strings(space, 0)), INTEGER)
        ok = report.ok and h.betti == SURFACE_BETTI[name]
        groups = ", ".join(h.group(k) for k in range(len(h.betti)))
        return ok, f"{report.summary()}; H = [{groups}]"
    return run


def run_all() -> list[Check]:
    checks = [
        _timed("uniform metric", example_uniform),
        _timed("collinear points", example_collinear),
        _timed("two parallel lines", example_parallel_lines),
        _timed("convex polygon", example_polygon),
        _timed("circle-arc rectangle", example_circle),
    ]
    for name in ("sphere", "torus", "klein", "rp2", "disk"):
        checks.append(_timed(f"realize {name}", surface_check(name)))
    return checks

