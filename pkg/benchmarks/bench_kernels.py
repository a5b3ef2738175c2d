"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each row times one kernel call on the same input for both backends and
reports the speedup.  Results are checked for equality before timing.
"""
import argparse
import random
import time

from tightstrings import _pycore, kernels
from tightstrings.complex import boundary_columns
from tightstrings.construct import realize, surface_library
from tightstrings.gapspace import collinear_points, random_graph_metric
from tightstrings.persistence import build_filtration


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def _filtration_columns(space):
    filt = build_filtration(space)
    pos = {s: i for i, s in enumerate(filt.simplices)}
    cols = [[pos[s[:i] + s[i + 1:]] for i in range(len(s))] if len(s) > 1 else [] for s in filt.simplices]
    return cols, len(cols)


def cases():
    torus = realize(surface_library("torus"))
    D_torus = torus.numeric()[0]
    rnd = random_graph_metric(12, random.Random(1))
    D_rnd = rnd.numeric()[0]
    line = collinear_points(range(9)).numeric()[0]
    cols, rows = _filtration_columns(random_graph_metric(11, random.Random(2)))
    return [
        ("dfs_strings torus (42 pts, eps=0)", "dfs_strings", (D_torus, 0, 0.0, 42, True)),
        ("dfs_strings line (9 pts, all subsets)", "dfs_strings", (line, 0, 0.0, 9, True)),
        ("subset_births random (12 pts)", "subset_births", (D_rnd, 0.0, 12)),
        ("held_karp random (12 pts)", "held_karp", (D_rnd, 0.0)),
        (f"reduce_gf2 filtration ({rows} cols)", "reduce_gf2", (cols, rows)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if "compiled" not in kernels.available_backends():
        print("compiled kernels not built; nothing to compare")
        return 1
    core = kernels.get("compiled")
    print(f"{'kernel':<40} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for label, name, call_args in cases():
        py_args = tuple(a.tolist() if hasattr(a, "tolist") else a for a in call_args)
        slow_fn, fast_fn = getattr(_pycore, name), getattr(core, name)
        a, b = slow_fn(*py_args), fast_fn(*call_args)
        if name == "subset_births":
            a, b = list(a), list(b)
        assert a == b or name == "held_karp" and a[0] == b[0], f"{name}: backends disagree"
        t_py = _best(lambda: slow_fn(*py_args), args.repeat)
        t_c = _best(lambda: fast_fn(*call_args), args.repeat)
        print(f"{label:<40} {t_py:>9.4f}s {t_c:>9.4f}s {t_py / t_c:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
