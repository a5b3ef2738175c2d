"""Command-line interface.

Machine-readable results (JSON) go to ``--output`` when given, otherwise to
stdout; human-readable summaries go to stdout, or to stderr when stdout
carries the JSON.  Exit codes: 0 ok, 1 domain error, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import tempfile
from fractions import Fraction

from . import __version__
from .complex import (INTEGER, MOD2, ComplexError, StringComplex, build_complex, connected_components,
                      endpoint_subcomplex, euler_characteristic, homology)
from .construct import (SURFACES, RealizationError, RealizationParams, Triangulation2D, TriangulationError,
                        load_triangulation, realize, sphere_four_points, surface_library, verify_realization)
from .gapspace import (EXACT, FLOAT, GapSpace, GapSpaceError, TriangleInequalityError, circle_arc_metric,
                       collinear_points, digraph_gaps, polygon_points, random_digraph_gaps,
                       random_graph_metric, read_space, regular_polygon, to_scalar, two_parallel_lines,
                       uniform_metric, validate)
from .persistence import FiltrationError, barcode, build_filtration
from .strings import StringError, StringSet, enumerate_eps_strings, oracle_enumerate

log = logging.getLogger("tightstrings")


class InputError(Exception):
    """Malformed input; exit code 2."""


# ---------------------------------------------------------------------------
# io helpers


def _read_text(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def _fmt(path: str, explicit: str | None) -> str:
    if explicit:
        return explicit
    ext = os.path.splitext(path)[1].lower()
    return {".csv": "csv", ".off": "off"}.get(ext, "json")


def _write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, payload, summary: str | None = None) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=1) + "\n"
    if args.output:
        _write_atomic(args.output, text)
        if summary:
            print(summary)
    else:
        if summary:
            print(summary, file=sys.stderr)
        sys.stdout.write(text)


def _load_json(path: str):
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _load_space(args) -> GapSpace:
    if not args.input:
        raise InputError("--input is required")
    fmt = _fmt(args.input, getattr(args, "format", None))
    try:
        if fmt == "csv":
            return read_space(_read_text(args.input), "csv", args.mode or EXACT, args.tolerance)
        data = _load_json(args.input)
        if isinstance(data, dict) and args.mode:
            data = {**data, "mode": args.mode}
        if isinstance(data, dict) and args.tolerance is not None:
            data = {**data, "tolerance": args.tolerance}
        return GapSpace.from_json(data)
    except TriangleInequalityError:
        raise
    except GapSpaceError as exc:
        raise InputError(f"{args.input}: {exc}") from exc


def _eps(args, mode: str):
    if args.epsilon is None:
        return to_scalar(0, mode)
    try:
        e = to_scalar(args.epsilon, mode)
    except GapSpaceError as exc:
        raise InputError(f"--epsilon: {exc}") from exc
    if e < 0:
        raise InputError("--epsilon must be nonnegative")
    return e


def _load_strings_or_space(args):
    """A StringSet from a strings file, or computed from a gap-space file."""
    data = _load_json(args.input) if _fmt(args.input, getattr(args, "format", None)) == "json" else None
    if isinstance(data, list):
        try:
            return StringSet.from_json(data, args.mode or EXACT, tolerance=args.tolerance or 0.0)
        except GapSpaceError as exc:
            raise InputError(f"{args.input}: {exc}") from exc
    space = _load_space(args)
    return enumerate_eps_strings(space, _eps(args, space.mode), args.max_size)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    fmt = _fmt(args.input, args.format)
    text = _read_text(args.input)
    try:
        if fmt == "csv":
            import csv
            import io
            rows = [r for r in csv.reader(io.StringIO(text)) if r][1:]
            mode = args.mode or EXACT
            matrix = [[to_scalar(v, mode) for v in r] for r in rows]
        else:
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise InputError(f"{args.input}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
            if not isinstance(data, dict) or "gaps" not in data:
                raise InputError(f"{args.input}: expected an object with a 'gaps' field")
            mode = args.mode or data.get("mode", EXACT)
            matrix = [[to_scalar(v, mode) for v in r] for r in data["gaps"]]
        tol = args.tolerance if args.tolerance is not None else (1e-9 if mode == FLOAT else 0.0)
        report = validate(matrix, tol)
    except GapSpaceError as exc:
        raise InputError(f"{args.input}: {exc}") from exc
    payload = {"ok": report.ok, "violations": [
        {"x": x, "y": y, "z": z, "lhs": str(lhs), "rhs": str(rhs)} for x, y, z, lhs, rhs in report.violations]}
    if args.output:
        _write_atomic(args.output, json.dumps(payload, indent=1) + "\n")
    print(report)
    return 0 if report.ok else 1


def _space_from_generator(args) -> GapSpace:
    g = args.generator
    if g == "uniform":
        return uniform_metric(args.n)
    if g == "collinear":
        return collinear_points([to_scalar(v, EXACT) for v in args.values])
    if g == "parallel-lines":
        return two_parallel_lines(args.m, args.n, args.separation, args.spacing,
                                  args.tolerance if args.tolerance is not None else 1e-9)
    if g == "polygon":
        if args.vertices:
            verts = [tuple(float(c) for c in v.split(",")) for v in args.vertices]
        else:
            verts = regular_polygon(args.sides)
        counts = args.edge_points or [3] * len(verts)
        if len(counts) == 1:
            counts = counts * len(verts)
        return polygon_points(counts, verts)
    if g == "circle-arc":
        return circle_arc_metric(args.positions, args.circumference)
    if g == "digraph":
        arcs = []
        for a in args.arcs:
            try:
                ends, length = a.split(":")
                src, dst = ends.split(">")
                arcs.append((int(src), int(dst), to_scalar(length, EXACT)))
            except ValueError as exc:
                raise InputError(f"--arcs entry {a!r}: expected FROM>TO:LENGTH") from exc
        return digraph_gaps(args.nodes, arcs)
    if g == "sphere4":
        return sphere_four_points()
    if g == "random-metric":
        return random_graph_metric(args.n, random.Random(args.seed))
    if g == "random-digraph":
        return random_digraph_gaps(args.n, random.Random(args.seed))
    raise InputError(f"unknown generator {g!r}")


def cmd_generate(args) -> int:
    space = _space_from_generator(args)
    _emit(args, space.to_json(), f"generated {args.generator}: {space!r}")
    return 0


def cmd_surface(args) -> int:
    tri = surface_library(args.name)
    v, e, t = tri.f_vector()
    _emit(args, tri.to_json(), f"{args.name}: {v} vertices, {e} edges, {t} triangles")
    return 0


def cmd_strings(args) -> int:
    space = _load_space(args)
    eps = _eps(args, space.mode)
    ss = enumerate_eps_strings(space, eps, args.max_size)
    if args.check_oracle:
        oracle = oracle_enumerate(space, eps, args.oracle_limit)
        if set(oracle) != set(ss):
            raise StringError("enumerator disagrees with the brute-force oracle")
    sizes = {}
    for s in ss:
        sizes[len(s)] = sizes.get(len(s), 0) + 1
    summary = f"{len(ss)} epsilon-strings at epsilon={eps}; by size: " + (
        ", ".join(f"{k}:{v}" for k, v in sorted(sizes.items())) or "none")
    _emit(args, ss.to_json(), summary)
    return 0


def _complex_summary(cx: StringComplex) -> str:
    count, _ = connected_components(cx)
    return (f"f-vector {list(cx.f_vector())}, Euler characteristic {euler_characteristic(cx)}, "
            f"{count} component(s)")


def cmd_complex(args) -> int:
    cx = build_complex(_load_strings_or_space(args))
    payload = cx.to_face_list() if args.face_list else cx.to_json()
    _emit(args, payload, _complex_summary(cx))
    return 0


def cmd_homology(args) -> int:
    data = _load_json(args.input) if _fmt(args.input, args.format) == "json" else None
    if isinstance(data, dict) and "simplices" in data:
        try:
            cx = StringComplex.from_json(data, args.mode or EXACT)
        except ComplexError as exc:
            raise InputError(f"{args.input}: {exc}") from exc
    else:
        cx = build_complex(_load_strings_or_space(args))
    h = homology(cx, args.coefficients)
    _emit(args, h.to_json(), h.table())
    return 0


def cmd_barcode(args) -> int:
    space = _load_space(args)
    max_dim = args.max_dim
    if max_dim is None and space.n > 12:
        max_dim = 3
        log.warning("capping --max-dim at 3 for %d points", space.n)
    bc = barcode(build_filtration(space, max_dim))
    payload = bc.to_text() if args.text else bc.to_json()
    summary = "\n".join(
        f"H{iv.degree}: [{iv.birth}, {'inf' if iv.death is None else iv.death})" for iv in bc.intervals)
    _emit(args, payload, (summary + "\n" if summary else "") + f"({bc.zero_length} zero-length intervals suppressed)")
    return 0


def cmd_realize(args) -> int:
    if args.surface:
        tri = surface_library(args.surface)
    elif args.input:
        try:
            tri = load_triangulation(_read_text(args.input), _fmt(args.input, args.format), args.infer_edges)
        except TriangulationError as exc:
            raise InputError(f"{args.input}: {exc}") from exc
    else:
        raise InputError("realize needs --input or --surface")
    params = RealizationParams(args.k, args.u, args.v)
    space = realize(tri, params)
    report = verify_realization(space, tri, strict=False)
    _emit(args, space.to_json(), report.summary())
    return 0 if report.ok else 1


def cmd_endpoint(args) -> int:
    space = _load_space(args)
    ss = enumerate_eps_strings(space, 0)
    x, y = _point(space, args.x), _point(space, args.y)
    cx = endpoint_subcomplex(space, ss, x, y)
    h = homology(cx, args.coefficients)
    payload = {"complex": cx.to_json(), "generators": [list(g) for g in cx.generators], "homology": h.to_json()}
    _emit(args, payload, f"endpoints {{{space.labels[x]}, {space.labels[y]}}}: "
                         f"{len(cx.generators)} string(s); {_complex_summary(cx) if len(cx) else 'empty'}\n{h.table()}")
    return 0


def _point(space: GapSpace, ref: str) -> int:
    if ref in space.labels:
        return space.labels.index(ref)
    try:
        return int(ref)
    except ValueError:
        raise InputError(f"unknown point {ref!r}") from None


def cmd_examples(args) -> int:
    from .worked_examples import run_all

    checks = run_all()
    lines = [c.line() for c in checks]
    passed = sum(c.ok for c in checks)
    lines.append(f"{passed}/{len(checks)} checks passed")
    if args.output:
        _write_atomic(args.output, json.dumps(
            [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks], indent=1) + "\n")
    print("\n".join(lines))
    return 0 if passed == len(checks) else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", help="input file ('-' for stdin)")
    common.add_argument("--output", "-o", help="output file (written atomically)")
    common.add_argument("--format", choices=["json", "csv", "off"], help="input format (default: from extension)")
    common.add_argument("--mode", choices=[EXACT, FLOAT], help="scalar mode override")
    common.add_argument("--tolerance", type=float, help="relative comparison tolerance (float mode)")
    common.add_argument("--epsilon", "-e", help="epsilon, e.g. 0, 1/2, 0.25")
    common.add_argument("--max-dim", type=int, help="largest simplex dimension in filtrations")
    common.add_argument("--max-size", type=int, help="largest string size to enumerate")
    common.add_argument("--coefficients", choices=[MOD2, INTEGER], default=MOD2)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized generators")
    common.add_argument("--oracle-limit", type=int, default=8)
    common.add_argument("--verbose", "-v", action="store_true")

    p = argparse.ArgumentParser(prog="tightstrings", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--paper-examples", action="store_true", help="same as the 'examples' subcommand")
    sub = p.add_subparsers(dest="command")

    s = sub.add_parser("validate", parents=[common], help="check the triangle inequality")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("generate", parents=[common], help="write a generated gap space")
    s.add_argument("generator", choices=["uniform", "collinear", "parallel-lines", "polygon", "circle-arc",
                                         "digraph", "sphere4", "random-metric", "random-digraph"])
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--m", type=int, default=3)
    s.add_argument("--values", nargs="+", default=["0", "1", "2"])
    s.add_argument("--separation", type=float, default=1.0)
    s.add_argument("--spacing", type=float, default=1.0)
    s.add_argument("--sides", type=int, default=3)
    s.add_argument("--vertices", nargs="+", help="polygon corners as x,y")
    s.add_argument("--edge-points", type=int, nargs="+", help="points per edge including corners")
    s.add_argument("--positions", nargs="+", default=["0", "2", "6", "8"])
    s.add_argument("--circumference", default="12")
    s.add_argument("--nodes", type=int, default=3)
    s.add_argument("--arcs", nargs="+", default=["0>1:1", "1>2:1", "2>0:1"], help="FROM>TO:LENGTH")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("surface", parents=[common], help="write a library triangulation")
    s.add_argument("name", choices=SURFACES)
    s.set_defaults(func=cmd_surface)

    s = sub.add_parser("strings", parents=[common], help="enumerate epsilon-strings")
    s.add_argument("--check-oracle", action="store_true", help="cross-check against brute force")
    s.set_defaults(func=cmd_strings)

    s = sub.add_parser("complex", parents=[common], help="build the string complex")
    s.add_argument("--face-list", action="store_true", help="write one simplex per line instead of JSON")
    s.set_defaults(func=cmd_complex)

    s = sub.add_parser("homology", parents=[common], help="homology of the string complex")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("barcode", parents=[common], help="persistence barcode of the epsilon-filtration")
    s.add_argument("--text", action="store_true", help="plain 'degree birth death' lines instead of JSON")
    s.set_defaults(func=cmd_barcode)

    s = sub.add_parser("realize", parents=[common], help="metric space realizing a 2-dim triangulation")
    s.add_argument("--surface", choices=SURFACES)
    s.add_argument("--infer-edges", action="store_true")
    s.add_argument("--k", default="1")
    s.add_argument("--u", default="3/5")
    s.add_argument("--v", default="7/10")
    s.set_defaults(func=cmd_realize)

    s = sub.add_parser("endpoint", parents=[common], help="subcomplex of strings with given endpoints")
    s.add_argument("--x", required=True, help="point label or index")
    s.add_argument("--y", required=True, help="point label or index")
    s.set_defaults(func=cmd_endpoint)

    for name in ("examples", "paper-examples"):
        s = sub.add_parser(name, parents=[common], help="regenerate and check the worked examples")
        s.set_defaults(func=cmd_examples)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "paper_examples", False) and args.command is None:
        args = parser.parse_args(["examples"])
    if args.command is None:
        parser.print_help()
        return 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except TriangleInequalityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (TriangulationError, GapSpaceError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (StringError, ComplexError, FiltrationError, RealizationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
