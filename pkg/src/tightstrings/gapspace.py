"""Finite gap spaces: data model, scalar handling, validation and generators.

A gap space is a finite set with a real-valued function ``d`` on ordered
pairs that only has to satisfy the triangle inequality.  Metric spaces are
the symmetric, nonnegative, identity-of-indiscernibles special case.

Two scalar modes are supported and never mixed inside one space:

``exact``
    Every gap is a :class:`fractions.Fraction`.  Comparisons are exact.
``float``
    Every gap is a Python ``float``; two values ``a``, ``b`` compare equal
    iff ``|a - b| <= tol * max(1, |a|, |b|)``.
"""
from __future__ import annotations

import csv
import io
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Any, Iterable, Sequence

import numpy as np

EXACT = "exact"
FLOAT = "float"
DEFAULT_TOLERANCE = 1e-9

# int64 headroom: sums of up to n gaps plus an epsilon must stay representable
_INT_LIMIT = 2**62


class GapSpaceError(ValueError):
    """Raised for malformed or inconsistent gap-space input."""


class TriangleInequalityError(GapSpaceError):
    """The gaps are well formed but violate the triangle inequality."""

    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


# ---------------------------------------------------------------------------
# scalars


def to_scalar(value: Any, mode: str) -> Fraction | float:
    """Coerce ``value`` to the scalar type of ``mode``.

    Exact mode accepts ints, Fractions, and strings such as ``"3/5"`` or
    ``"0.25"``; floats are converted through their shortest repr so that
    ``0.1`` becomes ``1/10``.
    """
    if mode == EXACT:
        if isinstance(value, bool):
            raise GapSpaceError(f"boolean is not a scalar: {value!r}")
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, float):
            if not math.isfinite(value):
                raise GapSpaceError(f"non-finite gap {value!r}")
            return Fraction(repr(value))
        if isinstance(value, str):
            try:
                return Fraction(value.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise GapSpaceError(f"cannot parse exact scalar {value!r}") from exc
        raise GapSpaceError(f"cannot use {type(value).__name__} as an exact scalar")
    if mode == FLOAT:
        try:
            out = float(Fraction(value.strip())) if isinstance(value, str) else float(value)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise GapSpaceError(f"cannot parse float scalar {value!r}") from exc
        if not math.isfinite(out):
            raise GapSpaceError(f"non-finite gap {value!r}")
        return out
    raise GapSpaceError(f"unknown scalar mode {mode!r}")


def scalar_to_json(value: Fraction | float) -> str | float | int:
    """Exact scalars serialize as ``"p/q"`` (or ``"p"``); floats stay floats."""
    if isinstance(value, Fraction):
        return str(value)
    return value


def infer_mode(values: Iterable[Any]) -> str:
    """``float`` if any value is a float, else ``exact``.

    Raises if Fractions and floats are mixed, since that would silently
    change the equality semantics of part of the data.
    """
    has_float = has_fraction = False
    for v in values:
        if isinstance(v, float):
            has_float = True
        elif isinstance(v, Fraction):
            has_fraction = True
    if has_float and has_fraction:
        raise GapSpaceError("mixed exact and float scalars in one gap space")
    return FLOAT if has_float else EXACT


def leq(a, b, tol: float = 0.0) -> bool:
    """``a <= b`` with the relative tolerance used in float mode."""
    if tol == 0:
        return a <= b
    return a - b <= tol * max(1.0, abs(a), abs(b))


def close(a, b, tol: float = 0.0) -> bool:
    if tol == 0:
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: list[tuple[int, int, int, Any, Any]]

    def __str__(self) -> str:
        if self.ok:
            return "ok: triangle inequality holds for all ordered triples"
        lines = [f"{len(self.violations)} triangle inequality violation(s):"]
        for x, y, z, lhs, rhs in self.violations:
            lines.append(f"  d({x},{y}) + d({y},{z}) = {lhs} < d({x},{z}) = {rhs}")
        return "\n".join(lines)


def _check_square(matrix: Sequence[Sequence[Any]]) -> int:
    n = len(matrix)
    if n < 1:
        raise GapSpaceError("gap matrix must have at least one point")
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise GapSpaceError(f"gap matrix is not square: row {i} has {len(row)} entries, expected {n}")
    return n


def validate(matrix: Sequence[Sequence[Any]], tolerance: float = 0.0) -> ValidationReport:
    """Check the triangle inequality ``d(x,y) + d(y,z) >= d(x,z)`` on every
    ordered triple, repeats included.

    In exact mode (``tolerance == 0`` and rational entries) the check is
    exact.  Every violated triple is listed; for a symmetric matrix
    ``(x, y, z)`` and ``(z, y, x)`` are the same inequality and only the one
    with ``x <= z`` is reported.
    """
    if tolerance < 0:
        raise GapSpaceError("tolerance must be nonnegative")
    n = _check_square(matrix)
    mode = infer_mode(v for row in matrix for v in row)
    gaps = [[to_scalar(v, mode) for v in row] for row in matrix]
    tol = tolerance if mode == FLOAT else 0.0

    arr, scale = _numeric_array(gaps, mode)
    symmetric = all(close(gaps[i][j], gaps[j][i], tol) for i in range(n) for j in range(i))
    violations = []
    if arr is not None:
        # lhs[x, y, z] = d(x,y) + d(y,z); rhs[x, z] = d(x,z)
        lhs = arr[:, :, None] + arr[None, :, :]
        rhs = np.broadcast_to(arr[:, None, :], lhs.shape)
        if tol:
            bound = tol * np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
            bad = rhs - lhs > bound
        else:
            bad = lhs < rhs
        for x, y, z in zip(*np.nonzero(bad)):
            x, y, z = int(x), int(y), int(z)
            if symmetric and x > z:
                continue
            violations.append((x, y, z, gaps[x][y] + gaps[y][z], gaps[x][z]))
    else:
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    lhs_v = gaps[x][y] + gaps[y][z]
                    if lhs_v < gaps[x][z] and not (symmetric and x > z):
                        violations.append((x, y, z, lhs_v, gaps[x][z]))
    return ValidationReport(ok=not violations, violations=violations)


def _numeric_array(gaps, mode, extra=()):
    """Machine-number copy of ``gaps`` plus the integer scale used.

    Exact gaps are multiplied by the lcm of all denominators (including
    those of ``extra`` values) and returned as int64.  Returns ``(None, L)``
    when the scaled values would not fit.
    """
    n = len(gaps)
    if mode == FLOAT:
        return np.array(gaps, dtype=np.float64), 1
    dens = [v.denominator for row in gaps for v in row] + [Fraction(e).denominator for e in extra]
    scale = reduce(math.lcm, dens, 1)
    ints = [[int(v * scale) for v in row] for row in gaps]
    big = max((abs(v) for row in ints for v in row), default=0)
    big = max([big] + [abs(int(Fraction(e) * scale)) for e in extra])
    if big * (n + 2) >= _INT_LIMIT:
        return None, scale
    return np.array(ints, dtype=np.int64).reshape(n, n), scale


# ---------------------------------------------------------------------------
# the space


@dataclass(frozen=True, eq=False)
class GapSpace:
    """An immutable finite gap space.

    Build instances with :meth:`from_matrix`; it coerces scalars, checks the
    triangle inequality, and derives the ``symmetric``/``metric`` flags.
    """

    gaps: tuple[tuple[Any, ...], ...]
    labels: tuple[str, ...]
    mode: str = EXACT
    tolerance: float = 0.0
    symmetric: bool = False
    metric: bool = False
    provenance: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_matrix(
        cls,
        matrix: Sequence[Sequence[Any]],
        labels: Sequence[Any] | None = None,
        mode: str | None = None,
        tolerance: float | None = None,
        *,
        check: bool = True,
        provenance: dict | None = None,
    ) -> "GapSpace":
        n = _check_square(matrix)
        inferred = infer_mode(v for row in matrix for v in row)
        if mode is None:
            mode = inferred
        if tolerance is None:
            tolerance = DEFAULT_TOLERANCE if mode == FLOAT else 0.0
        if tolerance < 0:
            raise GapSpaceError("tolerance must be nonnegative")
        if mode == EXACT:
            tolerance = 0.0
        gaps = tuple(tuple(to_scalar(v, mode) for v in row) for row in matrix)
        if labels is None:
            labels = [str(i) for i in range(n)]
        labels = tuple(str(x) for x in labels)
        if len(labels) != n:
            raise GapSpaceError(f"{len(labels)} labels for {n} points")
        prov = dict(provenance or {})
        if check:
            report = validate(gaps, tolerance)
            if not report.ok:
                raise TriangleInequalityError(report)
        prov["validated"] = "checked" if check else "by construction"
        symmetric = all(close(gaps[i][j], gaps[j][i], tolerance) for i in range(n) for j in range(i))
        metric = symmetric and all(
            (i == j and close(gaps[i][j], 0, tolerance))
            or (i != j and gaps[i][j] > 0 and not close(gaps[i][j], 0, tolerance))
            for i in range(n) for j in range(n)
        )
        return cls(gaps, labels, mode, tolerance, symmetric, metric, prov)

    @property
    def n(self) -> int:
        return len(self.gaps)

    def d(self, x: int, y: int):
        return self.gaps[x][y]

    def numeric(self, extra: Sequence[Any] = ()):
        """Return ``(array, scale)`` for the compiled kernels.

        ``array`` is int64 (exact mode, gaps times ``scale``) or float64.
        ``array`` is ``None`` when exact values overflow int64; callers then
        use the generic pure-Python path on :attr:`gaps`.
        """
        key = ("numeric", tuple(Fraction(e).denominator for e in extra) if self.mode == EXACT else ())
        if key not in self._cache:
            self._cache[key] = _numeric_array(self.gaps, self.mode, extra)
        arr, scale = self._cache[key]
        if arr is not None and self.mode == EXACT and extra:
            limit = _INT_LIMIT // (self.n + 2)
            if any(abs(Fraction(e) * scale) >= limit for e in extra):
                return None, scale
        return arr, scale

    def to_json(self) -> dict:
        out = {
            "labels": list(self.labels),
            "gaps": [[scalar_to_json(v) for v in row] for row in self.gaps],
            "mode": self.mode,
        }
        if self.mode == FLOAT:
            out["tolerance"] = self.tolerance
        return out

    @classmethod
    def from_json(cls, data: dict) -> "GapSpace":
        if not isinstance(data, dict) or "gaps" not in data:
            raise GapSpaceError("JSON gap space needs a 'gaps' field")
        mode = data.get("mode", EXACT)
        if mode not in (EXACT, FLOAT):
            raise GapSpaceError(f"field 'mode': expected 'exact' or 'float', got {mode!r}")
        gaps = data["gaps"]
        if not isinstance(gaps, list) or not all(isinstance(r, list) for r in gaps):
            raise GapSpaceError("field 'gaps': expected a list of rows")
        rows = []
        for i, row in enumerate(gaps):
            try:
                rows.append([to_scalar(v, mode) for v in row])
            except GapSpaceError as exc:
                raise GapSpaceError(f"field 'gaps' row {i}: {exc}") from exc
        return cls.from_matrix(rows, data.get("labels"), mode, data.get("tolerance"))

    def __repr__(self) -> str:
        flags = "metric" if self.metric else ("symmetric" if self.symmetric else "asymmetric")
        return f"GapSpace(n={self.n}, mode={self.mode}, {flags})"


def is_metric(space: GapSpace) -> bool:
    """True iff the space is symmetric, nonnegative and zero exactly on the diagonal."""
    return space.metric


def read_space(text: str, fmt: str = "json", mode: str = EXACT, tolerance: float | None = None) -> GapSpace:
    """Parse a gap space from JSON or from a CSV square matrix with a label header."""
    if fmt == "json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GapSpaceError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        if tolerance is not None and isinstance(data, dict):
            data = {**data, "tolerance": tolerance}
        return GapSpace.from_json(data)
    if fmt == "csv":
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
        if not rows:
            raise GapSpaceError("empty CSV input")
        labels, body = rows[0], rows[1:]
        matrix = []
        for lineno, row in enumerate(body, start=2):
            try:
                matrix.append([to_scalar(v, mode) for v in row])
            except GapSpaceError as exc:
                raise GapSpaceError(f"CSV line {lineno}: {exc}") from exc
        return GapSpace.from_matrix(matrix, labels, mode, tolerance)
    raise GapSpaceError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# generators


def uniform_metric(n: int) -> GapSpace:
    """The discrete metric: every two distinct points at distance 1."""
    if n < 1:
        raise GapSpaceError("uniform_metric needs n >= 1")
    one, zero = Fraction(1), Fraction(0)
    m = [[zero if i == j else one for j in range(n)] for i in range(n)]
    return GapSpace.from_matrix(m, mode=EXACT, check=False, provenance={"generator": "uniform", "n": n})


def collinear_points(values: Sequence[Any]) -> GapSpace:
    """Points of the real line with ``d = |a - b|``."""
    mode = infer_mode(values)
    vals = [to_scalar(v, mode) for v in values]
    if len(set(vals)) != len(vals):
        raise GapSpaceError("collinear_points: values must be pairwise distinct")
    if not vals:
        raise GapSpaceError("collinear_points: need at least one value")
    m = [[abs(a - b) for b in vals] for a in vals]
    return GapSpace.from_matrix(m, [str(v) for v in vals], mode, check=False,
                                provenance={"generator": "collinear"})


def euclidean_points(points: Sequence[tuple[float, float]], labels=None, tolerance=DEFAULT_TOLERANCE,
                     provenance=None) -> GapSpace:
    pts = np.asarray(points, dtype=np.float64)
    diff = pts[:, None, :] - pts[None, :, :]
    m = np.sqrt((diff ** 2).sum(-1)).tolist()
    return GapSpace.from_matrix(m, labels, FLOAT, tolerance, provenance=provenance)


def two_parallel_lines(m: int, n: int, separation=1, spacing=1, tolerance: float = DEFAULT_TOLERANCE) -> GapSpace:
    """``m`` equally spaced points on ``y = 0`` and ``n`` on ``y = separation``."""
    if m < 3 or n < 3:
        raise GapSpaceError("two_parallel_lines needs m, n >= 3")
    separation, spacing = float(separation), float(spacing)
    if separation <= 0 or spacing <= 0:
        raise GapSpaceError("separation and spacing must be positive")
    pts = [(i * spacing, 0.0) for i in range(m)] + [(j * spacing, separation) for j in range(n)]
    labels = [f"a{i}" for i in range(m)] + [f"b{j}" for j in range(n)]
    return euclidean_points(pts, labels, tolerance, {"generator": "parallel-lines", "m": m, "n": n})


def polygon_points(edge_point_counts: Sequence[int], vertices: Sequence[tuple[float, float]],
                   tolerance: float = DEFAULT_TOLERANCE) -> GapSpace:
    """Vertices of a convex polygon plus equally spaced points on each edge.

    ``edge_point_counts[i]`` counts the points on edge ``i`` (from vertex
    ``i`` to vertex ``i+1``) including both corners, so it must be >= 3.
    """
    k = len(vertices)
    if k < 3:
        raise GapSpaceError("polygon needs at least 3 vertices")
    if len(edge_point_counts) != k:
        raise GapSpaceError(f"{len(edge_point_counts)} edge counts for {k} edges")
    if any(c < 3 for c in edge_point_counts):
        raise GapSpaceError("each edge needs its two corners plus at least one interior point")
    vs = np.asarray(vertices, dtype=np.float64)
    crosses = []
    for i in range(k):
        a, b, c = vs[i], vs[(i + 1) % k], vs[(i + 2) % k]
        crosses.append((b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]))
    scale = max(1.0, float(np.abs(vs).max()) ** 2)
    if not (all(c > 1e-12 * scale for c in crosses) or all(c < -1e-12 * scale for c in crosses)):
        raise GapSpaceError("vertices do not form a strictly convex polygon")
    pts, labels = [], []
    for i in range(k):
        a, b = vs[i], vs[(i + 1) % k]
        c = edge_point_counts[i]
        pts.append(tuple(a))
        labels.append(f"v{i}")
        for t in range(1, c - 1):
            pts.append(tuple(a + (b - a) * (t / (c - 1))))
            labels.append(f"e{i}.{t}")
    return euclidean_points(pts, labels, tolerance, {"generator": "polygon", "edge_point_counts": list(edge_point_counts)})


def regular_polygon(k: int, radius: float = 1.0) -> list[tuple[float, float]]:
    return [(radius * math.cos(2 * math.pi * i / k), radius * math.sin(2 * math.pi * i / k)) for i in range(k)]


def circle_arc_metric(positions: Sequence[Any], circumference: Any) -> GapSpace:
    """Shortest-arc distance between points placed on a circle."""
    c = to_scalar(circumference, EXACT)
    if c <= 0:
        raise GapSpaceError("circumference must be positive")
    pos = [to_scalar(p, EXACT) % c for p in positions]
    if len(set(pos)) != len(pos):
        raise GapSpaceError("circle_arc_metric: positions must be distinct modulo the circumference")
    m = [[min(abs(a - b), c - abs(a - b)) for b in pos] for a in pos]
    return GapSpace.from_matrix(m, [f"x{i + 1}" for i in range(len(pos))], EXACT, check=False,
                                provenance={"generator": "circle-arc"})


def digraph_gaps(nodes: int, arcs: Iterable[tuple[int, int, Any]], labels=None) -> GapSpace:
    """All-pairs shortest path lengths of a strongly connected weighted digraph.

    One-way roads make the result asymmetric in general.  Floyd-Warshall is
    run directly on the scalars so exact inputs stay exact.
    """
    if nodes < 1:
        raise GapSpaceError("digraph needs at least one node")
    arcs = list(arcs)
    mode = infer_mode(a[2] for a in arcs)
    inf = None
    dist: list[list[Any]] = [[inf] * nodes for _ in range(nodes)]
    zero = to_scalar(0, mode)
    for i in range(nodes):
        dist[i][i] = zero
    for a, b, w in arcs:
        if not (0 <= a < nodes and 0 <= b < nodes):
            raise GapSpaceError(f"arc ({a}, {b}) references a missing node")
        w = to_scalar(w, mode)
        if w < 0:
            raise GapSpaceError(f"arc ({a}, {b}) has negative length {w}")
        if a != b and (dist[a][b] is None or w < dist[a][b]):
            dist[a][b] = w
    for k in range(nodes):
        dk = dist[k]
        for i in range(nodes):
            dik = dist[i][k]
            if dik is None:
                continue
            di = dist[i]
            for j in range(nodes):
                if dk[j] is not None and (di[j] is None or dik + dk[j] < di[j]):
                    di[j] = dik + dk[j]
    missing = [(i, j) for i in range(nodes) for j in range(nodes) if dist[i][j] is None]
    if missing:
        i, j = missing[0]
        raise GapSpaceError(f"digraph is not strongly connected: no path from {i} to {j}")
    return GapSpace.from_matrix(dist, labels, mode, check=False, provenance={"generator": "digraph"})


def random_graph_metric(n: int, rng: random.Random, max_weight: int = 3, p: float = 0.5) -> GapSpace:
    """Shortest-path metric of a random connected graph with integer weights.

    Graph metrics have many tight triangles, so they make useful test
    spaces; a random spanning tree guarantees connectivity.
    """
    arcs = []
    for i in range(1, n):
        j = rng.randrange(i)
        w = rng.randint(1, max_weight)
        arcs += [(i, j, w), (j, i, w)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                w = rng.randint(1, max_weight)
                arcs += [(i, j, w), (j, i, w)]
    space = digraph_gaps(n, [(a, b, Fraction(w)) for a, b, w in arcs])
    return GapSpace.from_matrix(space.gaps, mode=EXACT, check=False, provenance={"generator": "random-metric"})


def random_digraph_gaps(n: int, rng: random.Random, max_weight: int = 3, p: float = 0.4) -> GapSpace:
    """Gap space of a random strongly connected digraph (a directed
    Hamiltonian cycle plus random one-way arcs)."""
    perm = list(range(n))
    rng.shuffle(perm)
    arcs = [(perm[i], perm[(i + 1) % n], rng.randint(1, max_weight)) for i in range(n)] if n > 1 else []
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < p:
                arcs.append((i, j, rng.randint(1, max_weight)))
    return digraph_gaps(n, [(a, b, Fraction(w)) for a, b, w in arcs])
