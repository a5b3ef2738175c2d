"""String complexes and their combinatorial topology.

Nothing here builds a point-set realization; components, Euler
characteristic and homology are all computed from the simplex lists.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from . import kernels
from .gapspace import GapSpace, close, scalar_to_json, to_scalar, EXACT
from .strings import StringError, StringSet

MOD2 = "mod2"
INTEGER = "int"


class ComplexError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class StringComplex:
    """A face-closed simplicial complex on point indices.

    ``simplices[k]`` is the sorted list of ``k``-simplices (sorted vertex
    tuples); ``birth`` maps every simplex to its filtration value.
    ``generators`` is only set by :func:`endpoint_subcomplex`, where it keeps
    the simplices selected before downward closure.
    """

    simplices: dict[int, list[tuple[int, ...]]]
    birth: dict[tuple[int, ...], Any] = field(default_factory=dict)
    vertex_labels: tuple[str, ...] = ()
    generators: tuple[tuple[int, ...], ...] = ()

    @classmethod
    def from_simplices(cls, simplices: Iterable[Sequence[int]], birth=None, vertex_labels=(),
                       close_downward: bool = False, generators=()) -> "StringComplex":
        sset = {tuple(sorted(s)) for s in simplices}
        if close_downward:
            closed = set()
            for s in sset:
                for k in range(1, len(s) + 1):
                    closed.update(itertools.combinations(s, k))
            sset = closed
        by_dim: dict[int, list] = {}
        for s in sset:
            if not s:
                raise ComplexError("empty simplex")
            by_dim.setdefault(len(s) - 1, []).append(s)
        by_dim = {k: sorted(v) for k, v in sorted(by_dim.items())}
        birth = {s: birth[s] for s in sset} if birth is not None else {}
        return cls(by_dim, birth, tuple(vertex_labels), tuple(sorted(tuple(sorted(g)) for g in generators)))

    @property
    def dim(self) -> int:
        return max(self.simplices, default=-1)

    def __len__(self) -> int:
        return sum(len(v) for v in self.simplices.values())

    def __contains__(self, s) -> bool:
        s = tuple(sorted(s))
        return s in self.simplices.get(len(s) - 1, ())

    def __iter__(self):
        for k in sorted(self.simplices):
            yield from self.simplices[k]

    def count(self, k: int) -> int:
        return len(self.simplices.get(k, ()))

    def f_vector(self) -> tuple[int, ...]:
        return tuple(self.count(k) for k in range(self.dim + 1))

    def simplex_set(self) -> set[tuple[int, ...]]:
        return set(self)

    def vertices(self) -> list[int]:
        return [s[0] for s in self.simplices.get(0, ())]

    def is_face_closed(self) -> bool:
        all_s = self.simplex_set()
        return all(f in all_s for s in all_s if len(s) > 1 for f in itertools.combinations(s, len(s) - 1))

    def maximal_simplices(self) -> list[tuple[int, ...]]:
        all_s = self.simplex_set()
        cofaced = set()
        for s in all_s:
            if len(s) > 1:
                cofaced.update(itertools.combinations(s, len(s) - 1))
        return sorted(all_s - cofaced, key=lambda s: (-len(s), s))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "simplices": {str(k): [list(s) for s in v] for k, v in self.simplices.items()},
            "birth": {",".join(map(str, s)): scalar_to_json(b) for s, b in sorted(self.birth.items())},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, data: dict, mode: str = EXACT) -> "StringComplex":
        try:
            simplices = [tuple(s) for v in data["simplices"].values() for s in v]
            birth = {tuple(int(x) for x in k.split(",")): to_scalar(b, mode)
                     for k, b in data.get("birth", {}).items()}
        except (KeyError, AttributeError, ValueError) as exc:
            raise ComplexError(f"malformed complex JSON: {exc}") from exc
        return cls.from_simplices(simplices, birth or None)

    def to_face_list(self) -> str:
        """One simplex per line, vertex indices separated by spaces."""
        return "".join(" ".join(map(str, s)) + "\n" for s in self)

    @classmethod
    def from_face_list(cls, text: str) -> "StringComplex":
        simplices = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#")[0].strip()
            if not line:
                continue
            try:
                simplices.append(tuple(int(t) for t in line.split()))
            except ValueError as exc:
                raise ComplexError(f"face list line {lineno}: {exc}") from exc
        return cls.from_simplices(simplices, close_downward=True)


def build_complex(strings: StringSet, check_admissible: bool = True) -> StringComplex:
    """The simplicial complex whose simplices are the given (epsilon-)strings.

    Raises :class:`ComplexError` if ``strings`` is not downward closed with
    monotone births, which would point at an enumerator bug.
    """
    tol = strings.tolerance
    members = set(strings)
    for s in members:
        if len(s) == 1:
            continue
        b = strings[s].birth
        for f in itertools.combinations(s, len(s) - 1):
            if f not in members:
                raise ComplexError(f"string set not closed: {f} missing below {s}")
            fb = strings[f].birth
            if fb > b and not close(fb, b, tol):
                raise ComplexError(f"birth of face {f} ({fb}) exceeds birth of {s} ({b})")
    cx = StringComplex.from_simplices(members, {s: strings[s].birth for s in members}, strings.labels)
    if check_admissible:
        tri = {f for s in cx.simplices.get(2, ()) for k in (1, 2) for f in itertools.combinations(s, k)}
        low = cx.simplices.get(0, []) + cx.simplices.get(1, [])
        bad = [s for s in low if s not in tri]
        if bad:
            raise ComplexError(f"{bad[0]} is not a face of any 2-simplex")
    return cx


def euler_characteristic(cx: StringComplex) -> int:
    return sum((-1) ** k * len(v) for k, v in cx.simplices.items())


def connected_components(cx: StringComplex) -> tuple[int, dict[int, int]]:
    """Number of components of the 1-skeleton and a vertex -> component map.

    Components are numbered 0, 1, ... in order of their smallest vertex.
    """
    parent = {v: v for v in cx.vertices()}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in cx.simplices.get(1, ()):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = sorted({find(v) for v in parent})
    ids = {r: i for i, r in enumerate(roots)}
    return len(roots), {v: ids[find(v)] for v in sorted(parent)}


# ---------------------------------------------------------------------------
# homology


@dataclass(frozen=True)
class HomologyResult:
    coefficients: str
    betti: tuple[int, ...]
    ranks: tuple[int, ...] | None = None
    torsion: tuple[tuple[int, ...], ...] | None = None

    @property
    def euler(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))

    def group(self, k: int) -> str:
        """Human-readable integral group, e.g. ``Z^2 + Z/2``."""
        if self.ranks is None:
            b = self.betti[k] if k < len(self.betti) else 0
            return f"(Z/2)^{b}" if b else "0"
        parts = []
        r = self.ranks[k] if k < len(self.ranks) else 0
        if r:
            parts.append("Z" if r == 1 else f"Z^{r}")
        for t in (self.torsion[k] if k < len(self.torsion) else ()):
            parts.append(f"Z/{t}")
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        out = {"coefficients": self.coefficients, "betti_mod2": list(self.betti)}
        if self.ranks is not None:
            out["rank"] = list(self.ranks)
            out["torsion"] = [list(t) for t in self.torsion]
        return out

    def table(self) -> str:
        rows = ["degree  betti(Z/2)" + ("  H_k(Z)" if self.ranks is not None else "")]
        for k, b in enumerate(self.betti):
            row = f"{k:>6}  {b:>10}"
            if self.ranks is not None:
                row += f"  {self.group(k)}"
            rows.append(row)
        return "\n".join(rows)


def _index(cx: StringComplex) -> dict[int, dict[tuple, int]]:
    return {k: {s: i for i, s in enumerate(v)} for k, v in cx.simplices.items()}


def boundary_columns(cx: StringComplex, k: int) -> list[list[int]]:
    """Z/2 boundary of every k-simplex as row indices into the (k-1)-simplices."""
    if k < 1:
        return [[] for _ in cx.simplices.get(0, ())]
    rows = {s: i for i, s in enumerate(cx.simplices.get(k - 1, ()))}
    return [[rows[f] for f in itertools.combinations(s, k)] for s in cx.simplices.get(k, ())]


def boundary_matrix(cx: StringComplex, k: int) -> list[list[int]]:
    """Dense integer boundary matrix of dimension k (rows: (k-1)-simplices).

    The face that omits position ``i`` of the sorted vertex tuple gets sign
    ``(-1)**i``.
    """
    faces = cx.simplices.get(k - 1, [])
    cols = cx.simplices.get(k, [])
    rows = {s: i for i, s in enumerate(faces)}
    m = [[0] * len(cols) for _ in faces]
    for j, s in enumerate(cols):
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            m[rows[f]][j] = -1 if i % 2 else 1
    return m


def rank_mod2(columns: list[list[int]], n_rows: int, backend=None) -> int:
    lows = kernels.get(backend).reduce_gf2(columns, n_rows)
    return sum(1 for low in lows if low >= 0)


def smith_invariants(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors ``d1 | d2 | ...`` of an integer matrix.

    Elimination with the smallest-magnitude pivot keeps entries small on
    boundary matrices.
    """
    a = [list(map(int, r)) for r in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < m and t < n:
        piv = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (piv is None or abs(v) < piv[0]):
                    piv = (abs(v), i, j)
                    if piv[0] == 1:
                        break
            if piv is not None and piv[0] == 1:
                break
        if piv is None:
            break
        _, i, j = piv
        a[t], a[i] = a[i], a[t]
        if j != t:
            for row in a:
                row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            prow = a[t]
            for i in range(t + 1, m):
                v = a[i][t]
                if v:
                    q = v // p
                    row = a[i]
                    for j in range(t, n):
                        if prow[j]:
                            row[j] -= q * prow[j]
                    if row[t]:
                        dirty = True
            for j in range(t + 1, n):
                v = prow[j]
                if v:
                    q = v // p
                    for i in range(t, m):
                        if a[i][t]:
                            a[i][j] -= q * a[i][t]
                    if prow[j]:
                        dirty = True
            if dirty:
                # move the smallest remainder of row/column t onto the pivot
                best = (abs(a[t][t]), t, t)
                for i in range(t + 1, m):
                    if a[i][t] and abs(a[i][t]) < best[0]:
                        best = (abs(a[i][t]), i, t)
                for j in range(t + 1, n):
                    if prow[j] and abs(prow[j]) < best[0]:
                        best = (abs(prow[j]), t, j)
                _, i, j = best
                if i != t:
                    a[t], a[i] = a[i], a[t]
                if j != t:
                    for row in a:
                        row[t], row[j] = row[j], row[t]
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p), None)
            if bad is None:
                break
            # fold a non-divisible row into the pivot row and keep going
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def homology(cx: StringComplex, coefficients: str = MOD2, backend=None) -> HomologyResult:
    """Homology of the complex in degrees ``0 .. dim``.

    ``mod2``: Betti numbers over Z/2 from boundary ranks.  ``int``: adds the
    integral rank and torsion per degree from Smith normal forms; mod-2
    Betti numbers are reported as well.
    """
    if coefficients not in (MOD2, INTEGER):
        raise ComplexError(f"unknown coefficients {coefficients!r}")
    top = cx.dim
    if top < 0:
        return HomologyResult(coefficients, (), () if coefficients == INTEGER else None,
                              () if coefficients == INTEGER else None)
    counts = [cx.count(k) for k in range(top + 2)]
    rank2 = [0] * (top + 2)
    for k in range(1, top + 1):
        rank2[k] = rank_mod2(boundary_columns(cx, k), counts[k - 1], backend)
    betti = tuple(counts[k] - rank2[k] - rank2[k + 1] for k in range(top + 1))
    if coefficients == MOD2:
        return HomologyResult(MOD2, betti)
    inv = [[] for _ in range(top + 2)]
    for k in range(1, top + 1):
        inv[k] = smith_invariants(boundary_matrix(cx, k))
    ranks = tuple(counts[k] - len(inv[k]) - len(inv[k + 1]) for k in range(top + 1))
    torsion = tuple(tuple(d for d in inv[k + 1] if d > 1) for k in range(top + 1))
    return HomologyResult(INTEGER, betti, ranks, torsion)


# ---------------------------------------------------------------------------
# endpoint subcomplex


def endpoint_subcomplex(space: GapSpace, strings: StringSet, x: int, y: int) -> StringComplex:
    """Strings with endpoints ``{x, y}`` together with all their faces.

    Only genuine strings (birth 0) count.  A selected string's substrings
    usually have other endpoints, so the selection alone is not a complex;
    it is kept in ``generators`` and the downward closure is returned.
    """
    if not space.metric:
        raise StringError("endpoint subcomplex needs a metric space")
    if x == y:
        raise StringError("endpoints must be distinct")
    for p in (x, y):
        if not 0 <= p < space.n:
            raise StringError(f"index {p} out of range for {space.n} points")
    d, tol = space.gaps, space.tolerance
    want = tuple(sorted((x, y)))
    gens = []
    for s, rec in strings.items():
        if len(s) < 2 or x not in s or y not in s or not close(rec.birth, 0, tol):
            continue
        # in a metric string the endpoints are the unique farthest pair
        far = max(itertools.combinations(s, 2), key=lambda p: d[p[0]][p[1]])
        if far == want:
            gens.append(s)
    closure = set()
    for s in gens:
        for k in range(1, len(s) + 1):
            closure.update(itertools.combinations(s, k))
    return StringComplex.from_simplices(closure, {s: strings[s].birth for s in closure},
                                        strings.labels, generators=gens)
