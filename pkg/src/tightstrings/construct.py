"""Realizing 2-dimensional triangulations as string complexes.

Given a triangulation in which every vertex and every edge lies in a
triangle, :func:`realize` puts a metric on the set of all its simplices:

=============================  ========
pair                           distance
=============================  ========
same simplex                   0
neither is a face of the other ``k``
vertex of an edge              ``u``
edge of a triangle             ``v``
vertex of a triangle           ``u+v``
=============================  ========

with ``k > 0`` and ``k/2 < u, v < k``.  The only 3-point strings are then
the flags ``vertex < edge < triangle`` (edge in the middle), there are no
longer strings, and the string complex is the barycentric subdivision.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Iterable, Sequence

from .complex import MOD2, StringComplex, build_complex, homology
from .gapspace import EXACT, GapSpace, GapSpaceError, circle_arc_metric, to_scalar
from .strings import direct_orders, enumerate_eps_strings


class TriangulationError(ValueError):
    pass


class RealizationError(ValueError):
    pass


Simplex = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Triangulation2D:
    """An abstract simplicial complex of dimension at most 2.

    Vertices carry arbitrary hashable labels; edges and triangles are stored
    as sorted tuples of vertex indices.
    """

    vertices: tuple[Hashable, ...]
    edges: tuple[Simplex, ...]
    triangles: tuple[Simplex, ...]

    @classmethod
    def from_lists(cls, vertices: Sequence[Hashable], edges: Iterable[Sequence[Hashable]] = (),
                   triangles: Iterable[Sequence[Hashable]] = (), infer_edges: bool = False) -> "Triangulation2D":
        verts = tuple(vertices)
        index = {v: i for i, v in enumerate(verts)}
        if len(index) != len(verts):
            raise TriangulationError("duplicate vertex labels")

        def lookup(simplex, kind, size):
            simplex = list(simplex)
            if len(simplex) != size:
                raise TriangulationError(f"{kind} {simplex} should have {size} vertices")
            try:
                out = tuple(sorted(index[v] for v in simplex))
            except KeyError as exc:
                raise TriangulationError(f"{kind} {simplex} uses unknown vertex {exc.args[0]!r}") from None
            if len(set(out)) != size:
                raise TriangulationError(f"{kind} {simplex} repeats a vertex")
            return out

        tris = [lookup(t, "triangle", 3) for t in triangles]
        eds = [lookup(e, "edge", 2) for e in edges]
        if len(set(tris)) != len(tris):
            raise TriangulationError("duplicate triangle")
        if len(set(eds)) != len(eds):
            raise TriangulationError("duplicate edge")
        if infer_edges:
            eds = sorted(set(eds) | {f for t in tris for f in itertools.combinations(t, 2)})
        edge_set = set(eds)
        for t in tris:
            for f in itertools.combinations(t, 2):
                if f not in edge_set:
                    raise TriangulationError(
                        f"edge {[verts[i] for i in f]} of triangle {[verts[i] for i in t]} is missing")
        return cls(verts, tuple(sorted(eds)), tuple(sorted(tris)))

    # -- structure

    def simplices(self) -> list[Simplex]:
        """All simplices, vertices first, then edges, then triangles."""
        return [(i,) for i in range(len(self.vertices))] + list(self.edges) + list(self.triangles)

    def f_vector(self) -> tuple[int, int, int]:
        return len(self.vertices), len(self.edges), len(self.triangles)

    def euler(self) -> int:
        v, e, t = self.f_vector()
        return v - e + t

    def is_admissible(self) -> bool:
        return not self.admissibility_problems()

    def admissibility_problems(self) -> list[str]:
        covered = {f for t in self.triangles for k in (1, 2) for f in itertools.combinations(t, k)}
        out = [f"vertex {self.vertices[i]!r} is in no triangle" for i in range(len(self.vertices)) if (i,) not in covered]
        out += [f"edge {[self.vertices[i] for i in e]} is in no triangle" for e in self.edges if e not in covered]
        return out

    def flags(self) -> list[tuple[Simplex, Simplex, Simplex]]:
        """Chains vertex < edge < triangle, one per barycentric 2-simplex."""
        out = []
        for t in self.triangles:
            for e in itertools.combinations(t, 2):
                for v in e:
                    out.append(((v,), e, t))
        return out

    def as_complex(self) -> StringComplex:
        return StringComplex.from_simplices(self.simplices())

    def simplex_label(self, s: Simplex) -> str:
        return "|".join(str(self.vertices[i]) for i in s)

    # -- io

    def to_json(self) -> dict:
        def lab(v):
            return v if isinstance(v, (int, str)) else str(v)

        return {
            "vertices": [lab(v) for v in self.vertices],
            "edges": [[lab(self.vertices[i]) for i in e] for e in self.edges],
            "triangles": [[lab(self.vertices[i]) for i in t] for t in self.triangles],
        }

    @classmethod
    def from_json(cls, data: dict, infer_edges: bool = False) -> "Triangulation2D":
        if not isinstance(data, dict):
            raise TriangulationError("triangulation JSON must be an object")
        for key in ("vertices", "triangles"):
            if key not in data:
                raise TriangulationError(f"triangulation JSON is missing field {key!r}")
        if "edges" not in data and not infer_edges:
            raise TriangulationError("triangulation JSON is missing field 'edges' (or infer edges)")
        return cls.from_lists(data["vertices"], data.get("edges", []), data["triangles"], infer_edges)

    @classmethod
    def from_off(cls, text: str) -> "Triangulation2D":
        """Faces of an OFF mesh; coordinates are ignored and edges inferred."""
        lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
        lines = [(no, ln) for no, ln in enumerate(lines, 1) if ln]
        if not lines:
            raise TriangulationError("empty OFF input")
        if lines[0][1].upper() == "OFF":
            lines = lines[1:]
        try:
            nv, nf = (int(x) for x in lines[0][1].split()[:2])
        except (ValueError, IndexError):
            raise TriangulationError(f"OFF line {lines[0][0]}: expected vertex and face counts") from None
        body = lines[1:]
        if len(body) < nv + nf:
            raise TriangulationError(f"OFF input declares {nv} vertices and {nf} faces but has {len(body)} lines")
        faces = []
        for no, ln in body[nv:nv + nf]:
            parts = ln.split()
            try:
                k = int(parts[0])
                face = [int(x) for x in parts[1:1 + k]]
            except (ValueError, IndexError):
                raise TriangulationError(f"OFF line {no}: malformed face") from None
            if k != 3 or len(face) != 3:
                raise TriangulationError(f"OFF line {no}: only triangular faces are supported")
            faces.append(face)
        return cls.from_lists(list(range(nv)), (), faces, infer_edges=True)


def barycentric_subdivision(tri: Triangulation2D) -> Triangulation2D:
    """Vertices are the simplices of ``tri``; triangles are its flags.

    Vertex ``i`` of the result is ``tri.simplices()[i]``, labelled by its
    vertex labels joined with ``|``.
    """
    simplices = tri.simplices()
    labels = [tri.simplex_label(s) for s in simplices]
    edges = [(labels[i], labels[j]) for i, j in itertools.combinations(range(len(simplices)), 2)
             if _proper_face(simplices[i], simplices[j]) or _proper_face(simplices[j], simplices[i])]
    triangles = [tuple(tri.simplex_label(s) for s in flag) for flag in tri.flags()]
    return Triangulation2D.from_lists(labels, edges, triangles)


def _proper_face(a: Simplex, b: Simplex) -> bool:
    return len(a) < len(b) and set(a) <= set(b)


# ---------------------------------------------------------------------------
# realization


@dataclass(frozen=True)
class RealizationParams:
    k: Any = Fraction(1)
    u: Any = Fraction(3, 5)
    v: Any = Fraction(7, 10)

    def __post_init__(self):
        for name in ("k", "u", "v"):
            object.__setattr__(self, name, to_scalar(getattr(self, name), EXACT))
        if self.k <= 0:
            raise RealizationError(f"k must be positive, got {self.k}")
        for name in ("u", "v"):
            val = getattr(self, name)
            if not self.k / 2 < val < self.k:
                raise RealizationError(f"{name} must lie strictly between k/2 and k, got {val} with k={self.k}")


def realize(tri: Triangulation2D, params: RealizationParams | None = None) -> GapSpace:
    """Finite metric space on the simplices of ``tri`` whose string complex is
    the barycentric subdivision of ``tri``.

    Points are ordered as in :meth:`Triangulation2D.simplices`.
    """
    params = params or RealizationParams()
    problems = tri.admissibility_problems()
    if problems:
        raise TriangulationError("triangulation is not admissible: " + "; ".join(problems[:3]))
    simplices = tri.simplices()
    k, u, v = params.k, params.u, params.v
    zero = Fraction(0)
    step = {(1, 2): u, (2, 3): v, (1, 3): u + v}
    n = len(simplices)
    sets = [frozenset(s) for s in simplices]
    m = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a, b = sets[i], sets[j]
            if a < b:
                dist = step[len(a), len(b)]
            elif b < a:
                dist = step[len(b), len(a)]
            else:
                dist = k
            m[i][j] = m[j][i] = dist
    return GapSpace.from_matrix(
        m, [tri.simplex_label(s) for s in simplices], EXACT,
        provenance={"generator": "realize", "k": str(k), "u": str(u), "v": str(v)},
    )


@dataclass
class VerificationReport:
    flags_exact: bool
    edge_in_middle: bool
    no_long_strings: bool
    isomorphic: bool
    n_flags: int
    n_points: int
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.flags_exact and self.edge_in_middle and self.no_long_strings and self.isomorphic

    def summary(self) -> str:
        if self.ok:
            return (f"verified: {self.n_flags} flags, {self.n_points} points, "
                    "isomorphic to barycentric subdivision")
        return "FAILED: " + "; ".join(self.problems)


def verify_realization(space: GapSpace, tri: Triangulation2D, strict: bool = True) -> VerificationReport:
    """Check a realized space against ``tri``.

    (a) the 3-point strings are exactly the flags, each with the edge as the
    middle term of every direct order; (b) there are no longer strings;
    (c) the string complex equals the barycentric subdivision under the
    identity map point ``i`` <-> simplex ``tri.simplices()[i]``.

    With ``strict`` a failed check raises :class:`RealizationError`.
    """
    simplices = tri.simplices()
    if space.n != len(simplices):
        raise RealizationError(f"space has {space.n} points but the triangulation has {len(simplices)} simplices")
    pos = {s: i for i, s in enumerate(simplices)}
    problems = []

    strings = enumerate_eps_strings(space, 0)
    triples = set(strings.of_size(3))
    flag_pts = {}
    for vtx, e, t in tri.flags():
        flag_pts[tuple(sorted((pos[vtx], pos[e], pos[t])))] = pos[e]
    flags_exact = triples == set(flag_pts)
    if not flags_exact:
        extra = sorted(triples - set(flag_pts))[:3]
        missing = sorted(set(flag_pts) - triples)[:3]
        problems.append(f"3-strings differ from flags (extra {extra}, missing {missing})")

    edge_in_middle = True
    for s in sorted(triples & set(flag_pts)):
        for o in direct_orders(space, s):
            if o.order[1] != flag_pts[s]:
                edge_in_middle = False
                problems.append(f"direct order {o.order} does not have the edge in the middle")
                break
        if not edge_in_middle:
            break

    longest = strings.max_size()
    no_long = longest <= 3
    if not no_long:
        problems.append(f"found a string with {longest} points")

    cx = build_complex(strings, check_admissible=False)
    sub = barycentric_subdivision(tri)
    # subdivision vertex i is simplices[i], the same as realized point i
    isomorphic = cx.simplex_set() == sub.as_complex().simplex_set()
    if not isomorphic:
        problems.append("string complex is not the barycentric subdivision under the canonical bijection")

    report = VerificationReport(flags_exact, edge_in_middle, no_long, isomorphic,
                                len(flag_pts), space.n, problems)
    if strict and not report.ok:
        raise RealizationError(report.summary())
    return report


# ---------------------------------------------------------------------------
# surfaces


def _cyclic(n: int, patterns: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    return sorted({tuple(sorted((i + d) % n for d in p)) for i in range(n) for p in patterns})


def _grid_surface(p: int, q: int, twist: bool) -> list[tuple[int, int, int]]:
    """Triangulated p x q grid with opposite sides glued (a Klein bottle when
    ``twist`` reverses the second gluing)."""

    def vid(i, j):
        wraps, i = divmod(i, p)
        if twist and wraps % 2:
            j = -j
        return i * q + (j % q)

    tris = []
    for i in range(p):
        for j in range(q):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)
            tris += [(a, b, d), (a, c, d)]
    return tris


def surface_library(name: str) -> Triangulation2D:
    """Small admissible triangulations of standard compact surfaces.

    ``sphere`` (4/6/4), ``torus`` (7/21/14), ``rp2`` (6/15/10), ``klein``
    (a twisted 3 x 4 grid), ``disk`` (one triangle), ``cylinder``,
    ``moebius`` (5/10/5) and ``two-spheres``.
    """
    if name == "sphere":
        tris = list(itertools.combinations(range(4), 3))
    elif name == "torus":
        tris = _cyclic(7, [(0, 1, 3), (0, 2, 3)])
    elif name == "rp2":
        tris = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
                (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]
    elif name == "klein":
        tris = _grid_surface(3, 4, twist=True)
    elif name == "disk":
        tris = [(0, 1, 2)]
    elif name == "cylinder":
        tris = [t for i in range(3) for t in ((i, (i + 1) % 3, 3 + i), ((i + 1) % 3, 3 + i, 3 + (i + 1) % 3))]
    elif name == "moebius":
        tris = _cyclic(5, [(0, 1, 2)])
    elif name == "two-spheres":
        tris = list(itertools.combinations(range(4), 3)) + list(itertools.combinations(range(4, 8), 3))
    else:
        raise TriangulationError(f"unknown surface {name!r}; choose from {', '.join(SURFACES)}")
    n = max(max(t) for t in tris) + 1
    return Triangulation2D.from_lists(list(range(n)), (), tris, infer_edges=True)


SURFACES = ("sphere", "torus", "klein", "rp2", "disk", "cylinder", "moebius", "two-spheres")

#: mod-2 Betti numbers of the library surfaces
SURFACE_BETTI = {
    "sphere": (1, 0, 1), "torus": (1, 2, 1), "klein": (1, 2, 1), "rp2": (1, 1, 1),
    "disk": (1, 0, 0), "cylinder": (1, 1, 0), "moebius": (1, 1, 0), "two-spheres": (2, 0, 2),
}


# ---------------------------------------------------------------------------
# the 4-point sphere


def sphere_four_points() -> GapSpace:
    """Four corners of a rectangle with the shortest-arc metric of its
    circumcircle; the string complex is the boundary of a tetrahedron."""
    return circle_arc_metric([0, 2, 6, 8], 12)


def candidate_complexes(n_points: int) -> list[StringComplex]:
    """Every complex on ``n_points`` labelled vertices in which each vertex and
    edge lies in a 2-simplex (the shape every string complex has).

    Such a complex is the downward closure of its simplices with three or
    more vertices, so enumerating families of those is exhaustive.
    """
    big = [s for k in range(3, n_points + 1) for s in itertools.combinations(range(n_points), k)]
    seen = {}
    for r in range(len(big) + 1):
        for fam in itertools.combinations(big, r):
            cx = StringComplex.from_simplices(fam, close_downward=True)
            seen.setdefault(frozenset(cx.simplex_set()), cx)
    return list(seen.values())


def integer_metric_complexes(n_points: int, max_gap: int) -> dict[frozenset, GapSpace]:
    """String complexes of all metrics on ``n_points`` with gaps in 1..max_gap,
    mapped to one realizing space each."""
    pairs = list(itertools.combinations(range(n_points), 2))
    out = {}
    for gaps in itertools.product(range(1, max_gap + 1), repeat=len(pairs)):
        m = [[0] * n_points for _ in range(n_points)]
        for (a, b), g in zip(pairs, gaps):
            m[a][b] = m[b][a] = g
        if any(m[a][b] > m[a][c] + m[c][b] for a, b in pairs for c in range(n_points)):
            continue
        space = GapSpace.from_matrix(m, mode=EXACT, check=False)
        cx = build_complex(enumerate_eps_strings(space, 0))
        out.setdefault(frozenset(cx.simplex_set()), space)
    return out


@dataclass
class SphereSearch:
    """Outcome of the smallest-sphere search."""
    minimal_points: int | None
    candidates_checked: dict[int, int]
    witness: GapSpace | None


def minimal_sphere_points(max_points: int = 4, max_gap: int = 3) -> SphereSearch:
    """Least number of points of a metric space whose string complex has the
    mod-2 Betti numbers of a 2-sphere.

    For ``n <= 3`` every admissible complex shape is enumerated, so a
    negative answer there is exhaustive.  For ``n = 4`` integer metrics with
    gaps up to ``max_gap`` are searched for a positive witness.
    """
    checked = {}
    for n in range(1, max_points + 1):
        shapes = candidate_complexes(n)
        checked[n] = len(shapes)
        if not any(homology(cx, MOD2).betti == (1, 0, 1) for cx in shapes):
            continue
        for key, space in integer_metric_complexes(n, max_gap).items():
            cx = StringComplex.from_simplices(key)
            if homology(cx, MOD2).betti == (1, 0, 1):
                return SphereSearch(n, checked, space)
    return SphereSearch(None, checked, None)


def load_triangulation(text: str, fmt: str = "json", infer_edges: bool = False) -> Triangulation2D:
    if fmt == "off":
        return Triangulation2D.from_off(text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TriangulationError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return Triangulation2D.from_json(data, infer_edges)
