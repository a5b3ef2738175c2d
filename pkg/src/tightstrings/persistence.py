"""The epsilon-filtration of string complexes and its Z/2 barcode."""
from __future__ import annotations

import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import kernels
from .complex import StringComplex
from .gapspace import EXACT, GapSpace, close, leq, scalar_to_json
from .strings import StringRecord, _complete_small, _kernel_args

log = logging.getLogger(__name__)

#: above this many points the all-subsets DP is not attempted
DP_LIMIT = 15
#: refuse plans that would visit more ordered sequences than this
DFS_BUDGET = 50_000_000


class FiltrationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Filtration:
    """Simplices sorted by ``(birth, dimension, vertex tuple)``.

    With that order every face precedes its cofaces, since births never
    decrease along face inclusions.
    """

    simplices: list[tuple[int, ...]]
    births: list[Any]
    labels: tuple[str, ...] = ()
    mode: str = EXACT
    tolerance: float = 0.0

    def __len__(self) -> int:
        return len(self.simplices)

    def level(self, eps) -> StringComplex:
        """The complex of all simplices born at or before ``eps``."""
        keep = [(s, b) for s, b in zip(self.simplices, self.births) if leq(b, eps, self.tolerance)]
        return StringComplex.from_simplices([s for s, _ in keep], dict(keep), self.labels)

    def distinct_births(self) -> list[Any]:
        out = []
        for b in sorted(set(self.births)):
            if not out or not close(out[-1], b, self.tolerance):
                out.append(b)
        return out

    def resorted(self, key) -> "Filtration":
        """Same simplices in another order, e.g. to test tie-break independence."""
        pairs = sorted(zip(self.simplices, self.births), key=lambda p: key(p[0], p[1]))
        return Filtration([p[0] for p in pairs], [p[1] for p in pairs], self.labels, self.mode, self.tolerance)

    def to_json(self) -> list[dict]:
        return [{"simplex": list(s), "birth": scalar_to_json(b)} for s, b in zip(self.simplices, self.births)]


def _dfs_cost(n: int, max_size: int) -> int:
    return sum(math.perm(n, k) for k in range(2, max_size + 1))


def subset_births(space: GapSpace, max_size: int | None = None, backend=None) -> dict[tuple[int, ...], Any]:
    """Birth of every subset with a finite birth and at most ``max_size`` points."""
    n = space.n
    max_size = n if max_size is None else min(max_size, n)
    if n < 3 or max_size < 1:
        return {}
    mod, D, _, conv = _kernel_args(space, None, backend)
    use_dp = n <= DP_LIMIT and (max_size >= n - 1 or _dfs_cost(n, max(3, max_size)) > (n * n) << n)
    if use_dp:
        raw = mod.subset_births(D, space.tolerance, max(3, max_size))
        records = {}
        for mask, v in enumerate(raw):
            if v is None:
                continue
            s = tuple(i for i in range(n) if mask >> i & 1)
            records[s] = StringRecord(conv(v), s)
    else:
        cost = _dfs_cost(n, max(3, max_size))
        if cost > DFS_BUDGET:
            raise FiltrationError(
                f"{n} points up to size {max_size} means ~{cost:.2e} ordered sequences; lower max_dim")
        raw = mod.dfs_strings(D, 0 if space.mode == EXACT else 0.0, space.tolerance, max(3, max_size), False)
        records = {s: StringRecord(conv(e), o) for s, (e, o) in raw.items()}
    records = _complete_small(records, n, max_size)
    births = {s: r.birth for s, r in records.items()}
    if space.tolerance:
        # float rounding can put a face a few ulps above its coface
        for s in sorted(births, key=len):
            if len(s) > 1:
                top = max(births[f] for f in itertools.combinations(s, len(s) - 1))
                if top > births[s]:
                    births[s] = top
    return births


def build_filtration(space: GapSpace, max_dim: int | None = None, backend=None) -> Filtration:
    """Every subset with a finite birth, as a simplex entering at its birth.

    Births of all subsets come from one bitmask DP when the space is small
    enough, otherwise from exhaustive ordered enumeration capped at
    ``max_dim + 1`` points.  The DP table holds ``2**n * n**2`` entries.
    """
    if space.n < 1:
        raise FiltrationError("empty space")
    if max_dim is None and space.n > 12:
        log.warning("full filtration on %d points has ~2**%d simplices", space.n, space.n)
    max_size = None if max_dim is None else max_dim + 1
    births = subset_births(space, max_size, backend)
    order = sorted(births, key=lambda s: (births[s], len(s), s))
    return Filtration(order, [births[s] for s in order], space.labels, space.mode, space.tolerance)


# ---------------------------------------------------------------------------
# barcode


@dataclass(frozen=True)
class Interval:
    degree: int
    birth: Any
    death: Any = None  # None: never dies

    def contains(self, eps, tol: float = 0.0) -> bool:
        if not leq(self.birth, eps, tol):
            return False
        return self.death is None or not leq(self.death, eps, tol)

    def to_json(self) -> dict:
        return {"degree": self.degree, "birth": scalar_to_json(self.birth),
                "death": "inf" if self.death is None else scalar_to_json(self.death)}


@dataclass(frozen=True)
class Barcode:
    intervals: list[Interval]
    zero_length: int = 0
    tolerance: float = 0.0
    zero_length_intervals: list[Interval] = field(default_factory=list, repr=False)

    def degree(self, k: int) -> list[Interval]:
        return [iv for iv in self.intervals if iv.degree == k]

    def count_at(self, eps, k: int) -> int:
        return sum(1 for iv in self.intervals if iv.degree == k and iv.contains(eps, self.tolerance))

    def multiset(self) -> list[tuple]:
        return sorted((iv.degree, iv.birth, math.inf if iv.death is None else iv.death) for iv in self.intervals)

    def to_json(self) -> list[dict]:
        return [iv.to_json() for iv in self.intervals]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    def to_text(self) -> str:
        """``degree birth death`` per line, ``inf`` for essential classes."""
        lines = []
        for iv in self.intervals:
            death = "inf" if iv.death is None else str(scalar_to_json(iv.death))
            lines.append(f"{iv.degree} {scalar_to_json(iv.birth)} {death}")
        return "\n".join(lines) + ("\n" if lines else "")


def barcode(filt: Filtration, backend=None) -> Barcode:
    """Persistent homology over Z/2 by column reduction in filtration order."""
    pos = {s: i for i, s in enumerate(filt.simplices)}
    columns = []
    for j, s in enumerate(filt.simplices):
        if len(s) == 1:
            columns.append([])
            continue
        col = []
        for f in itertools.combinations(s, len(s) - 1):
            i = pos.get(f)
            if i is None:
                raise FiltrationError(f"face {f} of {s} is missing from the filtration")
            if i >= j:
                raise FiltrationError(f"face {f} comes after its coface {s}")
            col.append(i)
        columns.append(col)
    lows = kernels.get(backend).reduce_gf2(columns, len(columns))
    tol = filt.tolerance
    paired = set()
    intervals, zero = [], []
    for j, low in enumerate(lows):
        if low < 0:
            continue
        paired.update((low, j))
        iv = Interval(len(filt.simplices[low]) - 1, filt.births[low], filt.births[j])
        (zero if close(iv.birth, iv.death, tol) else intervals).append(iv)
    for i, low in enumerate(lows):
        if low < 0 and i not in paired:
            intervals.append(Interval(len(filt.simplices[i]) - 1, filt.births[i]))
    intervals.sort(key=lambda iv: (iv.degree, iv.birth, iv.death is None, iv.death if iv.death is not None else 0))
    return Barcode(intervals, len(zero), tol, zero)


def betti_curve(data: Filtration | Barcode, degree: int, grid: Sequence[Any]) -> list[tuple[Any, int]]:
    """``(eps, Betti number in degree)`` for every grid value, from the barcode."""
    bc = barcode(data) if isinstance(data, Filtration) else data
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be sorted")
    return [(eps, bc.count_at(eps, degree)) for eps in grid]
