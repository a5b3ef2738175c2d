"""Strings and epsilon-strings of a finite gap space.

An order ``x1, ..., xn`` of a point set has *excess*
``d(x1,x2) + ... + d(x(n-1),xn) - d(x1,xn)``, which is never negative.  A set
of three or more points is an epsilon-string when some order has excess at
most epsilon; singletons and pairs qualify by lying in a 3-point
epsilon-string.  The *birth* of a set is the least such epsilon.

Float-mode spaces compare excesses with the space tolerance, so the answer
for near-degenerate configurations depends on that tolerance by design:
strings are destroyed by arbitrarily small perturbations of the gaps.
"""
from __future__ import annotations

import itertools
import json
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Iterator, Sequence

from . import _pycore, kernels
from .gapspace import EXACT, GapSpace, GapSpaceError, close, leq, scalar_to_json, to_scalar

#: largest set handed to the Held-Karp DP in :func:`birth`
HELD_KARP_LIMIT = 20
ORACLE_LIMIT = 8


class StringError(ValueError):
    pass


@dataclass(frozen=True)
class OrderedString:
    order: tuple[int, ...]
    excess: Any


@dataclass(frozen=True)
class StringRecord:
    birth: Any
    witness: tuple[int, ...]


class StringSet(Mapping):
    """Epsilon-strings keyed by sorted index tuple.

    Each value is a :class:`StringRecord` holding the birth of the set and
    one order realizing it.
    """

    def __init__(self, records: dict[tuple[int, ...], StringRecord], epsilon=None,
                 labels: Sequence[str] = (), mode: str = EXACT, tolerance: float = 0.0):
        self._records = dict(sorted(records.items()))
        self.epsilon = epsilon
        self.labels = tuple(labels)
        self.mode = mode
        self.tolerance = tolerance

    def __getitem__(self, key):
        return self._records[tuple(sorted(key))]

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self._records)

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, key) -> bool:
        return tuple(sorted(key)) in self._records

    def __repr__(self) -> str:
        return f"StringSet({len(self)} sets, epsilon={self.epsilon})"

    def of_size(self, k: int) -> list[tuple[int, ...]]:
        return [s for s in self._records if len(s) == k]

    def max_size(self) -> int:
        return max((len(s) for s in self._records), default=0)

    def to_json(self) -> list[dict]:
        return [
            {"set": list(s), "birth": scalar_to_json(r.birth), "witness": list(r.witness)}
            for s, r in self._records.items()
        ]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, data: list[dict], mode: str = EXACT, **kw) -> "StringSet":
        records = {}
        for i, item in enumerate(data):
            try:
                key = tuple(sorted(int(v) for v in item["set"]))
                records[key] = StringRecord(to_scalar(item["birth"], mode), tuple(int(v) for v in item["witness"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise GapSpaceError(f"string entry {i}: {exc}") from exc
        return cls(records, mode=mode, **kw)


# ---------------------------------------------------------------------------
# kernel plumbing


def _kernel_args(space: GapSpace, eps=None, backend=None):
    """Machine-number view of the space for the kernels.

    Returns ``(module, D, eps, to_scalar)`` where ``to_scalar`` maps kernel
    outputs back to the space's scalar type.
    """
    extra = () if eps is None else (eps,)
    arr, scale = space.numeric(extra)
    if arr is None:
        # exact values too large for int64: generic path on Fractions
        mod = _pycore
        D = [list(r) for r in space.gaps]
        e = eps
        conv = Fraction
    else:
        mod = kernels.get(backend)
        D = arr
        if space.mode == EXACT:
            e = 0 if eps is None else int(Fraction(eps) * scale)

            def conv(v, _s=scale):
                return Fraction(v, _s)
        else:
            e = 0.0 if eps is None else float(eps)
            conv = float
    return mod, D, e, conv


def _check_eps(space: GapSpace, eps):
    if eps is None:
        return None
    eps = to_scalar(eps, space.mode)
    if eps < 0:
        raise StringError(f"epsilon must be nonnegative, got {eps}")
    return eps


def _check_subset(space: GapSpace, subset: Iterable[int]) -> tuple[int, ...]:
    s = tuple(subset)
    if not s:
        raise StringError("subset must be nonempty")
    if len(set(s)) != len(s):
        raise StringError(f"repeated index in {s}")
    for i in s:
        if not 0 <= i < space.n:
            raise StringError(f"index {i} out of range for {space.n} points")
    return s


# ---------------------------------------------------------------------------
# single sets


def excess(space: GapSpace, order: Sequence[int]):
    """Sum of consecutive gaps along ``order`` minus the gap between its ends."""
    order = _check_subset(space, order)
    if len(order) == 1:
        return to_scalar(0, space.mode)
    d = space.gaps
    total = sum((d[a][b] for a, b in zip(order, order[1:])), to_scalar(0, space.mode))
    end = d[order[0]][order[-1]]
    e = total - end
    if space.tolerance and close(total, end, space.tolerance):
        return 0.0
    return e


def _triple_births(space: GapSpace, backend=None) -> dict[tuple[int, ...], StringRecord]:
    key = ("triples", backend or kernels.BACKEND)
    if key not in space._cache:
        mod, D, _, conv = _kernel_args(space, None, backend)
        raw = mod.dfs_strings(D, 0 if space.mode == EXACT else 0.0, space.tolerance, 3, False) if space.n >= 3 else {}
        space._cache[key] = {s: StringRecord(conv(e), o) for s, (e, o) in raw.items()}
    return space._cache[key]


def _small_birth(space: GapSpace, subset: tuple[int, ...], backend=None):
    """Birth of a 1- or 2-point set: best 3-point superset, or ``None``."""
    best = None
    target = set(subset)
    for s, rec in _triple_births(space, backend).items():
        if target <= set(s) and (best is None or rec.birth < best.birth):
            best = StringRecord(rec.birth, tuple(i for i in rec.witness if i in target))
    return best


def birth_record(space: GapSpace, subset: Iterable[int], backend=None) -> StringRecord | None:
    """Birth and a witnessing order, or ``None`` when no epsilon works."""
    s = _check_subset(space, subset)
    if len(s) <= 2:
        return _small_birth(space, s, backend)
    if len(s) > HELD_KARP_LIMIT:
        raise StringError(f"birth DP limited to {HELD_KARP_LIMIT} points, got {len(s)}")
    idx = sorted(s)
    sub = GapSpace(tuple(map(tuple, _sub(space, idx))), tuple(str(i) for i in idx), space.mode, space.tolerance)
    mod, D, _, conv = _kernel_args(sub, None, backend)
    e, order = mod.held_karp(D, space.tolerance)
    return StringRecord(conv(e), tuple(idx[i] for i in order))


def birth(space: GapSpace, subset: Iterable[int], backend=None):
    """Least epsilon for which ``subset`` is an epsilon-string.

    Sets of three or more points use a bitmask DP over orders (cheapest
    Hamiltonian path for every start/end pair, minus the end gap).  Smaller
    sets take the least birth of a 3-point superset.  ``None`` means the set
    is an epsilon-string for no epsilon, which happens exactly when the
    space has fewer than three points.
    """
    rec = birth_record(space, subset, backend)
    return None if rec is None else rec.birth


def is_eps_string(space: GapSpace, subset: Iterable[int], eps) -> bool:
    eps = _check_eps(space, eps)
    b = birth(space, subset)
    return b is not None and leq(b, eps, space.tolerance)


def is_string(space: GapSpace, subset: Iterable[int]) -> bool:
    return is_eps_string(space, subset, 0)


def _orders_within(D, eps, tol, zero) -> list[tuple[tuple[int, ...], Any]]:
    """All full-length orders of the points of ``D`` with excess <= eps."""
    k = len(D)
    out = []

    def rec(path, used, total):
        if len(path) == k:
            e = total - D[path[0]][path[-1]]
            out.append((tuple(path), _pycore._snap(e, total, D[path[0]][path[-1]], tol)))
            return
        first, last = path[0], path[-1]
        for j in range(k):
            if used >> j & 1:
                continue
            t = total + D[last][j]
            if not leq(t, D[first][j] + eps, tol):
                continue
            path.append(j)
            rec(path, used | 1 << j, t)
            path.pop()

    for a in range(k):
        rec([a], 1 << a, zero)
    return out


def direct_orders(space: GapSpace, subset: Iterable[int], eps=0) -> list[OrderedString]:
    """Every direct order of the (epsilon-)string ``subset``.

    A pair's direct orders are those that extend to a direct order of some
    3-point (epsilon-)string containing it.
    """
    s = _check_subset(space, subset)
    eps = _check_eps(space, eps)
    tol = space.tolerance
    zero = to_scalar(0, space.mode)
    if len(s) == 1:
        if not is_eps_string(space, s, eps):
            raise StringError(f"{s} is not an epsilon-string")
        return [OrderedString(s, zero)]
    if len(s) == 2:
        a, b = s
        found = set()
        for c in range(space.n):
            if c in s:
                continue
            for order, _ in _orders_within(_sub(space, (a, b, c)), eps, tol, zero):
                pts = [(a, b, c)[i] for i in order]
                found.add(tuple(p for p in pts if p != c))
        if not found:
            raise StringError(f"{s} is not an epsilon-string")
        return [OrderedString(o, excess(space, o)) for o in sorted(found)]
    orders = _orders_within(_sub(space, s), eps, tol, zero)
    if not orders:
        raise StringError(f"{s} is not an epsilon-string")
    out = [OrderedString(tuple(s[i] for i in o), e) for o, e in orders]
    return sorted(out, key=lambda o: o.order)


def _sub(space: GapSpace, s: Sequence[int]):
    return [[space.gaps[a][b] for b in s] for a in s]


def endpoints(space: GapSpace, string: Iterable[int]) -> tuple[int, int]:
    """The two extreme points of a string in a metric space, as a sorted pair.

    They are the first and last points of either direct order, and the pair
    at greatest distance inside the string.
    """
    if not space.metric:
        raise StringError("endpoints are only defined in metric spaces")
    s = _check_subset(space, string)
    if len(s) < 2:
        raise StringError("endpoints need a string with at least two points")
    if not is_string(space, s):
        raise StringError(f"{s} is not a string")
    if len(s) == 2:
        return tuple(sorted(s))
    order = direct_orders(space, s)[0].order
    return tuple(sorted((order[0], order[-1])))


# ---------------------------------------------------------------------------
# enumeration


def _complete_small(records: dict, n: int, max_size: int) -> dict:
    """Add pairs and singletons licensed by the 3-point sets in ``records``."""
    small: dict[tuple[int, ...], StringRecord] = {}
    for s, rec in records.items():
        if len(s) != 3:
            continue
        for k in (1, 2):
            if k > max_size:
                continue
            for sub in itertools.combinations(s, k):
                cur = small.get(sub)
                if cur is None or rec.birth < cur.birth:
                    small[sub] = StringRecord(rec.birth, tuple(i for i in rec.witness if i in sub))
    out = {s: r for s, r in records.items() if len(s) <= max_size}
    out.update(small)
    return out


def enumerate_eps_strings(space: GapSpace, eps=0, max_size: int | None = None, backend=None) -> StringSet:
    """All epsilon-strings with at most ``max_size`` points.

    Depth-first extension of ordered sequences, cutting a branch as soon as
    its running excess exceeds ``eps``; every prefix of an ordered
    epsilon-string is one too, so nothing is lost.  The recorded birth is
    the least excess among the visited orders, which is exact because the
    optimal order is always visited.
    """
    eps = _check_eps(space, eps)
    if eps is None:
        raise StringError("epsilon is required")
    if max_size is None:
        max_size = space.n
    if max_size < 1:
        raise StringError("max_size must be >= 1")
    mod, D, e, conv = _kernel_args(space, eps, backend)
    raw = mod.dfs_strings(D, e, space.tolerance, max(3, max_size), True)
    records = {s: StringRecord(conv(b), o) for s, (b, o) in raw.items()}
    records = _complete_small(records, space.n, max_size)
    return StringSet(records, eps, space.labels, space.mode, space.tolerance)


def oracle_enumerate(space: GapSpace, eps=0, limit: int = ORACLE_LIMIT) -> StringSet:
    """Exhaustive enumeration over every subset and every order.

    Transcribes the definitions directly and shares no code with the
    production enumerator; meant for cross-checking only.
    """
    eps = _check_eps(space, eps)
    if space.n > limit:
        raise StringError(f"oracle limited to {limit} points, got {space.n}")
    d, tol = space.gaps, space.tolerance
    best: dict[tuple[int, ...], StringRecord] = {}
    for k in range(3, space.n + 1):
        for subset in itertools.combinations(range(space.n), k):
            rec = None
            for order in itertools.permutations(subset):
                total = sum(d[a][b] for a, b in zip(order, order[1:]))
                end = d[order[0]][order[-1]]
                ex = total - end
                if tol and close(total, end, tol):
                    ex = 0.0
                if rec is None or ex < rec.birth:
                    rec = StringRecord(ex, order)
            if leq(rec.birth, eps, tol):
                best[subset] = rec
    for k in (1, 2):
        for subset in itertools.combinations(range(space.n), k):
            cands = [r for s, r in best.items() if len(s) == 3 and set(subset) <= set(s)]
            if cands:
                r = min(cands, key=lambda r: r.birth)
                best[subset] = StringRecord(r.birth, tuple(i for i in r.witness if i in subset))
    return StringSet(best, eps, space.labels, space.mode, space.tolerance)


def oracle_birth(space: GapSpace, subset: Sequence[int]):
    """Brute-force birth: minimum excess over all orders (or 3-point supersets)."""
    s = _check_subset(space, subset)
    if len(s) >= 3:
        return min(excess(space, o) for o in itertools.permutations(s))
    cands = [oracle_birth(space, s + extra)
             for extra in itertools.combinations([i for i in range(space.n) if i not in s], 3 - len(s))]
    return min(cands) if cands else None
