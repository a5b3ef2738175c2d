"""Pure-Python kernels.

Same signatures and results as the compiled ``_core`` module.  These also
serve as the generic path for exact gaps too large for int64: every
function here works on any ordered number type (int, float, Fraction).
"""


def _as_lists(D):
    return D.tolist() if hasattr(D, "tolist") else [list(r) for r in D]


def _snap(e, total, end, tol):
    if tol and e <= tol * max(1.0, abs(total), abs(end)):
        return 0.0
    return e


def dfs_strings(D, eps, tol, max_len, bounded=True):
    """Ordered sequences of length 3..max_len whose excess stays <= eps.

    Every prefix of an accepted sequence is accepted (excess only grows as
    points are appended), so a branch is cut at its first rejected prefix.
    Returns ``{sorted tuple: (min excess, witness order)}``.
    """
    D = _as_lists(D)
    n = len(D)
    found = {}
    if max_len < 3 or n < 3:
        return found
    used = [False] * n
    path = []

    def extend(total):
        first, last = path[0], path[-1]
        row, head = D[last], D[first]
        for j in range(n):
            if used[j]:
                continue
            t = total + row[j]
            end = head[j]
            if bounded:
                if tol:
                    if t - (end + eps) > tol * max(1.0, abs(t), abs(end + eps)):
                        continue
                elif t - end > eps:
                    continue
            e = _snap(t - end, t, end, tol)
            path.append(j)
            key = tuple(sorted(path))
            prev = found.get(key)
            if prev is None or e < prev[0]:
                found[key] = (e, tuple(path))
            if len(path) < max_len:
                used[j] = True
                extend(t)
                used[j] = False
            path.pop()

    for a in range(n):
        used[a] = True
        path.append(a)
        for b in range(n):
            if b == a:
                continue
            used[b] = True
            path.append(b)
            extend(D[a][b])
            path.pop()
            used[b] = False
        path.pop()
        used[a] = False
    return found


def subset_births(D, tol, max_len):
    """Minimal excess of every subset of size 3..max_len (bitmask DP).

    Returns a list indexed by bitmask; entries for other sizes are ``None``.
    """
    D = _as_lists(D)
    n = len(D)
    size = 1 << n
    out = [None] * size
    if n < 3 or max_len < 3:
        return out
    # best[mask][s][e]: cheapest path from s to e through exactly mask
    best = [None] * size
    for s in range(n):
        for e in range(n):
            if s != e:
                m = (1 << s) | (1 << e)
                if best[m] is None:
                    best[m] = {}
                best[m][(s, e)] = D[s][e]
    for mask in range(size):
        table = best[mask]
        if table is None:
            continue
        k = bin(mask).count("1")
        if k >= 3:
            b = None
            for (s, e), t in table.items():
                v = _snap(t - D[s][e], t, D[s][e], tol)
                if b is None or v < b:
                    b = v
            out[mask] = b
        if k >= max_len:
            best[mask] = None
            continue
        for (s, e), t in table.items():
            row = D[e]
            for j in range(n):
                bit = 1 << j
                if mask & bit:
                    continue
                nm = mask | bit
                nt = best[nm]
                if nt is None:
                    nt = best[nm] = {}
                cand = t + row[j]
                old = nt.get((s, j))
                if old is None or cand < old:
                    nt[(s, j)] = cand
        best[mask] = None
    return out


def held_karp(D, tol):
    """Minimal excess over all orders of the whole point set of ``D``.

    Returns ``(excess, order)``; ``order`` indexes rows of ``D``.
    """
    D = _as_lists(D)
    k = len(D)
    if k == 1:
        return 0, (0,)
    full = (1 << k) - 1
    best = {}
    parent = {}
    for s in range(k):
        for e in range(k):
            if s != e:
                best[((1 << s) | (1 << e), s, e)] = D[s][e]
    for mask in range(1 << k):
        if bin(mask).count("1") < 2 or mask == full:
            continue
        for s in range(k):
            if not mask >> s & 1:
                continue
            for e in range(k):
                t = best.get((mask, s, e))
                if t is None:
                    continue
                for j in range(k):
                    if mask >> j & 1:
                        continue
                    key = (mask | (1 << j), s, j)
                    cand = t + D[e][j]
                    if key not in best or cand < best[key]:
                        best[key] = cand
                        parent[key] = e
    res = None
    for s in range(k):
        for e in range(k):
            if s == e:
                continue
            t = best[(full, s, e)]
            v = _snap(t - D[s][e], t, D[s][e], tol)
            if res is None or v < res[0]:
                res = (v, s, e)
    excess, s, e = res
    order = [e]
    mask, cur = full, e
    while mask != (1 << s) | (1 << cur):
        prev = parent[(mask, s, cur)]
        mask ^= 1 << cur
        cur = prev
        order.append(cur)
    order.append(s)
    return excess, tuple(reversed(order))


def reduce_gf2(columns, n_rows):
    """Column reduction over Z/2.

    ``columns[j]`` lists the row indices of column ``j``.  Returns the pivot
    (lowest nonzero row) of every reduced column, ``-1`` for zero columns.
    Columns are reduced left to right against earlier pivots only, which is
    the persistence algorithm when rows and columns share the filtration
    order.
    """
    pivot_col = {}
    reduced = []
    lows = []
    for j, col in enumerate(columns):
        bits = 0
        for r in col:
            bits ^= 1 << r
        while bits:
            low = bits.bit_length() - 1
            other = pivot_col.get(low)
            if other is None:
                break
            bits ^= reduced[other]
        reduced.append(bits)
        if bits:
            low = bits.bit_length() - 1
            pivot_col[low] = j
            lows.append(low)
        else:
            lows.append(-1)
    return lows
