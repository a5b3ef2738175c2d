# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: pruned string enumeration, subset-birth DP, Held-Karp
witness search and Z/2 column reduction.

Gap matrices arrive either as int64 (exact rationals scaled to a common
denominator) or float64 (compared with a relative tolerance).  Results
match ``_pycore`` exactly.
"""

import numpy as np

from libc.math cimport fabs
from libc.stdlib cimport malloc, calloc, free
from libcpp.algorithm cimport sort
from libcpp.vector cimport vector

ctypedef fused num_t:
    long long
    double


cdef inline double _scale3(double a, double b) nogil:
    cdef double m = 1.0
    if fabs(a) > m:
        m = fabs(a)
    if fabs(b) > m:
        m = fabs(b)
    return m


cdef inline bint _accept(num_t total, num_t end, num_t eps, double tol) nogil:
    if num_t is double:
        if tol > 0:
            return total - (end + eps) <= tol * _scale3(total, end + eps)
        return total - end <= eps
    else:
        return total - end <= eps


cdef inline num_t _snap(num_t e, num_t total, num_t end, double tol) nogil:
    if num_t is double:
        if tol > 0 and e <= tol * _scale3(total, end):
            return 0.0
    return e


cdef void _extend(num_t[:, ::1] D, int n, num_t eps, double tol, int max_len, bint bounded,
                  int* path, int depth, char* used, num_t total, dict found) except *:
    cdef int first = path[0], last = path[depth - 1], j, i
    cdef num_t t, end, e
    for j in range(n):
        if used[j]:
            continue
        t = total + D[last, j]
        end = D[first, j]
        if bounded and not _accept(t, end, eps, tol):
            continue
        e = _snap(t - end, t, end, tol)
        path[depth] = j
        order = tuple([path[i] for i in range(depth + 1)])
        key = tuple(sorted(order))
        prev = found.get(key)
        if prev is None or e < prev[0]:
            found[key] = (e, order)
        if depth + 1 < max_len:
            used[j] = 1
            _extend(D, n, eps, tol, max_len, bounded, path, depth + 1, used, t, found)
            used[j] = 0


def dfs_strings(num_t[:, ::1] D, num_t eps, double tol, int max_len, bint bounded=True):
    cdef int n = D.shape[0], a, b
    found = {}
    if max_len < 3 or n < 3:
        return found
    cdef int* path = <int*>malloc(n * sizeof(int))
    cdef char* used = <char*>calloc(n, sizeof(char))
    try:
        for a in range(n):
            used[a] = 1
            path[0] = a
            for b in range(n):
                if b == a:
                    continue
                used[b] = 1
                path[1] = b
                _extend(D, n, eps, tol, max_len, bounded, path, 2, used, D[a, b], found)
                used[b] = 0
            used[a] = 0
    finally:
        free(path)
        free(used)
    return found


cdef inline int _popcount(unsigned long long x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def _subset_births(num_t[:, ::1] D, double tol, int max_len, num_t[::1] out, char[::1] valid):
    cdef int n = D.shape[0], s, e, j, k
    cdef unsigned long long size = 1ULL << n, mask, nm, base, nbase
    cdef unsigned long long nn = n * n
    cdef num_t* best = <num_t*>malloc(size * nn * sizeof(num_t))
    cdef char* has = <char*>calloc(size * nn, sizeof(char))
    cdef num_t t, cand, v, b
    cdef bint got
    if best == NULL or has == NULL:
        free(best)
        free(has)
        raise MemoryError("subset DP table does not fit in memory")
    try:
        with nogil:
            for s in range(n):
                for e in range(n):
                    if s != e:
                        mask = (1ULL << s) | (1ULL << e)
                        best[mask * nn + s * n + e] = D[s, e]
                        has[mask * nn + s * n + e] = 1
            for mask in range(size):
                k = _popcount(mask)
                if k < 2:
                    continue
                base = mask * nn
                if k >= 3:
                    got = False
                    b = 0
                    for s in range(n):
                        for e in range(n):
                            if has[base + s * n + e]:
                                t = best[base + s * n + e]
                                v = _snap(t - D[s, e], t, D[s, e], tol)
                                if not got or v < b:
                                    b = v
                                    got = True
                    out[mask] = b
                    valid[mask] = 1
                if k >= max_len:
                    continue
                for s in range(n):
                    for e in range(n):
                        if not has[base + s * n + e]:
                            continue
                        t = best[base + s * n + e]
                        for j in range(n):
                            if mask & (1ULL << j):
                                continue
                            nm = mask | (1ULL << j)
                            nbase = nm * nn + s * n + j
                            cand = t + D[e, j]
                            if not has[nbase] or cand < best[nbase]:
                                best[nbase] = cand
                                has[nbase] = 1
    finally:
        free(best)
        free(has)


def subset_births(D, double tol, int max_len):
    D = np.ascontiguousarray(D)
    n = D.shape[0]
    out = [None] * (1 << n)
    if n < 3 or max_len < 3:
        return out
    vals = np.zeros(1 << n, dtype=D.dtype)
    valid = np.zeros(1 << n, dtype=np.int8)
    _subset_births(D, tol, max_len, vals, valid)
    pyvals = vals.tolist()
    for m in np.flatnonzero(valid).tolist():
        out[m] = pyvals[m]
    return out


def _held_karp(num_t[:, ::1] D, double tol):
    cdef int k = D.shape[0], s, e, j, bs = -1, be = -1, cur, prev
    cdef unsigned long long size = 1ULL << k, mask, full = (1ULL << k) - 1, key, nkey
    cdef unsigned long long kk = k * k
    cdef num_t* best = <num_t*>malloc(size * kk * sizeof(num_t))
    cdef char* has = <char*>calloc(size * kk, sizeof(char))
    cdef int* parent = <int*>malloc(size * kk * sizeof(int))
    cdef num_t t, cand, v, res = 0
    cdef bint got = False
    if best == NULL or has == NULL or parent == NULL:
        free(best)
        free(has)
        free(parent)
        raise MemoryError("Held-Karp table does not fit in memory")
    try:
        for s in range(k):
            for e in range(k):
                if s != e:
                    key = ((1ULL << s) | (1ULL << e)) * kk + s * k + e
                    best[key] = D[s, e]
                    has[key] = 1
        for mask in range(size):
            if mask == full or _popcount(mask) < 2:
                continue
            for s in range(k):
                for e in range(k):
                    key = mask * kk + s * k + e
                    if not has[key]:
                        continue
                    t = best[key]
                    for j in range(k):
                        if mask & (1ULL << j):
                            continue
                        nkey = (mask | (1ULL << j)) * kk + s * k + j
                        cand = t + D[e, j]
                        if not has[nkey] or cand < best[nkey]:
                            best[nkey] = cand
                            has[nkey] = 1
                            parent[nkey] = e
        for s in range(k):
            for e in range(k):
                if s == e:
                    continue
                t = best[full * kk + s * k + e]
                v = _snap(t - D[s, e], t, D[s, e], tol)
                if not got or v < res:
                    res = v
                    bs = s
                    be = e
                    got = True
        order = [be]
        mask = full
        cur = be
        while mask != ((1ULL << bs) | (1ULL << cur)):
            prev = parent[mask * kk + bs * k + cur]
            mask ^= 1ULL << cur
            cur = prev
            order.append(cur)
        order.append(bs)
    finally:
        free(best)
        free(has)
        free(parent)
    return res, tuple(reversed(order))


def held_karp(D, double tol):
    D = np.ascontiguousarray(D)
    if D.shape[0] == 1:
        return 0, (0,)
    return _held_karp(D, tol)


cdef void _xor_into(vector[int]& col, vector[int]& other, vector[int]& tmp) nogil:
    # symmetric difference of two ascending index lists
    cdef size_t i = 0, j = 0
    tmp.clear()
    while i < col.size() and j < other.size():
        if col[i] < other[j]:
            tmp.push_back(col[i])
            i += 1
        elif col[i] > other[j]:
            tmp.push_back(other[j])
            j += 1
        else:
            i += 1
            j += 1
    while i < col.size():
        tmp.push_back(col[i])
        i += 1
    while j < other.size():
        tmp.push_back(other[j])
        j += 1
    col.swap(tmp)


cdef void _cancel_pairs(vector[int]& col) nogil:
    # sort, then drop rows that occur an even number of times
    cdef size_t i = 0, out = 0, j
    sort(col.begin(), col.end())
    while i < col.size():
        j = i
        while j < col.size() and col[j] == col[i]:
            j += 1
        if (j - i) % 2:
            col[out] = col[i]
            out += 1
        i = j
    col.resize(out)


def reduce_gf2(columns, int n_rows):
    cdef size_t m = len(columns), jj
    cdef vector[vector[int]] cols
    cdef vector[int] tmp
    cdef vector[int] pivot_col
    cdef int low, other
    cols.resize(m)
    pivot_col.assign(n_rows, -1)
    for jj in range(m):
        cols[jj] = columns[jj]
        _cancel_pairs(cols[jj])
    lows = []
    for jj in range(m):
        with nogil:
            low = -1
            while cols[jj].size() > 0:
                low = cols[jj].back()
                other = pivot_col[low]
                if other < 0:
                    break
                _xor_into(cols[jj], cols[other], tmp)
                low = -1
            if cols[jj].size() > 0:
                low = cols[jj].back()
                pivot_col[low] = <int>jj
        lows.append(low)
    return lows
