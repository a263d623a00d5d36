# cython: language_level=3
# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled kernel for the windowed accumulated-cost recurrence.

Cell-for-cell mirror of ``retime._dtw_fallback.solve``; both backends must
return bit-identical results for identical inputs. See the fallback for the
layout documentation.
"""

from libc.math cimport INFINITY

import numpy as np


def solve(const double[::1] cost, const Py_ssize_t[::1] lo,
          const Py_ssize_t[::1] offsets, Py_ssize_t t2):
    """Windowed accumulate + backtrack; see _dtw_fallback.solve for the contract."""
    cdef Py_ssize_t t1 = offsets.shape[0] - 1
    cdef Py_ssize_t ncells = offsets[t1]
    acc_arr = np.empty(ncells, dtype=np.float64)
    cdef double[::1] acc = acc_arr
    path_arr = np.empty((t1 + t2 - 1, 2), dtype=np.intp)
    cdef Py_ssize_t[:, ::1] path = path_arr
    cdef Py_ssize_t i, j, p, start, end, li, pstart, pl, ph, pos, bi, bj
    cdef double best, v

    acc[0] = cost[0]
    for p in range(1, offsets[1]):
        acc[p] = cost[p] + acc[p - 1]
    for i in range(1, t1):
        start = offsets[i]
        end = offsets[i + 1]
        li = lo[i]
        pstart = offsets[i - 1]
        pl = lo[i - 1]
        ph = pl + (start - pstart) - 1
        for p in range(start, end):
            j = li + (p - start)
            best = INFINITY
            if pl <= j - 1 <= ph:
                best = acc[pstart + (j - 1 - pl)]
            if pl <= j <= ph:
                v = acc[pstart + (j - pl)]
                if v < best:
                    best = v
            if p > start:
                v = acc[p - 1]
                if v < best:
                    best = v
            acc[p] = cost[p] + best

    pos = t1 + t2 - 1
    i = t1 - 1
    j = t2 - 1
    while True:
        pos -= 1
        path[pos, 0] = i
        path[pos, 1] = j
        if i == 0 and j == 0:
            break
        best = INFINITY
        bi = i
        bj = j
        if i > 0:
            pstart = offsets[i - 1]
            pl = lo[i - 1]
            ph = pl + (offsets[i] - pstart) - 1
            if j > 0 and pl <= j - 1 <= ph:
                best = acc[pstart + (j - 1 - pl)]
                bi = i - 1
                bj = j - 1
            if pl <= j <= ph:
                v = acc[pstart + (j - pl)]
                if v < best:
                    best = v
                    bi = i - 1
                    bj = j
        if j > lo[i]:
            v = acc[offsets[i] + (j - 1 - lo[i])]
            if v < best:
                bi = i
                bj = j - 1
        i = bi
        j = bj

    return float(acc[ncells - 1]), path_arr[pos:].copy()
