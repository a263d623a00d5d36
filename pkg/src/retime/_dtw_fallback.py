"""Pure-Python kernel for the windowed accumulated-cost recurrence.

Drop-in replacement for the compiled extension ``retime._dtw_kernel``; the
two implementations perform the identical per-cell operations in the
identical order and must return bit-identical results for identical inputs
(the test suite asserts this whenever the extension is importable). Python
floats are IEEE doubles, so ``+`` and ``min`` here match the C arithmetic
exactly. Expect roughly two orders of magnitude less throughput.
"""

from __future__ import annotations

import numpy as np

_INF = float("inf")


def solve(cost, lo, offsets, t2):
    """Run the accumulated-cost recurrence over a windowed grid and backtrack.

    cost     flat float64 array of local costs; row i occupies
             cost[offsets[i]:offsets[i+1]], covering columns
             lo[i] .. lo[i] + width_i - 1 of a conceptual (T1, t2) grid
    lo       per-row first column (intp, length T1)
    offsets  row starts into `cost` (intp, length T1 + 1)
    t2       column count of the underlying grid

    Returns (total, pairs): the accumulated cost at (T1-1, t2-1) and the
    backtracked path as an (K, 2) intp array from (0, 0) to (T1-1, t2-1),
    breaking ties diagonal first, then vertical, then horizontal. Cells
    outside the window are treated as +inf.
    """
    t1 = len(offsets) - 1
    c = cost.tolist()
    lo = [int(v) for v in lo]
    off = [int(v) for v in offsets]
    ncells = off[t1]
    acc = [_INF] * ncells

    acc[0] = c[0]
    for p in range(1, off[1]):
        acc[p] = c[p] + acc[p - 1]
    for i in range(1, t1):
        start, end = off[i], off[i + 1]
        li = lo[i]
        pstart = off[i - 1]
        pl = lo[i - 1]
        ph = pl + (start - pstart) - 1
        for p in range(start, end):
            j = li + (p - start)
            best = _INF
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
            acc[p] = c[p] + best

    rev = []
    i, j = t1 - 1, t2 - 1
    while True:
        rev.append((i, j))
        if i == 0 and j == 0:
            break
        best = _INF
        bi, bj = i, j
        if i > 0:
            pstart = off[i - 1]
            pl = lo[i - 1]
            ph = pl + (off[i] - pstart) - 1
            if j > 0 and pl <= j - 1 <= ph:
                best = acc[pstart + (j - 1 - pl)]
                bi, bj = i - 1, j - 1
            if pl <= j <= ph:
                v = acc[pstart + (j - pl)]
                if v < best:
                    best = v
                    bi, bj = i - 1, j
        if j > lo[i]:
            v = acc[off[i] + (j - 1 - lo[i])]
            if v < best:
                bi, bj = i, j - 1
        i, j = bi, bj

    pairs = np.array(rev[::-1], dtype=np.intp)
    return acc[ncells - 1], pairs
