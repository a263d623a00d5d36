"""Dynamic-programming sequence alignment: exact and multiscale-approximate.

The exact aligner fills the full (T1, T2) accumulated-cost matrix, so its
runtime grows quadratically. The multiscale variant recursively aligns
half-resolution copies and re-solves at full resolution only inside a
narrow window around the projected coarse path, trading exactness for
near-linear runtime; its cost can never undershoot the exact one.

Both are driven by the same windowed DP kernel (the full solve is simply a
window spanning every column), which exists twice: a compiled extension and
a pure-Python fallback selected at import time. Set RETIME_DTW_BACKEND to
"compiled" or "python" to force one, or call use_backend() at runtime.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _dtw_fallback
from .errors import IncompatibleSignals, InvalidWindow
from .signals import Signal

__all__ = [
    "WarpingPath",
    "Window",
    "dtw_full",
    "dtw_windowed",
    "coarsen",
    "expand_window",
    "fastdtw",
    "normalized_error",
    "use_backend",
    "active_backend",
]

def _load_backend(name: str):
    if name not in ("auto", "compiled", "python"):
        raise ValueError(f"unknown DP backend {name!r}; expected auto, compiled, or python")
    if name == "python":
        return _dtw_fallback, False
    try:
        from . import _dtw_kernel
        return _dtw_kernel, True
    except ImportError:
        if name == "compiled":
            raise RuntimeError("compiled DP kernel requested but the extension is not built")
        return _dtw_fallback, False


_backend, HAVE_COMPILED = _load_backend(os.environ.get("RETIME_DTW_BACKEND", "auto"))


def use_backend(name: str) -> str:
    """Select the DP backend: "compiled", "python", or "auto" (prefer compiled).

    Returns the name of the backend now active. Process-global; do not switch
    while other threads are aligning.
    """
    global _backend, HAVE_COMPILED
    _backend, HAVE_COMPILED = _load_backend(name)
    return active_backend()


def active_backend() -> str:
    return "compiled" if HAVE_COMPILED else "python"


@dataclass(frozen=True)
class WarpingPath:
    """A monotone, continuous alignment between two sample sequences.

    pairs  (K, 2) integer array of (i, j) index pairs, starting at (0, 0),
           each step incrementing i, j, or both by exactly 1
    cost   accumulated local cost along the path
    """

    pairs: np.ndarray
    cost: float

    def __post_init__(self):
        pairs = np.asarray(self.pairs, dtype=np.intp)
        if pairs.ndim != 2 or pairs.shape[1] != 2 or pairs.shape[0] < 1:
            raise ValueError("pairs must be a non-empty (K, 2) index array")
        if pairs[0, 0] != 0 or pairs[0, 1] != 0:
            raise ValueError(f"path must start at (0, 0), got {tuple(pairs[0])}")
        steps = np.diff(pairs, axis=0)
        if not (((steps == 0) | (steps == 1)).all() and (steps.sum(axis=1) > 0).all()):
            raise ValueError("each path step must increment i, j, or both by exactly 1")
        cost = float(self.cost)
        if not (np.isfinite(cost) and cost >= 0.0):
            raise ValueError(f"path cost must be finite and non-negative, got {cost!r}")
        pairs = np.ascontiguousarray(pairs)
        pairs.flags.writeable = False
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "cost", cost)

    @property
    def length(self) -> int:
        return self.pairs.shape[0]

    @property
    def normalized(self) -> float:
        """Accumulated cost divided by the number of path pairs."""
        return self.cost / self.length

    def transposed(self) -> "WarpingPath":
        """The same alignment viewed with the two sequences swapped."""
        return WarpingPath(self.pairs[:, ::-1], self.cost)


@dataclass(frozen=True)
class Window:
    """Per-row inclusive column ranges constraining the DP search.

    lo, hi  (T1,) integer arrays; row i may visit columns lo[i]..hi[i]
    shape   (T1, T2) of the underlying grid

    A valid window has non-empty in-grid ranges, non-decreasing lo and hi,
    contains (0, 0) and (T1-1, T2-1), and consecutive rows connect
    (lo[i+1] <= hi[i] + 1), so at least one monotone path fits inside.
    """

    lo: np.ndarray
    hi: np.ndarray
    shape: tuple[int, int]

    def __post_init__(self):
        t1, t2 = self.shape
        lo = np.asarray(self.lo, dtype=np.intp)
        hi = np.asarray(self.hi, dtype=np.intp)
        if lo.shape != (t1,) or hi.shape != (t1,):
            raise InvalidWindow(f"lo/hi must have shape ({t1},), got {lo.shape} and {hi.shape}")
        if t1 < 1 or t2 < 1:
            raise InvalidWindow(f"grid shape must be positive, got {self.shape}")
        if (lo < 0).any() or (hi >= t2).any() or (lo > hi).any():
            raise InvalidWindow("window rows must be non-empty ranges inside the grid")
        if (np.diff(lo) < 0).any() or (np.diff(hi) < 0).any():
            raise InvalidWindow("window bounds must be non-decreasing")
        if lo[0] != 0 or hi[-1] != t2 - 1:
            raise InvalidWindow("window must contain (0, 0) and (T1-1, T2-1)")
        if (lo[1:] > hi[:-1] + 1).any():
            raise InvalidWindow("consecutive window rows must connect")
        lo = np.ascontiguousarray(lo)
        hi = np.ascontiguousarray(hi)
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "shape", (int(t1), int(t2)))

    @classmethod
    def full(cls, t1: int, t2: int) -> "Window":
        """The unconstrained window covering every cell of a (t1, t2) grid."""
        return cls(
            np.zeros(t1, dtype=np.intp),
            np.full(t1, t2 - 1, dtype=np.intp),
            (t1, t2),
        )

    @property
    def size(self) -> int:
        """Number of cells inside the window."""
        return int((self.hi - self.lo + 1).sum())


def _check_compatible(s1: Signal, s2: Signal) -> None:
    if s1.n != s2.n:
        raise IncompatibleSignals(f"dimension mismatch: n={s1.n} vs n={s2.n}")


def dtw_full(s1: Signal, s2: Signal) -> WarpingPath:
    """Exact alignment by the classic accumulated-cost recurrence.

    Local cost is the unsquared Euclidean distance between samples;
    D(i,j) = d(i,j) + min(D(i-1,j), D(i,j-1), D(i-1,j-1)). Returns the
    minimal-cost path from (0, 0) to (T1-1, T2-1); ties in backtracking
    prefer the diagonal step, then the vertical, then the horizontal.
    O(T1*T2) time and memory.
    """
    _check_compatible(s1, s2)
    X, Y = s1.samples, s2.samples
    t1, t2 = s1.T, s2.T
    diff = X[:, np.newaxis, :] - Y[np.newaxis, :, :]
    flat = np.sqrt((diff * diff).sum(axis=2)).ravel()
    lo = np.zeros(t1, dtype=np.intp)
    offsets = np.arange(t1 + 1, dtype=np.intp) * t2
    total, pairs = _backend.solve(flat, lo, offsets, t2)
    return WarpingPath(pairs, total)


def dtw_windowed(s1: Signal, s2: Signal, window: Window) -> WarpingPath:
    """The same recurrence restricted to a window; outside cells act as +inf.

    With the full window this is bit-identical to dtw_full. Time and memory
    scale with the number of window cells.
    """
    _check_compatible(s1, s2)
    t1, t2 = s1.T, s2.T
    if window.shape != (t1, t2):
        raise InvalidWindow(f"window is for grid {window.shape}, signals have ({t1}, {t2})")
    lo, hi = window.lo, window.hi
    widths = hi - lo + 1
    offsets = np.concatenate(([0], np.cumsum(widths))).astype(np.intp)
    i_flat = np.repeat(np.arange(t1, dtype=np.intp), widths)
    j_flat = np.arange(offsets[-1], dtype=np.intp) - np.repeat(offsets[:-1] - lo, widths)
    diff = s1.samples[i_flat] - s2.samples[j_flat]
    flat = np.sqrt((diff * diff).sum(axis=1))
    total, pairs = _backend.solve(flat, lo, offsets, t2)
    return WarpingPath(pairs, total)


def coarsen(signal: Signal) -> Signal:
    """Halve time resolution by averaging adjacent sample pairs.

    Odd T keeps the final sample unaveraged; the output has ceil(T/2)
    samples. T must be at least 3 so the output is still a valid signal.
    """
    X = signal.samples
    T = signal.T
    if T < 3:
        raise ValueError(f"cannot coarsen below 2 samples (T={T})")
    even = T - (T % 2)
    head = 0.5 * (X[0:even:2] + X[1:even:2])
    if T % 2:
        return Signal(np.concatenate([head, X[-1:]], axis=0))
    return Signal(head)


def expand_window(path: WarpingPath, radius: int, t1: int, t2: int) -> Window:
    """Project a half-resolution path onto the (t1, t2) grid and dilate it.

    Each coarse cell (i, j) stands for the fine block rows {2i, 2i+1} and
    columns {2j, 2j+1} (clipped at odd tails); the block set is dilated by
    `radius` cells in every direction (Chebyshev) and clipped to the grid.
    Because the coarse path is monotone and continuous, the resulting
    per-row ranges already satisfy every Window invariant, gap-free.
    """
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    if t1 < 1 or t2 < 1:
        raise ValueError(f"grid shape must be positive, got ({t1}, {t2})")
    pi = path.pairs[:, 0]
    pj = path.pairs[:, 1]
    rows = np.arange(t1)
    # Cell k covers fine rows [2*pi[k] - radius, 2*pi[k] + 1 + radius]; since pi
    # is sorted, the covering cells of each row form a contiguous run.
    first = np.searchsorted(pi, -(-(rows - 1 - radius) // 2), side="left")
    last = np.searchsorted(pi, (rows + radius) // 2, side="right") - 1
    lo = np.clip(2 * pj[first] - radius, 0, t2 - 1).astype(np.intp)
    hi = np.clip(2 * pj[last] + 1 + radius, 0, t2 - 1).astype(np.intp)
    return Window(lo, hi, (t1, t2))


def fastdtw(s1: Signal, s2: Signal, radius: int = 1) -> WarpingPath:
    """Multiscale approximate alignment with an accuracy/radius dial.

    Recursively aligns coarsened copies, then re-solves at this resolution
    within the expanded window around the coarse path. Small inputs
    (min(T1, T2) <= radius + 2) are solved exactly, so radius >=
    max(T1, T2) reproduces dtw_full bit for bit; any radius returns a cost
    >= the exact one. Roughly O(T * radius) time.
    """
    _check_compatible(s1, s2)
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    if min(s1.T, s2.T) <= radius + 2:
        return dtw_full(s1, s2)
    shrunk = fastdtw(coarsen(s1), coarsen(s2), radius)
    window = expand_window(shrunk, radius, s1.T, s2.T)
    return dtw_windowed(s1, s2, window)


def normalized_error(cost: float, path: WarpingPath) -> float:
    """Accumulated cost divided by path length, comparable across signal sizes."""
    return cost / path.length
