"""Discrete signals on the uniform unit-interval time grid.

A signal is a (T, n) array of real samples: row i holds the value of a curve
in R^n at grid time t_i = i/(T-1). The grid is always implicit and uniform;
every operation in the package consumes signals through this module.

Provides the derivative operator (4th-order finite differences), resampling
under a time warp (piecewise-linear, per dimension), the mean row-distance
metric, and headerless CSV round-tripping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CsvParseError, IncompatibleSignals

__all__ = [
    "Signal",
    "uniform_grid",
    "derivative",
    "resample",
    "pairwise_error",
    "read_csv",
    "write_csv",
]

# Warp values may overshoot [0, 1] by at most this much before resampling
# refuses them; anything smaller is clipped.
DOMAIN_TOL = 1e-12


@dataclass(frozen=True)
class Signal:
    """Immutable (T, n) sample matrix of a curve on the uniform grid.

    Row i is the curve value at t_i = i/(T-1). Requires T >= 2, n >= 1, and
    finite entries. 1-D input is treated as a single-dimension signal. The
    stored array is read-only, so instances are safe to share across threads.
    """

    samples: np.ndarray

    def __post_init__(self):
        arr = np.array(self.samples, dtype=np.float64, order="C")
        if arr.ndim == 1:
            arr = arr[:, np.newaxis]
        if arr.ndim != 2:
            raise ValueError(f"signal samples must be 1-D or 2-D, got ndim={arr.ndim}")
        if arr.shape[0] < 2:
            raise ValueError(f"signal needs at least 2 time instances, got {arr.shape[0]}")
        if arr.shape[1] < 1:
            raise ValueError("signal needs at least 1 dimension")
        if not np.all(np.isfinite(arr)):
            raise ValueError("signal samples must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    @property
    def T(self) -> int:
        return self.samples.shape[0]

    @property
    def n(self) -> int:
        return self.samples.shape[1]

    @property
    def grid(self) -> np.ndarray:
        return uniform_grid(self.T)

    def __eq__(self, other):
        if not isinstance(other, Signal):
            return NotImplemented
        return self.samples.shape == other.samples.shape and np.array_equal(
            self.samples, other.samples
        )


def uniform_grid(T: int) -> np.ndarray:
    """The uniform time grid {i/(T-1)} on [0, 1]. Requires T >= 2."""
    if T < 2:
        raise ValueError(f"grid needs at least 2 points, got {T}")
    return np.arange(T, dtype=np.float64) / (T - 1)


def derivative(signal: Signal) -> np.ndarray:
    """Estimate dX/dt column-wise on the uniform grid, returned as (T, n).

    Interior points use the 5-point 4th-order central stencil; the two points
    at each boundary use the matching 4th-order one-sided stencils, so the
    result is exact (to roundoff) on polynomials up to degree 4. Signals with
    T < 5 fall back to 2nd-order differences.
    """
    X = signal.samples
    T = signal.T
    h = 1.0 / (T - 1)
    if T < 5:
        return np.gradient(X, h, axis=0, edge_order=min(2, T - 1))
    D = np.empty_like(X)
    D[2:-2] = (-X[4:] + 8.0 * X[3:-1] - 8.0 * X[1:-3] + X[:-4]) / (12.0 * h)
    D[0] = (-25.0 * X[0] + 48.0 * X[1] - 36.0 * X[2] + 16.0 * X[3] - 3.0 * X[4]) / (12.0 * h)
    D[1] = (-3.0 * X[0] - 10.0 * X[1] + 18.0 * X[2] - 6.0 * X[3] + X[4]) / (12.0 * h)
    D[-2] = (3.0 * X[-1] + 10.0 * X[-2] - 18.0 * X[-3] + 6.0 * X[-4] - X[-5]) / (12.0 * h)
    D[-1] = (25.0 * X[-1] - 48.0 * X[-2] + 36.0 * X[-3] - 16.0 * X[-4] + 3.0 * X[-5]) / (12.0 * h)
    return D


def resample(signal: Signal, warp) -> Signal:
    """Evaluate the signal at warped times: output row i is X(tau(t_i)).

    ``warp`` may be a Warp or any 1-D array of times in [0, 1]; each of the n
    dimensions is interpolated linearly and independently. Queries that land
    exactly on grid nodes reproduce the stored samples bit-for-bit. Values
    outside [0, 1] by more than 1e-12 raise; smaller excursions are clipped.
    """
    tau = np.asarray(getattr(warp, "values", warp), dtype=np.float64)
    if tau.ndim != 1 or tau.shape[0] < 1:
        raise ValueError("warp values must be a non-empty 1-D array")
    if not np.all(np.isfinite(tau)):
        raise ValueError("warp values must be finite")
    if tau.min() < -DOMAIN_TOL or tau.max() > 1.0 + DOMAIN_TOL:
        raise ValueError(
            f"warp values outside [0, 1]: range [{tau.min():g}, {tau.max():g}]"
        )
    tau = np.clip(tau, 0.0, 1.0)
    grid = uniform_grid(signal.T)
    # side="right" puts exact node hits at weight 0 on their own node.
    idx = np.searchsorted(grid, tau, side="right") - 1
    np.clip(idx, 0, signal.T - 2, out=idx)
    w = (tau - grid[idx]) / (grid[idx + 1] - grid[idx])
    X = signal.samples
    out = X[idx] * (1.0 - w)[:, np.newaxis] + X[idx + 1] * w[:, np.newaxis]
    return Signal(out)


def pairwise_error(s1: Signal, s2: Signal) -> float:
    """Mean Euclidean distance between corresponding rows, (1/T) sum ||x1_i - x2_i||."""
    if s1.T != s2.T or s1.n != s2.n:
        raise IncompatibleSignals(
            f"shape mismatch: ({s1.T}, {s1.n}) vs ({s2.T}, {s2.n})"
        )
    diff = s1.samples - s2.samples
    return float(np.mean(np.sqrt((diff * diff).sum(axis=1))))


def write_csv(signal: Signal, path) -> None:
    """Write one time instance per row, n comma-separated values, no header.

    Formatting keeps 17 significant digits so a read_csv round trip is
    bit-faithful.
    """
    np.savetxt(path, signal.samples, fmt="%.17g", delimiter=",")


def read_csv(path) -> Signal:
    """Parse a headerless CSV of samples into a Signal.

    Ragged rows, non-numeric or non-finite fields, and files with fewer than
    2 rows raise CsvParseError carrying the 1-based row number.
    """
    rows = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if width is None:
                width = len(parts)
            elif len(parts) != width:
                raise CsvParseError(
                    f"{path}: row {lineno}: expected {width} fields, got {len(parts)}",
                    row=lineno,
                )
            try:
                values = np.asarray(parts, dtype=np.float64)
            except ValueError as exc:
                raise CsvParseError(
                    f"{path}: row {lineno}: non-numeric field", row=lineno
                ) from exc
            if not np.all(np.isfinite(values)):
                raise CsvParseError(
                    f"{path}: row {lineno}: non-finite value", row=lineno
                )
            rows.append(values)
    if len(rows) < 2:
        raise CsvParseError(
            f"{path}: need at least 2 rows, got {len(rows)}", row=len(rows)
        )
    return Signal(np.vstack(rows))
