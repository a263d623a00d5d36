"""Monotone time warps of the unit interval.

A warp is a sampled strictly increasing C^1 map [0, 1] -> [0, 1] fixing both
endpoints; such maps form a group under composition, which is what makes
"the same signal on a different clock" a well-defined equivalence. This
module represents sampled warps, composes them, and draws random ones from a
smooth exponentiated-Fourier family.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateWarp
from .signals import uniform_grid

__all__ = ["Warp", "identity", "compose", "random_warp"]

# Random warps keep max(slope)/min(slope) at or below this, so warped signals
# stay resolvable by finite differences at desk-scale T.
SLOPE_RATIO_LIMIT = 20.0
FOURIER_MODES = 8


@dataclass(frozen=True)
class Warp:
    """Sampled strictly increasing map of [0, 1] onto itself.

    ``values[i]`` is the warp at grid time i/(T-1); endpoints are exactly 0
    and 1 and consecutive values strictly increase. ``derivative_floor`` is
    metadata: the minimum discrete slope, recorded at construction.
    """

    values: np.ndarray
    derivative_floor: float | None = None

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.shape[0] < 2:
            raise ValueError("warp needs a 1-D array of at least 2 values")
        if not np.all(np.isfinite(vals)):
            raise ValueError("warp values must be finite")
        if vals[0] != 0.0 or vals[-1] != 1.0:
            raise ValueError(
                f"warp endpoints must be exactly 0 and 1, got {vals[0]!r}, {vals[-1]!r}"
            )
        steps = np.diff(vals)
        if np.any(steps <= 0.0):
            raise DegenerateWarp("warp values must be strictly increasing")
        floor = self.derivative_floor
        if floor is None:
            floor = float(steps.min() * (vals.shape[0] - 1))
        if not (floor > 0.0):
            raise ValueError(f"derivative_floor must be positive, got {floor!r}")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "derivative_floor", float(floor))

    @property
    def T(self) -> int:
        return self.values.shape[0]

    @property
    def grid(self) -> np.ndarray:
        return uniform_grid(self.T)


def identity(T: int) -> Warp:
    """The identity warp on a T-point grid (the group identity)."""
    return Warp(uniform_grid(T), derivative_floor=1.0)


def compose(outer: Warp, inner: Warp) -> Warp:
    """(outer o inner)(t) = outer(inner(t)), sampled on inner's grid.

    The outer warp is evaluated by linear interpolation at inner's values,
    so the two warps may have different sample counts. Raises DegenerateWarp
    if the sampled composition is no longer strictly increasing.
    """
    vals = np.interp(inner.values, uniform_grid(outer.T), outer.values)
    if np.any(np.diff(vals) <= 0.0):
        raise DegenerateWarp("composition collapsed below strict monotonicity")
    return Warp(vals)


def random_warp(T: int, seed: int, roughness: float = 0.5) -> Warp:
    """Draw a smooth random warp, deterministic in (T, seed, roughness).

    Construction: 8 random Fourier coefficients scaled by roughness form a
    log-speed profile; the exponentiated profile is rescaled (if needed) so
    max/min slope stays within SLOPE_RATIO_LIMIT, then integrated by the
    trapezoid rule and normalized to end exactly at 1. The result is C^1,
    strictly monotone, with exact endpoints for every seed.

    roughness in (0, 1] sets how far the warp departs from the identity;
    as roughness -> 0 the warp tends to the identity.
    """
    if T < 2:
        raise ValueError(f"warp needs at least 2 points, got {T}")
    if not (0.0 < roughness <= 1.0):
        raise ValueError(f"roughness must be in (0, 1], got {roughness!r}")
    rng = np.random.default_rng(seed)
    modes = np.arange(1, FOURIER_MODES + 1)
    a = rng.standard_normal(FOURIER_MODES)
    b = rng.standard_normal(FOURIER_MODES)
    phase = np.pi * np.outer(uniform_grid(T), modes)
    log_speed = roughness * (np.sin(phase) @ a + np.cos(phase) @ b)
    spread = log_speed.max() - log_speed.min()
    limit = np.log(SLOPE_RATIO_LIMIT)
    if spread > limit:
        log_speed *= limit / spread
    speed = np.exp(log_speed)
    increments = (speed[1:] + speed[:-1]) * (0.5 / (T - 1))
    accum = np.concatenate(([0.0], np.cumsum(increments)))
    vals = accum / accum[-1]
    floor = float(np.diff(vals).min() * (T - 1))
    return Warp(vals, derivative_floor=floor)
