"""Closed-form reparameterization of signals to the constant-speed timescale.

Every sufficiently smooth signal with positive speed has a canonical clock:
the one on which it moves at constant speed (normalized arc length). Among
all monotone reparameterizations, that clock globally minimizes the
integrated squared speed, a classical calculus-of-variations fact; the
minimum value equals the squared total arc length. The minimizing warp has a
closed form: invert the normalized cumulative integral of the speed. This
module computes that chain in O(T) per signal:

    squared_speed -> arc_length_profile -> invert_monotone -> resample

No iterative optimization is involved, which is what makes alignment by
reparameterization linear-time, in contrast to dynamic-programming aligners.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateWarp, IncompatibleSignals
from .signals import Signal, derivative, pairwise_error, resample, uniform_grid, write_csv
from .warps import Warp, identity

__all__ = [
    "ReparamResult",
    "squared_speed",
    "arc_length_profile",
    "invert_monotone",
    "cost_functional",
    "reparameterize",
    "align_pair",
]

# Relative floor applied to the speed profile so the cumulative integral
# stays strictly increasing across zero-speed samples; perturbs the total
# arc length by at most the same relative amount.
SPEED_FLOOR = 1e-9


@dataclass(frozen=True)
class ReparamResult:
    """Outcome of reparameterizing one signal to its constant-speed clock.

    warp             the optimal time map tau; input composed with it is
                     constant-speed
    signal           the input resampled at the warp
    total_arc_length the integral of speed over [0, 1]; the minimal cost is
                     its square
    cost_input       integrated squared speed of the input on its own clock
    cost_reparam     integrated squared speed of the reparameterized signal
    degenerate       True when the input was constant (zero speed everywhere)
                     and was returned unchanged under the identity warp
    """

    warp: Warp
    signal: Signal
    total_arc_length: float
    cost_input: float
    cost_reparam: float
    degenerate: bool = False

    def save(self, directory) -> None:
        """Write tau_star.csv, reparameterized.csv, and summary.json."""
        os.makedirs(directory, exist_ok=True)
        write_csv(Signal(self.warp.values[:, np.newaxis]), os.path.join(directory, "tau_star.csv"))
        write_csv(self.signal, os.path.join(directory, "reparameterized.csv"))
        summary = {
            "c": self.total_arc_length,
            "j_input": self.cost_input,
            "j_ust": self.cost_reparam,
            "degenerate": self.degenerate,
        }
        with open(os.path.join(directory, "summary.json"), "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")


def squared_speed(signal: Signal) -> np.ndarray:
    """Per-sample squared speed ||dX/dt||^2, length T, all entries >= 0."""
    d = derivative(signal)
    return (d * d).sum(axis=1)


def arc_length_profile(g) -> tuple[np.ndarray, float, bool]:
    """Normalized cumulative integral of sqrt(g) and the total arc length.

    Returns (profile, total, degenerate). The profile is strictly increasing
    from exactly 0 to exactly 1; the total is the trapezoid integral of the
    (floored) speed. A profile of an all-zero g cannot be normalized, so that
    case falls back to the uniform grid with total 1.0 and degenerate=True.
    """
    g = np.asarray(g, dtype=np.float64)
    if g.ndim != 1 or g.shape[0] < 2:
        raise ValueError("squared-speed array must be 1-D with at least 2 entries")
    if not np.all(np.isfinite(g)):
        raise ValueError("squared-speed array must be finite")
    if g.min() < 0.0:
        raise ValueError("squared-speed array must be non-negative")
    T = g.shape[0]
    speed = np.sqrt(g)
    peak = speed.max()
    if peak == 0.0:
        return uniform_grid(T), 1.0, True
    np.maximum(speed, SPEED_FLOOR * peak, out=speed)
    increments = (speed[1:] + speed[:-1]) * (0.5 / (T - 1))
    accum = np.concatenate(([0.0], np.cumsum(increments)))
    total = float(accum[-1])
    return accum / total, total, False


def invert_monotone(profile) -> Warp:
    """Invert a strictly increasing profile with F(0)=0, F(1)=1 into a warp.

    Piecewise-linear inversion: for each grid time t_i the bracketing segment
    of the profile is located and interpolated, one merged O(T) sweep overall.
    Endpoint values may deviate from {0, 1} by at most 1e-12.
    """
    F = np.asarray(profile, dtype=np.float64)
    if F.ndim != 1 or F.shape[0] < 2:
        raise ValueError("profile must be 1-D with at least 2 entries")
    if not np.all(np.isfinite(F)):
        raise ValueError("profile must be finite")
    if abs(F[0]) > 1e-12 or abs(F[-1] - 1.0) > 1e-12:
        raise ValueError(f"profile must run from 0 to 1, got [{F[0]!r}, {F[-1]!r}]")
    if np.any(np.diff(F) <= 0.0):
        raise DegenerateWarp("profile is not strictly increasing; cannot invert")
    grid = uniform_grid(F.shape[0])
    tau = np.interp(grid, F, grid)
    tau[0] = 0.0
    tau[-1] = 1.0
    return Warp(tau)


def cost_functional(signal: Signal) -> float:
    """Integrated squared speed of the signal on its own clock (trapezoid rule)."""
    g = squared_speed(signal)
    return float(np.trapezoid(g, dx=1.0 / (signal.T - 1)))


def reparameterize(signal: Signal) -> ReparamResult:
    """Map a signal to its constant-speed clock via the closed-form warp.

    Chains squared_speed -> arc_length_profile -> invert_monotone ->
    resample and evaluates the cost functional before and after. A constant
    signal is returned unchanged under the identity warp with the degenerate
    flag set. T >= 5 is recommended so the derivative stencil has full order.
    """
    g = squared_speed(signal)
    cost_in = float(np.trapezoid(g, dx=1.0 / (signal.T - 1)))
    profile, total, degenerate = arc_length_profile(g)
    if degenerate:
        return ReparamResult(
            warp=identity(signal.T),
            signal=signal,
            total_arc_length=total,
            cost_input=cost_in,
            cost_reparam=cost_in,
            degenerate=True,
        )
    warp = invert_monotone(profile)
    out = resample(signal, warp)
    return ReparamResult(
        warp=warp,
        signal=out,
        total_arc_length=total,
        cost_input=cost_in,
        cost_reparam=cost_functional(out),
        degenerate=False,
    )


def align_pair(s1: Signal, s2: Signal) -> tuple[float, ReparamResult, ReparamResult]:
    """Reparameterize both signals independently and measure their distance.

    Returns (error, r1, r2) where error is the mean row distance between the
    two constant-speed versions. The two reparameterizations are independent
    of each other, so callers may evaluate them concurrently.
    """
    if s1.T != s2.T or s1.n != s2.n:
        raise IncompatibleSignals(
            f"shape mismatch: ({s1.T}, {s1.n}) vs ({s2.T}, {s2.n})"
        )
    r1 = reparameterize(s1)
    r2 = reparameterize(s2)
    return pairwise_error(r1.signal, r2.signal), r1, r2
