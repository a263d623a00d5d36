"""Synthetic smooth test signals and time-warped pairs of them.

Templates are random band-limited Fourier series with coefficients decaying
as 1/k^2, which keeps them smooth enough for the 4th-order derivative
stencil to behave. Each template is centered per dimension and scaled to
unit root-mean-square amplitude overall, so error magnitudes are comparable
across kinds and dimensions.

Constant-speed reparameterization is only well-conditioned when the speed
stays bounded away from zero (near-stationary points make the optimal clock
stride across many samples at once). Draws whose minimum speed dips below
SPEED_FLOOR_RATIO of their mean speed are therefore redrawn from the same
seeded stream — deterministically, and rarely more than once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .signals import Signal, derivative, resample, uniform_grid
from .warps import random_warp

__all__ = ["TemplateSpec", "generate_template", "warped_pair"]

KINDS = ("trajectory3d", "highdim")

SPEED_FLOOR_RATIO = 0.15
MAX_DRAWS = 64


@dataclass(frozen=True)
class TemplateSpec:
    """A deterministic recipe for one template signal.

    kind   "trajectory3d" (a curve in R^3, n fixed at 3) or "highdim"
           (a wide vectorized signal, n >= 2)
    T      number of samples, >= 5 so derivatives are trustworthy
    n      ambient dimension
    seed   RNG seed; equal specs yield bit-identical signals
    modes  Fourier modes per dimension; more modes = wigglier template
    """

    kind: str
    T: int
    n: int
    seed: int
    modes: int = 6

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown template kind {self.kind!r}; expected one of {KINDS}")
        if self.T < 5:
            raise ConfigError(f"T must be >= 5, got {self.T}")
        if self.kind == "trajectory3d" and self.n != 3:
            raise ConfigError(f"trajectory3d requires n=3, got n={self.n}")
        if self.kind == "highdim" and self.n < 2:
            raise ConfigError(f"highdim requires n >= 2, got n={self.n}")
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if self.modes < 1:
            raise ConfigError(f"modes must be >= 1, got {self.modes}")


def generate_template(spec: TemplateSpec) -> Signal:
    """Draw the smooth random template described by the spec.

    Per dimension: sum over k = 1..modes of (a_k sin(pi k t) +
    b_k cos(pi k t)) / k^2 with standard normal a, b, then center each
    dimension and scale the whole signal to unit RMS. Candidates whose speed
    dips below SPEED_FLOOR_RATIO of its mean are redrawn (up to MAX_DRAWS,
    then the best candidate seen wins). Deterministic in the spec.
    """
    rng = np.random.default_rng(spec.seed)
    t = uniform_grid(spec.T)
    k = np.arange(1, spec.modes + 1, dtype=np.float64)
    phase = np.pi * np.outer(t, k)  # (T, modes)
    sin, cos = np.sin(phase), np.cos(phase)
    decay = 1.0 / (k * k)
    best, best_ratio = None, -1.0
    for _ in range(MAX_DRAWS):
        a = rng.standard_normal((spec.modes, spec.n)) * decay[:, np.newaxis]
        b = rng.standard_normal((spec.modes, spec.n)) * decay[:, np.newaxis]
        X = sin @ a + cos @ b
        X -= X.mean(axis=0)
        rms = float(np.sqrt((X * X).mean()))
        if rms > 0.0:
            X /= rms
        candidate = Signal(X)
        speed = np.sqrt((derivative(candidate) ** 2).sum(axis=1))
        ratio = float(speed.min() / speed.mean()) if speed.mean() > 0.0 else 0.0
        if ratio >= SPEED_FLOOR_RATIO:
            return candidate
        if ratio > best_ratio:
            best, best_ratio = candidate, ratio
    return best


def warped_pair(template: Signal, seed: int, roughness: float = 0.5):
    """The template observed under two independent random time warps.

    Returns (resample(template, w1), resample(template, w2)) where the warps
    use the derived seeds 2*seed+1 and 2*seed+2, so distinct pair seeds never
    share a warp stream and the pair is deterministic in (template, seed).
    """
    w1 = random_warp(template.T, 2 * seed + 1, roughness=roughness)
    w2 = random_warp(template.T, 2 * seed + 2, roughness=roughness)
    return resample(template, w1), resample(template, w2)
