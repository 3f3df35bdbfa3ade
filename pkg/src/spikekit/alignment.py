"""Spike-alignment targets: from a predicted image to a firing-probability map.

The pipeline, in order:

  1. min-max normalize the grayscale prediction (a flat image maps to 0.5
     everywhere, a neutral target);
  2. smooth with a normalized truncated-Gaussian kernel (std sigma_s,
     radius ceil(3 * sigma_s), replicate padding; skipped when sigma_s = 0);
  3. gamma-correct: p = smoothed ** gamma_c;
  4. add per-pixel uniform noise in [-noise_amp, +noise_amp] and clamp to
     [0, 1].

Synthetic spikes are then independent Bernoulli draws from the map, keyed
by (seed, t, pixel index) so the stream is schedule-independent.  Losses
compare a map against a ground-truth stream: mean binary cross-entropy
over every (t, i, j) bit, or mean squared error against the per-pixel
empirical firing rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError
from .rng import TAG_NOISE, TAG_SPIKES, CounterRng
from .spike_model import SpikeStream
from .synthesis import Image


@dataclass(frozen=True)
class AlignConfig:
    """Pipeline parameters; defaults lean toward identity."""

    sigma_s: float = 1.0
    gamma_c: float = 1.0
    noise_amp: float = 0.01
    eps: float = 1e-7

    def __post_init__(self):
        if not np.isfinite(self.sigma_s) or self.sigma_s < 0:
            raise DomainError(f"sigma_s must be >= 0, got {self.sigma_s}")
        if not np.isfinite(self.gamma_c) or self.gamma_c <= 0:
            raise DomainError(f"gamma_c must be > 0, got {self.gamma_c}")
        if not np.isfinite(self.noise_amp) or not 0 <= self.noise_amp <= 0.5:
            raise DomainError(f"noise_amp must lie in [0, 0.5], got {self.noise_amp}")
        if not np.isfinite(self.eps) or not 0 < self.eps < 0.5:
            raise DomainError(f"eps must lie in (0, 0.5), got {self.eps}")


@dataclass
class ProbabilityMap:
    """Per-pixel firing probability in [0, 1]."""

    p: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.p, dtype=np.float64)
        if arr.ndim != 2:
            raise DimensionError(f"probability map must be 2-D, got shape {arr.shape}")
        if not np.isfinite(arr).all() or (arr < 0).any() or (arr > 1).any():
            raise DomainError("probabilities must lie in [0, 1]")
        self.p = arr

    @property
    def height(self) -> int:
        return self.p.shape[0]

    @property
    def width(self) -> int:
        return self.p.shape[1]


def gaussian_kernel1d(sigma: float) -> np.ndarray:
    """Normalized Gaussian taps on [-ceil(3 sigma), +ceil(3 sigma)]."""
    if sigma <= 0:
        return np.array([1.0])
    radius = math.ceil(3.0 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_smooth(values: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian smoothing with replicate padding.

    Separable passes with per-axis edge clamping are exactly equivalent to
    the full 2-D replicate-padded correlation.
    """
    if sigma <= 0:
        return values
    from scipy import ndimage  # deferred: keeps CLI startup light

    k = gaussian_kernel1d(sigma)
    out = ndimage.correlate1d(values, k, axis=0, mode="nearest")
    return ndimage.correlate1d(out, k, axis=1, mode="nearest")


def probability_map(
    pred: Image, cfg: AlignConfig, rng: CounterRng | None = None
) -> ProbabilityMap:
    """Run the normalize / smooth / gamma / noise pipeline on a grayscale image."""
    if pred.channels != 1:
        raise DimensionError("probability_map expects a single-channel image")
    if cfg.noise_amp > 0 and rng is None:
        raise DomainError("noise_amp > 0 requires an rng")
    values = pred.values
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        norm = np.full_like(values, 0.5)
    else:
        norm = (values - lo) / (hi - lo)
    smooth = gaussian_smooth(norm, cfg.sigma_s)
    p = smooth**cfg.gamma_c
    if cfg.noise_amp > 0:
        u = rng.split(TAG_NOISE).uniform_at(np.arange(p.size, dtype=np.uint64))
        p = p + (2.0 * u.reshape(p.shape) - 1.0) * cfg.noise_amp
    return ProbabilityMap(np.clip(p, 0.0, 1.0))


def sample_spikes(p: ProbabilityMap, t_count: int, rng: CounterRng) -> SpikeStream:
    """t_count frames of independent Bernoulli(p) draws.

    Draw (t, i, j) is keyed by counter t * height * width + pixel index, so
    the result depends only on (seed, t_count, map shape).
    """
    if t_count < 1:
        raise DomainError(f"t_count must be >= 1, got {t_count}")
    n = int(t_count) * p.p.size
    u = rng.split(TAG_SPIKES).uniform_at(np.arange(n, dtype=np.uint64))
    bits = u.reshape(int(t_count), p.height, p.width) < p.p[None, :, :]
    return SpikeStream.from_bool(bits)


def _spike_counts(p: ProbabilityMap, gt: SpikeStream) -> np.ndarray:
    if (gt.height, gt.width) != (p.height, p.width):
        raise DimensionError(
            f"map {p.height}x{p.width} does not match stream {gt.height}x{gt.width}"
        )
    return gt.to_bool().sum(axis=0, dtype=np.int64)


def alignment_loss(p: ProbabilityMap, gt: SpikeStream, eps: float = 1e-7) -> float:
    """Mean binary cross-entropy of the map against every bit of gt.

    The map is broadcast across all t_count frames; probabilities are
    clamped to [eps, 1 - eps] before the logs.
    """
    if not 0 < eps < 0.5:
        raise DomainError(f"eps must lie in (0, 0.5), got {eps}")
    counts = _spike_counts(p, gt)
    t = gt.t_count
    p_hat = np.clip(p.p, eps, 1.0 - eps)
    total = -(counts * np.log(p_hat) + (t - counts) * np.log1p(-p_hat)).sum()
    return float(total / (t * p.p.size))


def rate_loss(p: ProbabilityMap, gt: SpikeStream) -> float:
    """Mean squared error between the map and gt's empirical firing rate."""
    counts = _spike_counts(p, gt)
    rate = counts / gt.t_count
    diff = p.p - rate
    return float(np.mean(diff * diff))
