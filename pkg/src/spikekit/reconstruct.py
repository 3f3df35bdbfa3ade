"""Dense grayscale reconstruction from spike streams.

Two classic estimators:

  TFI (texture from interval):  value = v_th / d, where d is the latency,
  the number of steps back to the most recent spike at or before the query
  step (a spike at the query step gives d = 1, so d >= 1 always).

  TFP (texture from playback):  value = N / w_eff * c, where N counts the
  spikes in the trailing window [max(0, t - w + 1), t] and w_eff is the
  actual window length after clipping at the stream start.  Renormalizing
  by w_eff keeps the rate estimate unbiased near t = 0.

Pixels that have never spiked have no latency; they are masked out and
reconstruct to 0 under TFI.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError
from .spike_model import SimulatorConfig, SpikeStream


@dataclass
class LatencyMap:
    """Per-pixel steps since the last spike (>= 1 where defined)."""

    latency: np.ndarray
    defined: np.ndarray

    def __post_init__(self):
        lat = np.asarray(self.latency, dtype=np.int64)
        mask = np.asarray(self.defined, dtype=bool)
        if lat.ndim != 2 or lat.shape != mask.shape:
            raise DimensionError(
                f"latency {lat.shape} and defined mask {mask.shape} must be equal 2-D shapes"
            )
        if (lat[mask] < 1).any():
            raise DomainError("latency must be >= 1 wherever defined")
        self.latency = lat
        self.defined = mask

    @property
    def height(self) -> int:
        return self.latency.shape[0]

    @property
    def width(self) -> int:
        return self.latency.shape[1]


@dataclass
class ReconstructedFrame:
    """H x W frame of non-negative reconstructed brightness values."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2:
            raise DimensionError(f"reconstructed frame must be 2-D, got shape {arr.shape}")
        if not np.isfinite(arr).all() or (arr < 0).any():
            raise DomainError("reconstructed values must be finite and non-negative")
        self.values = arr

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


def latency_at(stream: SpikeStream, t: int) -> LatencyMap:
    """Latency to the most recent spike at step <= t for every pixel.

    A spike at t itself yields latency 1; pixels with no spike in [0, t]
    are undefined (mask False, latency slot 0).
    """
    stream._check_t(t)
    window = stream.to_bool()[: t + 1]
    # argmax over the reversed window finds the most recent spike.
    back = np.argmax(window[::-1], axis=0)
    defined = window.any(axis=0)
    latency = np.where(defined, back + 1, 0)
    return LatencyMap(latency, defined)


def tfi(stream: SpikeStream, t: int, cfg: SimulatorConfig) -> ReconstructedFrame:
    """Texture-from-interval frame at step t: v_th / latency, 0 where undefined."""
    lm = latency_at(stream, t)
    safe = np.maximum(lm.latency, 1)
    values = np.where(lm.defined, cfg.v_th / safe, 0.0)
    return ReconstructedFrame(values)


def tfp(stream: SpikeStream, t: int, window: int, scale: float) -> ReconstructedFrame:
    """Texture-from-playback frame at step t: spike rate over a trailing window.

    value = N / w_eff * scale with N the spike count in
    [max(0, t - window + 1), t] and w_eff that window's actual length.
    """
    stream._check_t(t)
    if window < 1:
        raise DomainError(f"window must be >= 1, got {window}")
    if not np.isfinite(scale) or scale <= 0:
        raise DomainError(f"scale must be a finite positive real, got {scale}")
    start = max(0, t - int(window) + 1)
    w_eff = t - start + 1
    counts = stream.to_bool()[start : t + 1].sum(axis=0, dtype=np.int64)
    return ReconstructedFrame(counts / w_eff * scale)
