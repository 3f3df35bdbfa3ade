"""Integrate-and-fire spike camera model.

Each pixel accumulates incoming intensity and fires a binary spike when the
accumulator reaches the activation threshold, keeping only the surplus:

    fire at step t      iff  A[t-1] + I[t] >= v_th
    A[t] = (A[t-1] + I[t]) mod v_th

The mod is evaluated with fmod, which is exact in IEEE arithmetic, so for
the usual regime A + I < 2 * v_th it is literally "subtract v_th once".
A step emits at most one spike even if A + I >= 2 * v_th; the surplus
beyond one threshold crossing is folded back by the mod.  Intensities are
dimensionless unit floats (8-bit inputs are mapped byte / 255), so v_th
shares their scale.

Simulation is a pure function of (sequence, config, initial state): pixels
evolve independently and there is no hidden randomness.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, DomainError

_POPCOUNT = np.unpackbits(np.arange(256, dtype=np.uint8)[:, None], axis=1).sum(axis=1).astype(np.int64)


class ClampWarning(UserWarning):
    """Calibration clamped intensities that would reach the threshold in one step."""


@dataclass(frozen=True)
class SimulatorConfig:
    """Camera configuration: the positive activation threshold v_th."""

    v_th: float = 1.0

    def __post_init__(self):
        v = self.v_th
        if not isinstance(v, (int, float, np.floating, np.integer)) or not np.isfinite(v) or v <= 0:
            raise DomainError(f"v_th must be a finite positive real, got {v!r}")
        object.__setattr__(self, "v_th", float(v))


@dataclass
class IntensityFrame:
    """One H x W frame of non-negative, finite intensities (float64)."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2:
            raise DimensionError(f"intensity frame must be 2-D, got shape {arr.shape}")
        if arr.size == 0:
            raise DimensionError("intensity frame must be non-empty")
        if not np.isfinite(arr).all():
            raise DomainError("intensity frame contains non-finite values")
        if (arr < 0).any():
            raise DomainError("intensity frame contains negative values")
        self.values = arr

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


@dataclass
class IntensitySequence:
    """Time-ordered stack of intensity frames, shape (t_count, H, W)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 3:
            raise DimensionError(f"intensity sequence must be 3-D (t, h, w), got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1 or arr.shape[2] < 1:
            raise DimensionError(f"intensity sequence has empty axis: shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise DomainError("intensity sequence contains non-finite values")
        if (arr < 0).any():
            raise DomainError("intensity sequence contains negative values")
        self.data = arr

    @classmethod
    def from_frames(cls, frames: Sequence[IntensityFrame]) -> "IntensitySequence":
        if len(frames) == 0:
            raise DimensionError("intensity sequence needs at least one frame")
        shapes = {f.values.shape for f in frames}
        if len(shapes) != 1:
            raise DimensionError(f"frames disagree on shape: {sorted(shapes)}")
        return cls(np.stack([f.values for f in frames]))

    @classmethod
    def replicate(cls, frame: IntensityFrame, t_count: int) -> "IntensitySequence":
        """t_count copies of one frame as a zero-copy broadcast view."""
        if t_count < 1:
            raise DomainError(f"t_count must be >= 1, got {t_count}")
        seq = cls.__new__(cls)
        seq.data = np.broadcast_to(frame.values, (int(t_count),) + frame.values.shape)
        return seq

    @property
    def t_count(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    def frame(self, t: int) -> IntensityFrame:
        return IntensityFrame(self.data[t])


@dataclass
class AccumulatorState:
    """Per-pixel residual charge; 0 <= residual < v_th after every step."""

    residuals: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.residuals, dtype=np.float64)
        if arr.ndim != 2:
            raise DimensionError(f"accumulator state must be 2-D, got shape {arr.shape}")
        if not np.isfinite(arr).all() or (arr < 0).any():
            raise DomainError("residuals must be finite and non-negative")
        self.residuals = arr

    @classmethod
    def zeros(cls, height: int, width: int) -> "AccumulatorState":
        return cls(np.zeros((height, width), dtype=np.float64))

    @property
    def height(self) -> int:
        return self.residuals.shape[0]

    @property
    def width(self) -> int:
        return self.residuals.shape[1]


class SpikeStream:
    """Bit-packed binary spike tensor of shape (t_count, height, width).

    Bit layout: t-major, then row-major, then column order; MSB-first within
    each byte; every frame independently padded to a whole byte with zero
    bits.  The payload is held as a (t_count, frame_nbytes) uint8 array so
    single frames can be sliced without bit shifting.
    """

    __slots__ = ("width", "height", "t_count", "payload")

    def __init__(self, width: int, height: int, t_count: int, payload: np.ndarray):
        width, height, t_count = int(width), int(height), int(t_count)
        if width < 1 or height < 1 or t_count < 1:
            raise DimensionError(f"stream dimensions must be >= 1, got {width}x{height}x{t_count}")
        frame_nbytes = (width * height + 7) // 8
        payload = np.asarray(payload, dtype=np.uint8)
        if payload.shape != (t_count, frame_nbytes):
            raise DimensionError(
                f"payload shape {payload.shape} does not match expected ({t_count}, {frame_nbytes})"
            )
        pad_bits = t_count * frame_nbytes * 8 - t_count * width * height
        if pad_bits and np.unpackbits(payload, axis=1)[:, width * height:].any():
            raise DomainError("frame padding bits must be zero")
        self.width = width
        self.height = height
        self.t_count = t_count
        self.payload = payload

    @property
    def frame_nbytes(self) -> int:
        return (self.width * self.height + 7) // 8

    @classmethod
    def from_bool(cls, bits: np.ndarray) -> "SpikeStream":
        """Pack a (t, h, w) boolean array."""
        bits = np.asarray(bits)
        if bits.ndim != 3:
            raise DimensionError(f"expected a 3-D (t, h, w) array, got shape {bits.shape}")
        t, h, w = bits.shape
        flat = bits.reshape(t, h * w).astype(np.uint8)
        return cls(w, h, t, np.packbits(flat, axis=1))

    def to_bool(self) -> np.ndarray:
        """Unpack to a (t, h, w) boolean array."""
        flat = np.unpackbits(self.payload, axis=1, count=self.width * self.height)
        return flat.reshape(self.t_count, self.height, self.width).astype(bool)

    def frame(self, t: int) -> np.ndarray:
        """Unpack frame t to an (h, w) boolean array."""
        self._check_t(t)
        flat = np.unpackbits(self.payload[t], count=self.width * self.height)
        return flat.reshape(self.height, self.width).astype(bool)

    def ones_count(self) -> int:
        """Number of set bits (padding is zero by invariant)."""
        return int(_POPCOUNT[self.payload].sum())

    def _check_t(self, t: int) -> None:
        if not 0 <= t < self.t_count:
            raise DomainError(f"step index {t} out of range [0, {self.t_count})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpikeStream):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and self.t_count == other.t_count
            and np.array_equal(self.payload, other.payload)
        )

    def __repr__(self) -> str:
        return f"SpikeStream({self.width}x{self.height}, t_count={self.t_count})"


def _step_kernel(residuals: np.ndarray, frame: np.ndarray, v_th: float):
    """One integrate-and-fire update; shared by simulate and simulate_step."""
    charged = residuals + frame
    fired = charged >= v_th
    new_res = np.where(fired, np.fmod(charged, v_th), charged)
    return fired, new_res


def simulate_step(
    state: AccumulatorState, frame: IntensityFrame, cfg: SimulatorConfig
) -> tuple[np.ndarray, AccumulatorState]:
    """Advance one time step; returns (spike bits (h, w) bool, new state)."""
    if state.residuals.shape != frame.values.shape:
        raise DimensionError(
            f"state shape {state.residuals.shape} != frame shape {frame.values.shape}"
        )
    if (state.residuals >= cfg.v_th).any():
        raise DomainError("initial residuals must be < v_th")
    fired, new_res = _step_kernel(state.residuals, frame.values, cfg.v_th)
    return fired, AccumulatorState(new_res)


def simulate(
    seq: IntensitySequence,
    cfg: SimulatorConfig,
    init: Optional[AccumulatorState] = None,
) -> tuple[SpikeStream, AccumulatorState]:
    """Run the camera over a whole sequence.

    Bit-identical to folding simulate_step over the frames; the returned
    state allows chaining over further sequences.
    """
    t, h, w = seq.data.shape
    if init is None:
        residuals = np.zeros((h, w), dtype=np.float64)
    else:
        if init.residuals.shape != (h, w):
            raise DimensionError(
                f"init shape {init.residuals.shape} != sequence frame shape {(h, w)}"
            )
        if (init.residuals >= cfg.v_th).any():
            raise DomainError("initial residuals must be < v_th")
        residuals = init.residuals.copy()
    bits = np.empty((t, h, w), dtype=bool)
    for i in range(t):
        bits[i], residuals = _step_kernel(residuals, seq.data[i], cfg.v_th)
    return SpikeStream.from_bool(bits), AccumulatorState(residuals)


def coverage(stream: SpikeStream) -> float:
    """Fraction of set bits: ones / (t_count * width * height)."""
    return stream.ones_count() / (stream.t_count * stream.width * stream.height)


def calibrate_coverage(
    image: IntensityFrame, t_count: int, target: float, cfg: SimulatorConfig
) -> IntensitySequence:
    """Static sequence whose simulated long-run coverage approaches target.

    The image is replicated t_count times and globally scaled by
    s = target * v_th / mean(image); a pixel then fires about
    (scaled / v_th) of the time.  Scaled values reaching v_th are clamped
    just below it (a single step may emit only one spike, so values at or
    above v_th would under-report their intensity); clamping raises
    ClampWarning.
    """
    if not 0 < target < 1:
        raise DomainError(f"target coverage must be in (0, 1), got {target}")
    if t_count < 1:
        raise DomainError(f"t_count must be >= 1, got {t_count}")
    mean = float(image.values.mean())
    if mean == 0.0:
        raise DomainError("cannot calibrate an all-zero image (scale undefined)")
    scaled = image.values * (target * cfg.v_th / mean)
    clamp_mask = scaled >= cfg.v_th
    if clamp_mask.any():
        scaled = np.where(clamp_mask, np.nextafter(cfg.v_th, 0.0), scaled)
        warnings.warn(
            f"calibration clamped {int(clamp_mask.sum())} pixel(s) to just below v_th",
            ClampWarning,
            stacklevel=2,
        )
    return IntensitySequence.replicate(IntensityFrame(scaled), t_count)
