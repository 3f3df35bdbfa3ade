"""Synthetic dual-modality dataset construction.

Builds the deterministic halves of a blur + spike training pair: frame
averaging for motion blur, linear motion-blur kernels, replicate-padded
convolution, BT.601 grayscale, color fade toward grayscale by a mixing
ratio, clamped-Gaussian ratio sampling, and latent mixing.

All pixel math happens in the unit-float domain; quantization occurs only
at file export.  Randomness always comes from an explicit CounterRng, so
any dataset recipe is reproducible from its seed alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DimensionError, DomainError
from .rng import TAG_KERNEL, CounterRng

# BT.601 luma weights.
_LUMA = np.array([0.299, 0.587, 0.114])


@dataclass
class Image:
    """Unit-float raster: (H, W) grayscale or (H, W, 3) RGB, values in [0, 1]."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim == 3 and arr.shape[2] == 1:
            arr = arr[:, :, 0]
        if arr.ndim not in (2, 3) or (arr.ndim == 3 and arr.shape[2] != 3):
            raise DimensionError(f"image must be (h, w) or (h, w, 3), got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionError(f"image must be non-empty, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise DomainError("image contains non-finite values")
        if (arr < 0).any() or (arr > 1).any():
            raise DomainError("image values must lie in [0, 1]")
        self.values = arr

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def channels(self) -> int:
        return 1 if self.values.ndim == 2 else 3

    @classmethod
    def from_u8(cls, arr: np.ndarray) -> "Image":
        """Map 8-bit values to unit floats (byte / 255)."""
        return cls(np.asarray(arr, dtype=np.float64) / 255.0)

    def to_u8(self) -> np.ndarray:
        """Quantize to 8-bit, rounding half away from zero."""
        return np.floor(self.values * 255.0 + 0.5).astype(np.uint8)


@dataclass
class BlurKernel:
    """Square normalized kernel: non-negative weights summing to 1."""

    weights: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.weights, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise DimensionError(f"kernel must be square 2-D, got shape {arr.shape}")
        if not np.isfinite(arr).all() or (arr < 0).any():
            raise DomainError("kernel weights must be finite and non-negative")
        if abs(float(arr.sum()) - 1.0) > 1e-9:
            raise DomainError(f"kernel weights must sum to 1, got {float(arr.sum())!r}")
        self.weights = arr

    @property
    def size(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class MixRatio:
    """Modality mixing weight gamma in [0, 1]."""

    gamma: float

    def __post_init__(self):
        g = self.gamma
        if not isinstance(g, (int, float, np.floating)) or not np.isfinite(g) or not 0 <= g <= 1:
            raise DomainError(f"gamma must lie in [0, 1], got {g!r}")
        object.__setattr__(self, "gamma", float(g))


@dataclass
class LatentVector:
    """Fixed-length 1-D vector of finite reals."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1:
            raise DimensionError(f"latent vector must be 1-D, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise DomainError("latent vector contains non-finite values")
        self.values = arr

    def __len__(self) -> int:
        return self.values.shape[0]


def _as_gamma(gamma: Union[MixRatio, float]) -> float:
    return gamma.gamma if isinstance(gamma, MixRatio) else MixRatio(gamma).gamma


def average_blur(frames: Sequence[Image]) -> Image:
    """Per-pixel arithmetic mean of equally shaped frames, in float.

    Accumulates deviations from the first frame, so averaging N identical
    frames returns that frame exactly.
    """
    if len(frames) == 0:
        raise DimensionError("average_blur needs at least one frame")
    shapes = {f.values.shape for f in frames}
    if len(shapes) != 1:
        raise DimensionError(f"frames disagree on shape: {sorted(shapes)}")
    base = frames[0].values
    acc = np.zeros_like(base)
    for f in frames[1:]:
        acc += f.values - base
    return Image(np.clip(base + acc / len(frames), 0.0, 1.0))


def motion_blur_kernel(length: int, angle: float, size: int = 40) -> BlurKernel:
    """Linear motion-blur kernel: a centered line segment rasterized on a grid.

    `length` sample points at unit spacing along direction `angle` are
    deposited (1/length each) into the nearest cells of a size x size grid
    centered on (size - 1) / 2.  Length 1 degenerates to a delta at the
    convolution anchor (size // 2), making the kernel an identity.
    """
    length, size = int(length), int(size)
    if size < 1:
        raise DomainError(f"size must be >= 1, got {size}")
    if length < 1:
        raise DomainError(f"length must be >= 1, got {length}")
    if length > size:
        raise DomainError(f"length {length} exceeds kernel size {size}")
    center = (size - 1) / 2.0
    offsets = np.arange(length, dtype=np.float64) - (length - 1) / 2.0
    rows = np.floor(center + offsets * math.sin(angle) + 0.5).astype(np.int64)
    cols = np.floor(center + offsets * math.cos(angle) + 0.5).astype(np.int64)
    weights = np.zeros((size, size), dtype=np.float64)
    np.add.at(weights, (rows, cols), 1.0 / length)
    return BlurKernel(weights)


def sample_blur_kernels(rng: CounterRng, count: int = 8, size: int = 40) -> list[BlurKernel]:
    """Bank of random motion-blur kernels (uniform length 1..size, angle [0, pi))."""
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    sub = rng.split(TAG_KERNEL)
    u = sub.uniform(2 * count)
    lengths = np.minimum(np.floor(u[:count] * size).astype(np.int64) + 1, size)
    angles = u[count:] * math.pi
    return [motion_blur_kernel(int(l), float(a), size) for l, a in zip(lengths, angles)]


def convolve(image: Image, kernel: BlurKernel) -> Image:
    """2-D correlation with replicate-edge padding, applied per channel."""
    from scipy import ndimage  # deferred: keeps CLI startup light

    k = kernel.size
    if k > image.height or k > image.width:
        raise DimensionError(
            f"kernel size {k} exceeds image dimensions {image.height}x{image.width}"
        )
    if image.channels == 1:
        out = ndimage.correlate(image.values, kernel.weights, mode="nearest")
    else:
        out = np.stack(
            [
                ndimage.correlate(image.values[:, :, c], kernel.weights, mode="nearest")
                for c in range(3)
            ],
            axis=2,
        )
    # Normalized kernel keeps a convex combination; clip the float dust.
    return Image(np.clip(out, 0.0, 1.0))


def grayscale(rgb: Image) -> Image:
    """BT.601 luma: 0.299 R + 0.587 G + 0.114 B."""
    if rgb.channels != 3:
        raise DimensionError("grayscale conversion needs an RGB image")
    return Image(np.clip(rgb.values @ _LUMA, 0.0, 1.0))


def color_fade(clear: Image, gamma: Union[MixRatio, float]) -> Image:
    """Fade an RGB image toward its grayscale version:

        faded = (1 - gamma) * clear + gamma * gray

    gamma = 0 returns the image unchanged; gamma = 1 collapses all
    channels to the luma.
    """
    g = _as_gamma(gamma)
    if clear.channels != 3:
        raise DimensionError("color_fade needs an RGB image")
    gray = grayscale(clear).values[:, :, None]
    return Image(np.clip((1.0 - g) * clear.values + g * gray, 0.0, 1.0))


def sample_gamma(rng: CounterRng, count: int | None = None):
    """Mixing ratio(s) ~ Normal(mean 0.5, variance 1) clamped to [0, 1].

    Clamping (rather than resampling) leaves point masses at both ends, so
    roughly 31% of draws are pure single-modality on each side.  Returns a
    MixRatio, or a float array when count is given.
    """
    n = 1 if count is None else int(count)
    if n < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    g = np.clip(0.5 + rng.normal(n), 0.0, 1.0)
    if count is None:
        return MixRatio(float(g[0]))
    return g


def mix_latents(
    z_rgb: LatentVector, z_spike: LatentVector, gamma: Union[MixRatio, float]
) -> LatentVector:
    """Blend latents elementwise: (1 - gamma) * z_rgb + gamma * z_spike."""
    g = _as_gamma(gamma)
    if len(z_rgb) != len(z_spike):
        raise DimensionError(f"latent lengths differ: {len(z_rgb)} != {len(z_spike)}")
    return LatentVector((1.0 - g) * z_rgb.values + g * z_spike.values)
