"""Full-reference image quality metrics: MSE, PSNR, SSIM.

Inputs are rasters in a declared value domain: pass max_i = 1.0 for
unit-float data or 255.0 for 8-bit-domain data.  Arrays and Image objects
are both accepted.

SSIM follows the standard windowed form: local means, variances, and
covariance under an 11 x 11 Gaussian window (std 1.5), stabilizers
c1 = (0.01 max_i)^2 and c2 = (0.03 max_i)^2, aggregated by the arithmetic
mean over the valid region (windows fully inside the image, no padding).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError


@dataclass(frozen=True)
class MetricReport:
    """One comparison summary; psnr_db is +inf exactly when mse == 0."""

    mse: float
    psnr_db: float
    ssim: float

    def __post_init__(self):
        if (self.mse == 0.0) != math.isinf(self.psnr_db):
            raise DomainError("psnr must be +inf exactly when mse == 0")


def _raster(x) -> np.ndarray:
    values = getattr(x, "values", x)
    return np.asarray(values, dtype=np.float64)


def _check_pair(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} != {b.shape}")
    if a.ndim not in (2, 3):
        raise DimensionError(f"expected 2-D or 3-D rasters, got {a.ndim}-D")


def mse(a, b) -> float:
    """Mean squared error over all pixels and channels."""
    a, b = _raster(a), _raster(b)
    _check_pair(a, b)
    diff = a - b
    return float(np.mean(diff * diff))


def psnr(a, b, max_i: float = 1.0) -> float:
    """10 log10(max_i^2 / MSE) in dB; +inf for identical images."""
    if not np.isfinite(max_i) or max_i <= 0:
        raise DomainError(f"max_i must be a finite positive real, got {max_i}")
    err = mse(a, b)
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(max_i * max_i / err)


def _gaussian_window1d(sigma: float, radius: int) -> np.ndarray:
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def _local_mean(values: np.ndarray, k: np.ndarray, radius: int) -> np.ndarray:
    from scipy import ndimage  # deferred: keeps CLI startup light

    out = ndimage.correlate1d(values, k, axis=0, mode="nearest")
    out = ndimage.correlate1d(out, k, axis=1, mode="nearest")
    # Interior pixels never touched the padding; crop to the valid region.
    return out[radius:-radius, radius:-radius]


def ssim(a, b, max_i: float = 1.0, sigma: float = 1.5, radius: int = 5) -> float:
    """Mean local SSIM between two single-channel rasters."""
    if not np.isfinite(max_i) or max_i <= 0:
        raise DomainError(f"max_i must be a finite positive real, got {max_i}")
    a, b = _raster(a), _raster(b)
    _check_pair(a, b)
    if a.ndim != 2:
        raise DimensionError("ssim expects single-channel rasters (convert RGB first)")
    side = 2 * radius + 1
    if a.shape[0] < side or a.shape[1] < side:
        raise DimensionError(f"image {a.shape} smaller than the {side}x{side} window")
    k = _gaussian_window1d(sigma, radius)
    mu_a = _local_mean(a, k, radius)
    mu_b = _local_mean(b, k, radius)
    var_a = _local_mean(a * a, k, radius) - mu_a * mu_a
    var_b = _local_mean(b * b, k, radius) - mu_b * mu_b
    cov = _local_mean(a * b, k, radius) - mu_a * mu_b
    c1 = (0.01 * max_i) ** 2
    c2 = (0.03 * max_i) ** 2
    num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return float(np.mean(num / den))


def metric_report(a, b, max_i: float = 1.0) -> MetricReport:
    """MSE, PSNR, and SSIM in one pass; RGB pairs are compared on luma for SSIM."""
    a_arr, b_arr = _raster(a), _raster(b)
    _check_pair(a_arr, b_arr)
    if a_arr.ndim == 3:
        from .synthesis import _LUMA

        a_gray, b_gray = a_arr @ _LUMA, b_arr @ _LUMA
    else:
        a_gray, b_gray = a_arr, b_arr
    err = mse(a_arr, b_arr)
    return MetricReport(
        mse=err,
        psnr_db=psnr(a_arr, b_arr, max_i),
        ssim=ssim(a_gray, b_gray, max_i),
    )
