"""Shared fixtures: deterministic synthetic test imagery."""

import numpy as np
import pytest


def make_natural_image(height: int = 256, width: int = 256, seed: int = 11) -> np.ndarray:
    """Smooth, natural-looking grayscale field in [0.05, 0.95].

    Low-frequency sinusoids plus a few Gaussian blobs and a gentle
    gradient; deterministic in (height, width, seed).  The max/mean ratio
    stays well under 10 so coverage calibration at 0.1 never clamps.
    """
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    u, v = xx / width, yy / height
    rs = np.random.RandomState(seed)
    img = 0.2 * u + 0.1 * v
    img += 0.30 * np.sin(2 * np.pi * (3.1 * u + 1.7 * v) + 0.5)
    img += 0.20 * np.cos(2 * np.pi * (1.3 * u - 2.9 * v) + 1.1)
    for _ in range(6):
        cx, cy = rs.uniform(0.1, 0.9, size=2)
        s = rs.uniform(0.05, 0.2)
        amp = rs.uniform(-0.4, 0.6)
        img += amp * np.exp(-((u - cx) ** 2 + (v - cy) ** 2) / (2 * s * s))
    lo, hi = img.min(), img.max()
    return 0.05 + 0.9 * (img - lo) / (hi - lo)


def make_natural_rgb(height: int = 256, width: int = 256, seed: int = 11) -> np.ndarray:
    """Stack three phase-shifted natural fields into an RGB image."""
    r = make_natural_image(height, width, seed)
    g = make_natural_image(height, width, seed + 1)
    b = make_natural_image(height, width, seed + 2)
    return np.stack([r, g, b], axis=2)


@pytest.fixture
def natural_image():
    return make_natural_image()


@pytest.fixture
def natural_rgb():
    return make_natural_rgb()
