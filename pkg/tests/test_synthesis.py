"""Dataset synthesis: blur, kernels, convolution, fade, ratio sampling, mixing."""

import math

import numpy as np
import pytest

from spikekit import (
    BlurKernel,
    CounterRng,
    DimensionError,
    DomainError,
    Image,
    LatentVector,
    MixRatio,
    average_blur,
    color_fade,
    convolve,
    grayscale,
    mix_latents,
    motion_blur_kernel,
    sample_blur_kernels,
    sample_gamma,
)


# ------------------------------------------------------------- average_blur


def test_average_identical_frames_is_exact():
    rs = np.random.RandomState(1)
    frame = Image(rs.rand(9, 7))
    out = average_blur([frame] * 97)
    assert np.array_equal(out.values, frame.values)


def test_average_two_frames():
    a = Image(np.zeros((4, 4)))
    b = Image(np.ones((4, 4)))
    assert np.array_equal(average_blur([a, b]).values, np.full((4, 4), 0.5))


def test_average_97_translating_square_vs_fsum_oracle():
    frames = []
    for t in range(97):
        img = np.zeros((16, 16))
        x = t % 12
        img[4:8, x : x + 4] = 1.0
        frames.append(Image(img))
    out = average_blur(frames).values
    stack = np.stack([f.values for f in frames])
    oracle = np.empty((16, 16))
    for y in range(16):
        for x in range(16):
            oracle[y, x] = math.fsum(stack[:, y, x]) / 97
    assert np.abs(out - oracle).max() <= 1e-6


def test_average_range_invariant():
    rs = np.random.RandomState(2)
    frames = [Image(rs.rand(8, 8)) for _ in range(13)]
    stack = np.stack([f.values for f in frames])
    out = average_blur(frames).values
    assert (out >= stack.min(axis=0) - 1e-12).all()
    assert (out <= stack.max(axis=0) + 1e-12).all()


def test_average_rejects_mismatched_or_empty():
    with pytest.raises(DimensionError):
        average_blur([])
    with pytest.raises(DimensionError):
        average_blur([Image(np.zeros((2, 2))), Image(np.zeros((3, 3)))])


# ------------------------------------------------------- motion_blur_kernel


def test_kernel_length_one_is_delta():
    for size in (5, 40):
        k = motion_blur_kernel(1, 0.7, size)
        expected = np.zeros((size, size))
        expected[size // 2, size // 2] = 1.0
        assert np.array_equal(k.weights, expected)


def test_kernel_horizontal_line():
    k = motion_blur_kernel(5, 0.0, 5)
    expected = np.zeros((5, 5))
    expected[2, :] = 0.2
    assert np.array_equal(k.weights, expected)


def test_kernel_normalization_over_grid():
    for length in (1, 3, 17, 40):
        for angle in np.linspace(0.0, math.pi, 9):
            k = motion_blur_kernel(length, float(angle), 40)
            assert abs(k.weights.sum() - 1.0) <= 1e-9
            assert (k.weights >= 0).all()


def test_kernel_rejects_bad_length():
    with pytest.raises(DomainError):
        motion_blur_kernel(41, 0.0, 40)
    with pytest.raises(DomainError):
        motion_blur_kernel(0, 0.0, 40)


def test_sample_blur_kernels_deterministic():
    bank1 = sample_blur_kernels(CounterRng(4), count=8, size=40)
    bank2 = sample_blur_kernels(CounterRng(4), count=8, size=40)
    assert len(bank1) == 8
    for k1, k2 in zip(bank1, bank2):
        assert np.array_equal(k1.weights, k2.weights)


# ----------------------------------------------------------------- convolve


def test_convolve_delta_identity():
    rs = np.random.RandomState(3)
    img = Image(rs.rand(12, 10))
    out = convolve(img, motion_blur_kernel(1, 0.0, 5))
    assert np.array_equal(out.values, img.values)


def test_convolve_constant_unchanged():
    img = Image(np.full((12, 12), 0.37))
    out = convolve(img, motion_blur_kernel(7, 0.3, 9))
    assert np.abs(out.values - 0.37).max() <= 1e-12


def test_convolve_matches_quadruple_loop_oracle():
    rs = np.random.RandomState(4)
    img = rs.rand(16, 16)
    weights = rs.rand(5, 5)
    weights /= weights.sum()
    out = convolve(Image(img), BlurKernel(weights)).values

    oracle = np.zeros((16, 16))
    c = 5 // 2
    for y in range(16):
        for x in range(16):
            acc = 0.0
            for i in range(5):
                for j in range(5):
                    yy = min(max(y + i - c, 0), 15)
                    xx = min(max(x + j - c, 0), 15)
                    acc += weights[i, j] * img[yy, xx]
            oracle[y, x] = acc
    assert np.abs(out - oracle).max() <= 1e-6


def test_convolve_rgb_and_kernel_too_large():
    rs = np.random.RandomState(5)
    img = Image(rs.rand(8, 8, 3))
    out = convolve(img, motion_blur_kernel(3, 1.0, 3))
    assert out.values.shape == (8, 8, 3)
    with pytest.raises(DimensionError):
        convolve(Image(rs.rand(4, 4)), motion_blur_kernel(1, 0.0, 5))


# ---------------------------------------------------------------- grayscale


def test_grayscale_values():
    white = Image(np.ones((2, 2, 3)))
    assert np.abs(grayscale(white).values - 1.0).max() <= 1e-12

    px = Image(np.array([[[100 / 255, 200 / 255, 50 / 255]]]))
    # 0.299 * 100 + 0.587 * 200 + 0.114 * 50 = 153.0
    assert grayscale(px).values[0, 0] == pytest.approx(153.0 / 255.0, abs=1e-12)

    rs = np.random.RandomState(6)
    v = rs.rand(4, 4)
    flat = Image(np.stack([v, v, v], axis=2))
    assert np.abs(grayscale(flat).values - v).max() <= 1e-12


def test_grayscale_rejects_gray_input():
    with pytest.raises(DimensionError):
        grayscale(Image(np.zeros((2, 2))))


# --------------------------------------------------------------- color_fade


def test_fade_boundaries_exact():
    rs = np.random.RandomState(7)
    img = Image(rs.rand(6, 6, 3))
    assert np.array_equal(color_fade(img, 0.0).values, img.values)
    faded = color_fade(img, 1.0).values
    gray = grayscale(img).values
    for c in range(3):
        assert np.array_equal(faded[:, :, c], gray)


def test_fade_half_hand_computed():
    px = Image(np.array([[[100 / 255, 200 / 255, 50 / 255]]]))
    out = color_fade(px, 0.5).values[0, 0]
    expected = np.array([126.5, 176.5, 101.5]) / 255.0  # 0.5 * channel + 0.5 * 153
    assert np.abs(out - expected).max() <= 1e-9


def test_fade_affine_in_gamma():
    rs = np.random.RandomState(8)
    img = Image(rs.rand(5, 5, 3))
    f0 = color_fade(img, 0.0).values
    f1 = color_fade(img, 1.0).values
    for g in rs.rand(20):
        lhs = color_fade(img, float(g)).values
        rhs = (1.0 - g) * f0 + g * f1
        assert np.abs(lhs - rhs).max() <= 1e-6


def test_fade_rejects_gray():
    with pytest.raises(DimensionError):
        color_fade(Image(np.zeros((2, 2))), 0.5)


def test_fade_natural_rgb(natural_rgb):
    out = color_fade(Image(natural_rgb), 0.8)
    assert out.channels == 3
    assert (out.values >= 0).all() and (out.values <= 1).all()


# ------------------------------------------------------------- sample_gamma


def test_sample_gamma_deterministic_and_clamped():
    a = sample_gamma(CounterRng(123))
    b = sample_gamma(CounterRng(123))
    assert isinstance(a, MixRatio)
    assert a.gamma == b.gamma
    g = sample_gamma(CounterRng(55), count=10_000)
    assert (g >= 0).all() and (g <= 1).all()
    assert abs(g.mean() - 0.5) < 0.02
    # Clamping leaves point masses at both ends.
    assert (g == 0.0).mean() > 0.2
    assert (g == 1.0).mean() > 0.2


def test_mix_ratio_validation():
    with pytest.raises(DomainError):
        MixRatio(1.5)
    with pytest.raises(DomainError):
        MixRatio(float("nan"))


# -------------------------------------------------------------- mix_latents


def test_mix_latents_formula():
    z_rgb = LatentVector(np.array([1.0, 0.0]))
    z_spk = LatentVector(np.array([0.0, 1.0]))
    assert np.array_equal(mix_latents(z_rgb, z_spk, 0.0).values, z_rgb.values)
    assert np.array_equal(mix_latents(z_rgb, z_spk, 1.0).values, z_spk.values)
    assert np.array_equal(mix_latents(z_rgb, z_spk, 0.25).values, np.array([0.75, 0.25]))


def test_mix_latents_affine_and_errors():
    rs = np.random.RandomState(9)
    a = LatentVector(rs.randn(32))
    b = LatentVector(rs.randn(32))
    for g in rs.rand(10):
        lhs = mix_latents(a, b, float(g)).values
        rhs = (1.0 - g) * a.values + g * b.values
        assert np.abs(lhs - rhs).max() <= 1e-12
    with pytest.raises(DimensionError):
        mix_latents(a, LatentVector(rs.randn(8)), 0.5)


def test_image_validation():
    with pytest.raises(DomainError):
        Image(np.full((2, 2), 1.5))
    with pytest.raises(DomainError):
        Image(np.full((2, 2), np.nan))
    with pytest.raises(DimensionError):
        Image(np.zeros((2, 2, 4)))
    img = Image.from_u8(np.array([[0, 153, 255]], dtype=np.uint8))
    assert img.values[0, 1] == pytest.approx(0.6, abs=1e-7)
    assert np.array_equal(img.to_u8(), np.array([[0, 153, 255]], dtype=np.uint8))
