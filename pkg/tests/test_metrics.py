import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from usdeg import metrics

from oracles import psnr_bruteforce, ssim_bruteforce


# --- profiles ---------------------------------------------------------------


def test_extract_profile_constant():
    img = np.full((10, 10), 0.3)
    prof = metrics.extract_profile(img, metrics.RoiSpec((2, 6), (4, 6), "along_rows"))
    assert np.array_equal(prof, np.full(4, 0.3))


def test_extract_profile_is_mean_across_other_axis():
    img = np.zeros((4, 2))
    img[:, 0] = 0.2
    img[:, 1] = 0.4
    prof = metrics.extract_profile(img, metrics.RoiSpec((0, 4), (0, 2), "along_rows"))
    assert np.allclose(prof, 0.3)
    prof_c = metrics.extract_profile(img, metrics.RoiSpec((0, 4), (0, 2), "along_cols"))
    assert np.allclose(prof_c, [0.2, 0.4])


def test_extract_profile_vertical_roi_shape():
    img = np.random.default_rng(0).random((256, 256))
    prof = metrics.extract_profile(img, metrics.RoiSpec((0, 200), (194, 200), "along_rows"))
    assert prof.shape == (200,)


def test_extract_profile_validates_roi():
    img = np.zeros((8, 8))
    with pytest.raises(ValueError):
        metrics.extract_profile(img, metrics.RoiSpec((0, 9), (0, 4)))
    with pytest.raises(ValueError):
        metrics.extract_profile(img, metrics.RoiSpec((2, 2), (0, 4)))


def test_fwhm_triangle():
    x = np.arange(101, dtype=float)
    tri = np.maximum(0.0, 1.0 - np.abs(x - 50.0) / 20.0)
    assert metrics.fwhm(tri) == pytest.approx(20.0, abs=1e-9)


def test_fwhm_rect_pulse():
    for width in (1, 4, 7):
        p = np.zeros(30)
        p[10 : 10 + width] = 1.0
        assert metrics.fwhm(p) == pytest.approx(float(width), abs=1e-9)


def test_fwhm_gaussian_closed_form():
    x = np.arange(101, dtype=float)
    g = np.exp(-((x - 50.0) ** 2) / (2.0 * 10.0**2))
    assert metrics.fwhm(g) == pytest.approx(2.0 * math.sqrt(2.0 * math.log(2.0)) * 10.0, abs=0.1)


def test_fwhm_undefined_for_monotone():
    assert math.isnan(metrics.fwhm(np.linspace(0.0, 1.0, 20)))


def test_fwhm_count_mode():
    p = np.zeros(20)
    p[5:9] = 1.0
    assert metrics.fwhm(p, mode="count") == 4.0


def test_fwhm_translation_invariance():
    x = np.arange(60, dtype=float)
    tri = np.maximum(0.0, 1.0 - np.abs(x - 30.0) / 10.0)
    shifted = np.concatenate([np.zeros(7), tri])
    assert abs(metrics.fwhm(tri) - metrics.fwhm(shifted)) < 1e-9


def test_fwhm_scale_covariance():
    x = np.arange(101, dtype=float)
    g = np.exp(-((x - 50.0) ** 2) / (2.0 * 8.0**2))
    up = np.interp(np.arange(201) / 2.0, x, g)  # independent bilinear upsample
    assert metrics.fwhm(up) == pytest.approx(2.0 * metrics.fwhm(g), rel=0.02)


def test_grad_stats_constant_and_ramp():
    assert metrics.grad_stats(np.full(10, 0.4)) == (0.0, 0.0)
    m = 1.0 / 64.0  # dyadic slope keeps the arithmetic exact
    ramp = m * np.arange(32)
    gm, gx = metrics.grad_stats(ramp)
    assert gm == m and gx == m


def test_grad_stats_step():
    p = np.zeros(10)
    p[5:] = 1.0
    _, gx = metrics.grad_stats(p)
    assert gx == 0.5


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.5, 2.0, 4.0]))
def test_grad_stats_dyadic_scaling_exact(seed, c):
    p = np.random.default_rng(seed).random(24)
    gm, gx = metrics.grad_stats(p)
    gm_c, gx_c = metrics.grad_stats(c * p)
    assert gm_c == c * gm and gx_c == c * gx


def test_contrast_values():
    p = np.array([0.0, 1.0, 0.5])
    assert metrics.contrast(p) == 1.0
    assert metrics.contrast(np.full(5, 0.7)) == 0.0
    assert metrics.contrast(np.array([0.05, 0.95])) == (0.95 - 0.05) / (0.95 + 0.05)
    assert math.isnan(metrics.contrast(np.zeros(4)))


# --- psnr / ssim ------------------------------------------------------------


def test_psnr_identical_is_inf(smooth64):
    assert metrics.psnr(smooth64, smooth64) == math.inf


def test_psnr_uniform_one_lsb():
    ref = np.zeros((8, 8))
    test = np.full((8, 8), 1.0 / 255.0)
    assert metrics.psnr(ref, test) == pytest.approx(10.0 * math.log10(255.0**2), abs=1e-9)


def test_psnr_full_range():
    assert metrics.psnr(np.zeros((4, 4)), np.ones((4, 4))) == pytest.approx(0.0, abs=1e-12)


def test_psnr_dimension_mismatch():
    with pytest.raises(ValueError):
        metrics.psnr(np.zeros((4, 4)), np.zeros((4, 5)))


def test_psnr_matches_bruteforce(rand_image):
    a, b = rand_image(1), rand_image(2)
    assert metrics.psnr(a, b) == pytest.approx(psnr_bruteforce(a, b), abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_psnr_symmetric(seed):
    rng = np.random.default_rng(seed)
    a, b = rng.random((9, 9)), rng.random((9, 9))
    assert metrics.psnr(a, b) == metrics.psnr(b, a)


def test_psnr_quantize_flag():
    ref = np.full((4, 4), 0.5)
    test = np.full((4, 4), 0.5 + 0.4 / 255.0)  # rounds to the same byte
    assert metrics.psnr(ref, test, quantize=True) == math.inf
    assert metrics.psnr(ref, test) < math.inf


def test_ssim_identical_is_one(smooth64):
    assert metrics.ssim(smooth64, smooth64) == pytest.approx(1.0, abs=1e-12)


def test_ssim_constant_zero_vs_one():
    expected = metrics.SSIM_C1 / (255.0**2 + metrics.SSIM_C1)
    value = metrics.ssim(np.zeros((16, 16)), np.ones((16, 16)))
    assert value == pytest.approx(expected, abs=1e-9)


def test_ssim_matches_bruteforce(rand_image):
    a, b = rand_image(3), rand_image(4)
    assert metrics.ssim(a, b) == pytest.approx(ssim_bruteforce(a, b), abs=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_ssim_symmetric_and_bounded(seed):
    rng = np.random.default_rng(seed)
    a, b = rng.random((10, 10)), rng.random((10, 10))
    s_ab = metrics.ssim(a, b)
    assert s_ab == pytest.approx(metrics.ssim(b, a), abs=1e-12)
    assert abs(s_ab) <= 1.0 + 1e-9


def test_ssim_rejects_small_or_mismatched():
    with pytest.raises(ValueError):
        metrics.ssim(np.zeros((6, 10)), np.zeros((6, 10)))
    with pytest.raises(ValueError):
        metrics.ssim(np.zeros((8, 8)), np.zeros((8, 9)))


def test_ssim_gaussian_window_mode(smooth64):
    value = metrics.ssim(smooth64, smooth64, gaussian_window=True)
    assert value == pytest.approx(1.0, abs=1e-12)
    noisy = np.clip(smooth64 + np.random.default_rng(5).normal(0, 0.05, smooth64.shape), 0, 1)
    assert metrics.ssim(smooth64, noisy, gaussian_window=True) < 1.0


# --- bands ------------------------------------------------------------------


@pytest.mark.parametrize(
    "metric,value,band",
    [
        ("grad_mean", 0.06, "ideal"),
        ("grad_mean", 0.05, "ideal"),
        ("grad_mean", 0.03, "good"),
        ("grad_mean", 0.025, "fair"),
        ("grad_mean", 0.02, "poor"),
        ("grad_max", 0.31, "ideal"),
        ("grad_max", 0.18, "good"),
        ("grad_max", 0.15, "fair"),
        ("grad_max", 0.12, "poor"),
        ("contrast", 0.95, "ideal"),
        ("contrast", 0.92, "good"),
        ("contrast", 0.85, "fair"),
        ("contrast", 0.80, "poor"),
    ],
)
def test_band_classification(metric, value, band):
    assert metrics.classify_band(metric, value) == band


def test_profile_report_and_json():
    x = np.arange(101, dtype=float)
    tri = np.maximum(0.0, 1.0 - np.abs(x - 50.0) / 20.0)
    report = metrics.profile_report(tri)
    assert report.fwhm == pytest.approx(20.0, abs=1e-9)
    assert report.band_contrast == "ideal"
    doc = report.to_json()
    assert set(doc) == {
        "fwhm_px",
        "grad_mean",
        "grad_max",
        "contrast",
        "band_grad_mean",
        "band_grad_max",
        "band_contrast",
    }


def test_quality_report_json(smooth64):
    doc = metrics.quality_report(smooth64, smooth64).to_json()
    assert doc == {"psnr_db": "inf", "ssim": 1.0}
