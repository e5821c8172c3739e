"""Frequency-domain machinery: 2D DFT helpers, the complex spectral
perturbation used as a noise family, and Wiener deconvolution as a
classical deblurring baseline.

A spectrum is a complex128 array with the same shape as its source
image; the forward transform is the unnormalized DFT (numpy convention,
DC bin = sum of pixels) and the inverse carries the 1/(H*W) factor.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np

from .imgcore import GrayImage, clip_unit

if TYPE_CHECKING:  # pragma: no cover
    from .degrade import BlurKernel

Spectrum = np.ndarray


def fft2(img: GrayImage) -> Spectrum:
    """Unnormalized forward 2D DFT."""
    return np.fft.fft2(np.asarray(img, dtype=np.float64))


def ifft2_magnitude(spec: Spectrum) -> GrayImage:
    """Inverse 2D DFT (scaled by 1/(H*W)), complex magnitude, clip to [0, 1]."""
    return clip_unit(np.abs(np.fft.ifft2(np.asarray(spec, dtype=np.complex128))))


def fourier_perturb(
    img: GrayImage,
    gamma: float,
    rng: np.random.Generator,
    part_std: float | None = None,
) -> GrayImage:
    """Blend the spectrum with complex Gaussian noise scaled by its peak.

    The blend is (1-gamma)*F + gamma*max|F|*zeta where zeta has i.i.d.
    zero-mean Gaussian real and imaginary parts. By default each part
    has variance 1/2 so |zeta| has unit second moment; pass part_std=1.0
    for unit-variance parts. Draw order is fixed: one standard-normal
    field for the real parts, then one for the imaginary parts.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    img = np.asarray(img, dtype=np.float64)
    spec = np.fft.fft2(img)
    std = math.sqrt(0.5) if part_std is None else float(part_std)
    zeta = (rng.standard_normal(img.shape) + 1j * rng.standard_normal(img.shape)) * std
    peak = float(np.abs(spec).max())
    blended = (1.0 - gamma) * spec + gamma * peak * zeta
    return ifft2_magnitude(blended)


def wiener_deblur(img: GrayImage, kernel: "BlurKernel", nsr: float) -> GrayImage:
    """Wiener deconvolution with a known blur kernel.

    The kernel is embedded at the frequency-plane origin with
    wrap-around (circular convolution model), so deblurring of
    reflective-padded blur is approximate near borders by design.
    """
    if nsr <= 0.0:
        raise ValueError(f"noise-to-signal ratio must be positive, got {nsr}")
    img = np.asarray(img, dtype=np.float64)
    h, w = img.shape
    taps = kernel.taps
    k = taps.shape[0]
    half = k // 2
    psf = np.zeros((h, w), dtype=np.float64)
    rows = (np.arange(k) - half) % h
    cols = (np.arange(k) - half) % w
    # add.at folds taps that wrap onto the same bin when k exceeds the image
    np.add.at(psf, (rows[:, None], cols[None, :]), taps)
    transfer = np.fft.fft2(psf)
    estimate = np.conj(transfer) * np.fft.fft2(img) / (np.abs(transfer) ** 2 + nsr)
    return ifft2_magnitude(estimate)
