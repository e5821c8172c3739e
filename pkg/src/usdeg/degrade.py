"""Physics-guided corruption operators and their stochastic composition.

Two noise families drive training corruption (additive Gaussian and
spectral perturbation); Gamma multiplicative speckle is exposed as a
test-time corruption for benchmark ladders. Blur uses an isotropic
Gaussian kernel sized by k = 2*ceil(3*sigma) + 1 and reflective
boundary padding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .imgcore import GrayImage, clip_unit
from .rng import stream
from .spectral import fourier_perturb

TRAINING_BLUR_SIZES = (3, 5, 7, 9, 11, 13, 15, 17)
HEAVY_PATH_PROB = 0.55
LIGHT_PATH_PROB = 0.45
LIGHT_PATH_BLUR_K = 3

NOISE_FAMILIES = ("additive_gaussian", "fourier", "speckle")


@dataclass(frozen=True)
class BlurKernel:
    """Separable isotropic Gaussian kernel; taps = outer(profile, profile)."""

    size: int
    sigma: float
    taps: np.ndarray
    profile: np.ndarray


def _build_kernel(k: int, sigma: float) -> BlurKernel:
    half = (k - 1) // 2
    u = np.arange(-half, half + 1, dtype=np.float64)
    g = np.exp(-(u**2) / (2.0 * sigma**2))
    g /= g.sum()
    return BlurKernel(size=k, sigma=sigma, taps=np.outer(g, g), profile=g)


def gaussian_kernel(k: int) -> BlurKernel:
    """Kernel of odd size k with sigma = (k-1)/6; k=1 is the identity tap."""
    if k < 1 or k % 2 == 0:
        raise ValueError(f"kernel size must be odd and positive, got {k}")
    if k == 1:
        one = np.ones((1, 1), dtype=np.float64)
        return BlurKernel(size=1, sigma=0.0, taps=one, profile=np.ones(1))
    return _build_kernel(k, (k - 1) / 6.0)


def kernel_from_sigma(sigma: float) -> BlurKernel:
    """Kernel sized k = 2*ceil(3*sigma) + 1 for the given sigma."""
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    k = 2 * math.ceil(3.0 * sigma) + 1
    return _build_kernel(k, float(sigma))


def _convolve_axis(arr: np.ndarray, g: np.ndarray, axis: int) -> np.ndarray:
    win = sliding_window_view(arr, g.size, axis=axis)
    return win @ g[::-1]


def blur(img: GrayImage, kernel: BlurKernel) -> GrayImage:
    """2D convolution with reflective (half-sample symmetric) padding."""
    img = np.asarray(img, dtype=np.float64)
    half = kernel.size // 2
    if half == 0:
        return clip_unit(img)
    padded = np.pad(img, half, mode="symmetric")
    out = _convolve_axis(padded, kernel.profile, axis=0)
    out = _convolve_axis(out, kernel.profile, axis=1)
    return clip_unit(out)


def add_gaussian_noise(img: GrayImage, sigma_g: float, rng: np.random.Generator) -> GrayImage:
    """Per-pixel i.i.d. N(0, sigma_g^2), then clip to [0, 1]."""
    if sigma_g < 0.0:
        raise ValueError(f"sigma_g must be non-negative, got {sigma_g}")
    img = np.asarray(img, dtype=np.float64)
    return clip_unit(img + sigma_g * rng.standard_normal(img.shape))


def speckle(img: GrayImage, enl_l: float, rng: np.random.Generator) -> GrayImage:
    """Multiplicative Gamma noise with mean 1 and variance 1/L, clipped.

    L is the equivalent number of looks: draws are Gamma(shape=L,
    scale=1/L); larger L means milder speckle.
    """
    if enl_l < 1.0:
        raise ValueError(f"equivalent number of looks must be >= 1, got {enl_l}")
    img = np.asarray(img, dtype=np.float64)
    return clip_unit(img * rng.gamma(shape=enl_l, scale=1.0 / enl_l, size=img.shape))


@dataclass(frozen=True)
class NoiseSpec:
    """Noise family selector; only the selected family's field is read."""

    family: str
    sigma_g: float = 0.0
    gamma_f: float = 0.0
    enl_l: float = 1.0

    def validate(self) -> None:
        if self.family not in NOISE_FAMILIES:
            raise ValueError(f"unknown noise family {self.family!r}")
        if self.family == "additive_gaussian" and self.sigma_g < 0.0:
            raise ValueError("sigma_g must be non-negative")
        if self.family == "fourier" and not 0.0 <= self.gamma_f <= 1.0:
            raise ValueError("gamma_f must lie in [0, 1]")
        if self.family == "speckle" and self.enl_l < 1.0:
            raise ValueError("enl_l must be >= 1")


@dataclass(frozen=True)
class DegradationSpec:
    """Full parameterization of one corruption draw, replayable bit-exactly."""

    applied_blur_noise: bool
    blur_k: int
    noise: NoiseSpec
    applied_light_path: bool
    light_gamma_f: float
    seed: int

    def to_json(self) -> dict:
        # flat schema; seed as decimal string to survive lossy JSON readers
        return {
            "applied_blur_noise": self.applied_blur_noise,
            "blur_k": self.blur_k,
            "noise_family": self.noise.family,
            "noise_sigma_g": self.noise.sigma_g,
            "noise_gamma_f": self.noise.gamma_f,
            "noise_enl_l": self.noise.enl_l,
            "applied_light_path": self.applied_light_path,
            "light_gamma_f": self.light_gamma_f,
            "seed": str(self.seed),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "DegradationSpec":
        return cls(
            applied_blur_noise=bool(doc["applied_blur_noise"]),
            blur_k=int(doc["blur_k"]),
            noise=NoiseSpec(
                family=str(doc["noise_family"]),
                sigma_g=float(doc["noise_sigma_g"]),
                gamma_f=float(doc["noise_gamma_f"]),
                enl_l=float(doc["noise_enl_l"]),
            ),
            applied_light_path=bool(doc["applied_light_path"]),
            light_gamma_f=float(doc["light_gamma_f"]),
            seed=int(doc["seed"]),
        )


def draw_training_degradation(
    rng: np.random.Generator,
    p_heavy: float = HEAVY_PATH_PROB,
    p_light: float = LIGHT_PATH_PROB,
    blur_sizes: tuple[int, ...] = TRAINING_BLUR_SIZES,
) -> DegradationSpec:
    """Draw one training corruption.

    A Bernoulli(p_heavy) gate enables the blur->noise path (blur size
    uniform over blur_sizes, noise family uniform over additive Gaussian
    with sigma ~ U(0.05, 0.20) and spectral with gamma ~ U(0, 0.2)); an
    independent Bernoulli(p_light) gate enables the light noise->blur
    path (spectral noise with its own gamma ~ U(0, 0.2), then blur k=3).
    Both, either, or neither may fire. All draws land in the spec and
    the rng is consumed a fixed number of times per call.
    """
    heavy = bool(rng.random() < p_heavy)
    blur_k = int(blur_sizes[int(rng.integers(0, len(blur_sizes)))])
    if rng.random() < 0.5:
        noise = NoiseSpec("additive_gaussian", sigma_g=float(rng.uniform(0.05, 0.20)))
    else:
        noise = NoiseSpec("fourier", gamma_f=float(rng.uniform(0.0, 0.2)))
    light = bool(rng.random() < p_light)
    light_gamma = float(rng.uniform(0.0, 0.2))
    seed = int(rng.integers(0, 2**63, dtype=np.uint64))
    return DegradationSpec(heavy, blur_k, noise, light, light_gamma, seed)


def _apply_noise(img: GrayImage, noise: NoiseSpec, rng: np.random.Generator) -> GrayImage:
    noise.validate()
    if noise.family == "additive_gaussian":
        return add_gaussian_noise(img, noise.sigma_g, rng)
    if noise.family == "fourier":
        return fourier_perturb(img, noise.gamma_f, rng)
    return speckle(img, noise.enl_l, rng)


def apply_degradation(img: GrayImage, spec: DegradationSpec) -> GrayImage:
    """Execute a degradation spec; bit-deterministic given the spec."""
    rng = stream(spec.seed)
    out = clip_unit(img)
    if spec.applied_blur_noise:
        out = blur(out, gaussian_kernel(spec.blur_k))
        out = _apply_noise(out, spec.noise, rng)
    if spec.applied_light_path:
        out = fourier_perturb(out, spec.light_gamma_f, rng)
        out = blur(out, gaussian_kernel(LIGHT_PATH_BLUR_K))
    return out


def stress_degradation(
    img: GrayImage,
    gamma_f: float,
    blur_k: int | None,
    rng: np.random.Generator,
) -> GrayImage:
    """Fixed-parameter test-time corruption: optional blur, then
    spectral perturbation at the given strength."""
    out = clip_unit(img)
    if blur_k is not None:
        out = blur(out, gaussian_kernel(blur_k))
    return fourier_perturb(out, gamma_f, rng)
