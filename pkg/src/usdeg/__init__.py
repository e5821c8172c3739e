"""usdeg: degradation modeling, denoising, and evaluation for B-mode
ultrasound images."""

from . import bench, degrade, fileio, imgcore, metrics, nllr, phantoms, rng, spectral

__version__ = "0.1.0"

__all__ = [
    "bench",
    "degrade",
    "fileio",
    "imgcore",
    "metrics",
    "nllr",
    "phantoms",
    "rng",
    "spectral",
    "__version__",
]
