"""Synthetic grayscale phantoms shared by tests, demos, and benchmarks.

All generators are deterministic and return float64 images in [0, 1].
"""

from __future__ import annotations

import numpy as np


def piecewise_phantom(size: int = 128) -> np.ndarray:
    """Piecewise-constant quadrants with nested rectangles and a disk."""
    img = np.full((size, size), 0.15, dtype=np.float64)
    q = size // 2
    img[:q, :q] = 0.25
    img[:q, q:] = 0.55
    img[q:, :q] = 0.75
    img[q:, q:] = 0.40
    s8 = size // 8
    img[s8 : 3 * s8, s8 : 3 * s8] = 0.65
    img[5 * s8 : 7 * s8, 5 * s8 : 7 * s8] = 0.20
    img[s8 : 2 * s8, 5 * s8 : 7 * s8] = 0.90
    yy, xx = np.mgrid[0:size, 0:size]
    disk = (yy - 5.5 * s8) ** 2 + (xx - 2.5 * s8) ** 2 <= (s8 * 0.9) ** 2
    img[disk] = 0.55
    return img


def bar_phantom(
    size: int = 128,
    bar_width: int = 9,
    value: float = 1.0,
    background: float = 0.0,
) -> np.ndarray:
    """Single vertical bright bar on a flat background."""
    img = np.full((size, size), background, dtype=np.float64)
    c0 = (size - bar_width) // 2
    img[:, c0 : c0 + bar_width] = value
    return img


def bars_phantom(size: int = 128, period: int = 16) -> np.ndarray:
    """Alternating vertical bars (0.1 / 0.9)."""
    cols = (np.arange(size) // (period // 2)) % 2
    img = np.where(cols == 0, 0.1, 0.9)
    return np.tile(img, (size, 1)).astype(np.float64)


def smooth_phantom(size: int = 128) -> np.ndarray:
    """Low-frequency sinusoid mixture, values well inside (0, 1)."""
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    u = 2.0 * np.pi * xx / size
    v = 2.0 * np.pi * yy / size
    img = 0.5 + 0.22 * np.sin(1.7 * u) * np.cos(1.3 * v) + 0.18 * np.cos(2.9 * u + 0.7 * v)
    return np.clip(img, 0.05, 0.95)


def steps_phantom(size: int = 128, n_steps: int = 6) -> np.ndarray:
    """Horizontal intensity staircase from 0.1 to 0.9."""
    levels = np.linspace(0.1, 0.9, n_steps)
    rows = np.minimum(np.arange(size) * n_steps // size, n_steps - 1)
    return np.tile(levels[rows][:, None], (1, size)).astype(np.float64)


def disk_phantom(size: int = 128) -> np.ndarray:
    """Bright disk and a dark inclusion on a mid gray background."""
    img = np.full((size, size), 0.35, dtype=np.float64)
    yy, xx = np.mgrid[0:size, 0:size]
    c = size / 2.0
    img[(yy - c) ** 2 + (xx - c) ** 2 <= (0.32 * size) ** 2] = 0.8
    img[(yy - 0.3 * size) ** 2 + (xx - 0.62 * size) ** 2 <= (0.08 * size) ** 2] = 0.12
    return img


def phantom_suite(size: int = 128) -> list[tuple[str, np.ndarray]]:
    """Five named phantoms covering edges, texture, and flat regions."""
    return [
        ("piecewise", piecewise_phantom(size)),
        ("bars", bars_phantom(size)),
        ("smooth", smooth_phantom(size)),
        ("steps", steps_phantom(size)),
        ("disk", disk_phantom(size)),
    ]
