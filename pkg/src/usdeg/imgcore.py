"""Grayscale image core: unit-range rasters and the geometric
augmentation pipeline (resize -> rotate -> crop) that produces training
patches.

An image is a float64 array of shape (H, W) with intensities in [0, 1].
All operations are pure, treat their inputs as immutable, and return
outputs inside the unit range whenever the inputs are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GrayImage = np.ndarray

DEFAULT_RESIZE = 128
DEFAULT_CROP = 64
MAX_ROTATION_DEGREES = 15.0


def clip_unit(img: GrayImage) -> GrayImage:
    """Clamp every intensity into [0, 1]."""
    return np.clip(np.asarray(img, dtype=np.float64), 0.0, 1.0)


def _axis_samples(n_in: int, n_out: int):
    # pixel-center mapping (align-corners false), clamped so no sample
    # extrapolates beyond the source grid
    src = (np.arange(n_out, dtype=np.float64) + 0.5) * (n_in / n_out) - 0.5
    src = np.clip(src, 0.0, n_in - 1.0)
    lo = np.floor(src).astype(np.intp)
    hi = np.minimum(lo + 1, n_in - 1)
    return lo, hi, src - lo


def resize_bilinear(img: GrayImage, out_h: int, out_w: int) -> GrayImage:
    """Bilinear resize to (out_h, out_w)."""
    img = np.asarray(img, dtype=np.float64)
    if out_h < 1 or out_w < 1:
        raise ValueError(f"resize target must be at least 1x1, got {out_h}x{out_w}")
    h, w = img.shape
    r0, r1, wr = _axis_samples(h, out_h)
    c0, c1, wc = _axis_samples(w, out_w)
    wr = wr[:, None]
    wc = wc[None, :]
    out = (
        (1.0 - wr) * (1.0 - wc) * img[np.ix_(r0, c0)]
        + (1.0 - wr) * wc * img[np.ix_(r0, c1)]
        + wr * (1.0 - wc) * img[np.ix_(r1, c0)]
        + wr * wc * img[np.ix_(r1, c1)]
    )
    return clip_unit(out)


def rotate(img: GrayImage, degrees: float) -> GrayImage:
    """Rotate about the geometric image center ((H-1)/2, (W-1)/2).

    Inverse-mapped bilinear sampling; sample points falling outside the
    source raster yield 0. Output has the same shape as the input.
    """
    img = np.asarray(img, dtype=np.float64)
    h, w = img.shape
    theta = math.radians(degrees)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    dy = np.arange(h, dtype=np.float64)[:, None] - cy
    dx = np.arange(w, dtype=np.float64)[None, :] - cx
    sy = cy + cos_t * dy - sin_t * dx
    sx = cx + sin_t * dy + cos_t * dx
    inside = (sy >= 0.0) & (sy <= h - 1.0) & (sx >= 0.0) & (sx <= w - 1.0)
    sy = np.clip(sy, 0.0, h - 1.0)
    sx = np.clip(sx, 0.0, w - 1.0)
    y0 = np.floor(sy).astype(np.intp)
    x0 = np.floor(sx).astype(np.intp)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    wy = sy - y0
    wx = sx - x0
    out = (
        (1.0 - wy) * (1.0 - wx) * img[y0, x0]
        + (1.0 - wy) * wx * img[y0, x1]
        + wy * (1.0 - wx) * img[y1, x0]
        + wy * wx * img[y1, x1]
    )
    out[~inside] = 0.0
    return clip_unit(out)


def crop(img: GrayImage, origin: tuple[int, int], size: tuple[int, int]) -> GrayImage:
    """Exact sub-rectangle copy; out-of-bounds requests are an error."""
    img = np.asarray(img, dtype=np.float64)
    r0, c0 = origin
    ph, pw = size
    h, w = img.shape
    if ph < 1 or pw < 1:
        raise ValueError(f"crop size must be positive, got {size}")
    if r0 < 0 or c0 < 0 or r0 + ph > h or c0 + pw > w:
        raise ValueError(f"crop {size} at {origin} exceeds image {h}x{w}")
    return img[r0 : r0 + ph, c0 : c0 + pw].copy()


@dataclass(frozen=True)
class AugmentSpec:
    """One deterministic draw of the patch augmentation pipeline."""

    target_resize: int = DEFAULT_RESIZE
    rotation_degrees: float = 0.0
    crop_size: int = DEFAULT_CROP
    crop_origin: tuple[int, int] = (0, 0)

    def validate(self) -> None:
        if self.target_resize < 1 or self.crop_size < 1:
            raise ValueError("resize and crop sizes must be positive")
        if abs(self.rotation_degrees) > MAX_ROTATION_DEGREES:
            raise ValueError(f"|rotation| must be <= {MAX_ROTATION_DEGREES} degrees")
        r0, c0 = self.crop_origin
        if r0 < 0 or c0 < 0:
            raise ValueError("crop origin must be non-negative")
        if r0 + self.crop_size > self.target_resize or c0 + self.crop_size > self.target_resize:
            raise ValueError("crop window must fit inside the resized image")

    def to_json(self) -> dict:
        return {
            "target_resize": self.target_resize,
            "rotation_degrees": self.rotation_degrees,
            "crop_size": self.crop_size,
            "crop_row": self.crop_origin[0],
            "crop_col": self.crop_origin[1],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "AugmentSpec":
        return cls(
            target_resize=int(doc["target_resize"]),
            rotation_degrees=float(doc["rotation_degrees"]),
            crop_size=int(doc["crop_size"]),
            crop_origin=(int(doc["crop_row"]), int(doc["crop_col"])),
        )


def draw_augment_spec(
    rng: np.random.Generator,
    target_resize: int = DEFAULT_RESIZE,
    crop_size: int = DEFAULT_CROP,
    max_rotation: float = MAX_ROTATION_DEGREES,
) -> AugmentSpec:
    """Draw rotation and crop origin for one augmentation.

    Draw order is fixed (rotation, crop row, crop col) so specs replay
    bit-exactly from the stream. The crop origin is uniform over all
    valid origins; zero-filled rotation corners may be covered.
    """
    rotation = float(rng.uniform(-max_rotation, max_rotation))
    span = target_resize - crop_size
    if span < 0:
        raise ValueError("crop size exceeds resize target")
    row = int(rng.integers(0, span + 1))
    col = int(rng.integers(0, span + 1))
    return AugmentSpec(target_resize, rotation, crop_size, (row, col))


def augment_patch(img: GrayImage, spec: AugmentSpec) -> GrayImage:
    """resize -> rotate -> crop; output is crop_size x crop_size."""
    spec.validate()
    out = resize_bilinear(img, spec.target_resize, spec.target_resize)
    out = rotate(out, spec.rotation_degrees)
    return crop(out, spec.crop_origin, (spec.crop_size, spec.crop_size))
