"""Non-local low-rank denoising for clean-like target generation.

Pipeline per iteration: estimate a global noise scale (Haar-MAD), group
similar patches by sum-of-squared-differences inside a search window,
soft-threshold the singular values of each mean-subtracted patch group,
and aggregate overlapping patches with 1/(1+rank) weights. Constant
regions pass through exactly because each patch's own mean is removed
before shrinkage and restored afterwards.

The whole instantiation (noise estimate, matching rule, threshold,
aggregation weights, relaxed iterations) is a toolkit decision; every
constant lives in NllrParams and can be overridden.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .imgcore import GrayImage, clip_unit


@dataclass(frozen=True)
class NllrParams:
    patch_size: int = 8
    stride: int = 4
    search_radius: int = 15
    group_size: int = 32
    shrink_lambda: float = 1.2
    iterations: int = 1
    relax_delta: float = 0.1

    def validate(self) -> None:
        if self.patch_size < 2:
            raise ValueError("patch_size must be >= 2")
        if not 1 <= self.stride <= self.patch_size:
            raise ValueError("stride must lie in [1, patch_size] for full coverage")
        if self.group_size < 2:
            raise ValueError("group_size must be >= 2")
        if self.search_radius < 0:
            raise ValueError("search_radius must be non-negative")
        if (2 * self.search_radius + 1) ** 2 < self.group_size:
            raise ValueError("search window holds fewer candidates than group_size")
        if self.shrink_lambda <= 0.0:
            raise ValueError("shrink_lambda must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not 0.0 <= self.relax_delta < 1.0:
            raise ValueError("relax_delta must lie in [0, 1)")

    def to_json(self) -> dict:
        return {
            "patch_size": self.patch_size,
            "stride": self.stride,
            "search_radius": self.search_radius,
            "group_size": self.group_size,
            "shrink_lambda": self.shrink_lambda,
            "iterations": self.iterations,
            "relax_delta": self.relax_delta,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "NllrParams":
        return cls(
            patch_size=int(doc["patch_size"]),
            stride=int(doc["stride"]),
            search_radius=int(doc["search_radius"]),
            group_size=int(doc["group_size"]),
            shrink_lambda=float(doc["shrink_lambda"]),
            iterations=int(doc["iterations"]),
            relax_delta=float(doc["relax_delta"]),
        )


@dataclass
class PatchGroup:
    """K patches stacked as columns of a p^2 x K matrix; member 0 is the
    reference patch itself."""

    ref: tuple[int, int]
    positions: np.ndarray
    matrix: np.ndarray
    padded: bool = False
    retained_rank: int | None = None


def estimate_noise_sigma(img: GrayImage) -> float:
    """Robust noise scale: median(|Haar diagonal response|) / 0.6745.

    The 2x2 filter [[+0.5, -0.5], [-0.5, +0.5]] has unit response
    variance on i.i.d. unit-variance noise, so the median absolute
    deviation calibrates directly to the pixel noise std. Constant
    images return 0.
    """
    img = np.asarray(img, dtype=np.float64)
    if img.shape[0] < 2 or img.shape[1] < 2:
        raise ValueError("image must be at least 2x2")
    d = 0.5 * (img[:-1, :-1] - img[:-1, 1:] - img[1:, :-1] + img[1:, 1:])
    return float(np.median(np.abs(d)) / 0.6745)


def _match(windows: np.ndarray, ref: tuple[int, int], params: NllrParams) -> PatchGroup:
    p = params.patch_size
    n_r, n_c = windows.shape[0], windows.shape[1]
    r, c = ref
    if not (0 <= r < n_r and 0 <= c < n_c):
        raise ValueError(f"reference patch at {ref} extends outside the image")
    r0, r1 = max(0, r - params.search_radius), min(n_r - 1, r + params.search_radius)
    c0, c1 = max(0, c - params.search_radius), min(n_c - 1, c + params.search_radius)
    cand = windows[r0 : r1 + 1, c0 : c1 + 1]
    ssd = ((cand - windows[r, c]) ** 2).sum(axis=(2, 3)).ravel()
    width = c1 - c0 + 1
    # stable sort on the row-major flattening = SSD order, ties by scan order
    order = np.argsort(ssd, kind="stable")
    ref_flat = (r - r0) * width + (c - c0)
    order = order[order != ref_flat]
    selected = [ref_flat, *order[: params.group_size - 1].tolist()]
    padded = len(selected) < params.group_size
    if padded:
        base = list(selected)
        while len(selected) < params.group_size:
            selected.append(base[len(selected) % len(base)])
    idx = np.asarray(selected, dtype=np.intp)
    rows = r0 + idx // width
    cols = c0 + idx % width
    matrix = cand.reshape(-1, p * p)[idx].T.copy()
    return PatchGroup(ref=(r, c), positions=np.stack([rows, cols], axis=1), matrix=matrix, padded=padded)


def block_match(img: GrayImage, ref: tuple[int, int], params: NllrParams) -> PatchGroup:
    """Group the K nearest patches (SSD) to the reference inside the
    search window; the reference is always member 0 and ties break by
    row-major scan order. Windows with fewer than K candidates pad the
    group by cycling the best matches (flagged)."""
    params.validate()
    img = np.asarray(img, dtype=np.float64)
    windows = sliding_window_view(img, (params.patch_size, params.patch_size))
    return _match(windows, ref, params)


def shrink_group(group: PatchGroup, sigma: float, params: NllrParams) -> PatchGroup:
    """Soft-threshold the singular values of the mean-subtracted group.

    Threshold tau = shrink_lambda * sigma * sqrt(max(p^2, K)); each
    column's own mean is removed before the SVD and restored after, and
    the retained rank is recorded for aggregation weighting.
    """
    if sigma < 0.0:
        raise ValueError("sigma must be non-negative")
    m = group.matrix
    col_mean = m.mean(axis=0, keepdims=True)
    u, s, vt = np.linalg.svd(m - col_mean, full_matrices=False)
    tau = params.shrink_lambda * sigma * math.sqrt(max(m.shape[0], m.shape[1]))
    s_shrunk = np.maximum(s - tau, 0.0)
    rank = int(np.count_nonzero(s_shrunk))
    rec = (u * s_shrunk) @ vt + col_mean
    return PatchGroup(group.ref, group.positions, rec, group.padded, rank)


def _grid(last: int, stride: int) -> list[int]:
    g = list(range(0, last + 1, stride))
    if g[-1] != last:
        g.append(last)  # last valid position guarantees full coverage
    return g


def _denoise_pass(img: np.ndarray, params: NllrParams) -> np.ndarray:
    sigma = estimate_noise_sigma(img)
    h, w = img.shape
    p = params.patch_size
    windows = sliding_window_view(img, (p, p))
    acc = np.zeros(h * w, dtype=np.float64)
    wacc = np.zeros(h * w, dtype=np.float64)
    cell = np.arange(p, dtype=np.intp)
    offsets = (cell[:, None] * w + cell[None, :]).ravel()
    for r in _grid(h - p, params.stride):
        for c in _grid(w - p, params.stride):
            group = shrink_group(_match(windows, (r, c), params), sigma, params)
            weight = 1.0 / (1.0 + group.retained_rank)
            base = group.positions[:, 0] * w + group.positions[:, 1]
            idx = base[:, None] + offsets[None, :]
            np.add.at(acc, idx, weight * group.matrix.T)
            np.add.at(wacc, idx, weight)
    return (acc / wacc).reshape(h, w)


def nllr_denoise(img: GrayImage, params: NllrParams | None = None) -> GrayImage:
    """Denoise an image; deterministic (no randomness anywhere).

    Iterations beyond the first re-inject a relax_delta fraction of the
    original image before the next pass.
    """
    params = params or NllrParams()
    params.validate()
    img = np.asarray(img, dtype=np.float64)
    if img.shape[0] < params.patch_size or img.shape[1] < params.patch_size:
        raise ValueError(
            f"image {img.shape} is smaller than the {params.patch_size}x{params.patch_size} patch"
        )
    current = img
    for iteration in range(params.iterations):
        if iteration == 0:
            source = current
        else:
            source = (1.0 - params.relax_delta) * current + params.relax_delta * img
        current = _denoise_pass(source, params)
    return clip_unit(current)
