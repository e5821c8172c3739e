"""Independent loop-based reference implementations used as test oracles.

Everything here trades speed for obviousness: explicit index arithmetic,
scalar accumulation, no shared code with the package under test beyond
parameter dataclasses.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

SSIM_C1 = (0.01 * 255.0) ** 2
SSIM_C2 = (0.03 * 255.0) ** 2


def psnr_bruteforce(ref: np.ndarray, test: np.ndarray) -> float:
    h, w = ref.shape
    total = 0.0
    for i in range(h):
        for j in range(w):
            d = (ref[i, j] - test[i, j]) * 255.0
            total += d * d
    mse = total / (h * w)
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0**2 / mse)


def ssim_bruteforce(ref: np.ndarray, test: np.ndarray) -> float:
    x = np.asarray(ref, dtype=np.float64) * 255.0
    y = np.asarray(test, dtype=np.float64) * 255.0
    h, w = x.shape
    values = []
    for i in range(h - 6):
        for j in range(w - 6):
            wx = x[i : i + 7, j : j + 7]
            wy = y[i : i + 7, j : j + 7]
            mx = wx.mean()
            my = wy.mean()
            vx = ((wx - mx) ** 2).sum() / 48.0
            vy = ((wy - my) ** 2).sum() / 48.0
            vxy = ((wx - mx) * (wy - my)).sum() / 48.0
            values.append(
                ((2.0 * mx * my + SSIM_C1) * (2.0 * vxy + SSIM_C2))
                / ((mx * mx + my * my + SSIM_C1) * (vx + vy + SSIM_C2))
            )
    return float(np.mean(values))


def dft2_loops(img: np.ndarray) -> np.ndarray:
    h, w = img.shape
    out = np.zeros((h, w), dtype=np.complex128)
    for u in range(h):
        for v in range(w):
            acc = 0.0 + 0.0j
            for m in range(h):
                for n in range(w):
                    acc += img[m, n] * cmath.exp(-2j * cmath.pi * (u * m / h + v * n / w))
            out[u, v] = acc
    return out


def idft2_loops(spec: np.ndarray) -> np.ndarray:
    h, w = spec.shape
    out = np.zeros((h, w), dtype=np.complex128)
    for m in range(h):
        for n in range(w):
            acc = 0.0 + 0.0j
            for u in range(h):
                for v in range(w):
                    acc += spec[u, v] * cmath.exp(2j * cmath.pi * (u * m / h + v * n / w))
            out[m, n] = acc / (h * w)
    return out


def dft2_matrix(img: np.ndarray) -> np.ndarray:
    # direct-sum DFT written as two matrix products (still O(N^2) per bin)
    h, w = img.shape
    fh = np.exp(-2j * np.pi * np.outer(np.arange(h), np.arange(h)) / h)
    fw = np.exp(-2j * np.pi * np.outer(np.arange(w), np.arange(w)) / w)
    return fh @ img.astype(np.complex128) @ fw


def reflect_index(i: int, n: int) -> int:
    # half-sample symmetric reflection: -1 -> 0, n -> n-1
    while i < 0 or i >= n:
        if i < 0:
            i = -1 - i
        else:
            i = 2 * n - 1 - i
    return i


def conv2d_reflect_loops(img: np.ndarray, taps: np.ndarray) -> np.ndarray:
    h, w = img.shape
    k = taps.shape[0]
    half = k // 2
    out = np.zeros_like(img, dtype=np.float64)
    for i in range(h):
        for j in range(w):
            acc = 0.0
            for u in range(k):
                for v in range(k):
                    acc += taps[u, v] * img[
                        reflect_index(i + half - u, h), reflect_index(j + half - v, w)
                    ]
            out[i, j] = acc
    return np.clip(out, 0.0, 1.0)


def resize_bilinear_loops(img: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    h, w = img.shape
    out = np.zeros((out_h, out_w), dtype=np.float64)
    for i in range(out_h):
        sy = min(max((i + 0.5) * (h / out_h) - 0.5, 0.0), h - 1.0)
        y0 = int(math.floor(sy))
        y1 = min(y0 + 1, h - 1)
        wy = sy - y0
        for j in range(out_w):
            sx = min(max((j + 0.5) * (w / out_w) - 0.5, 0.0), w - 1.0)
            x0 = int(math.floor(sx))
            x1 = min(x0 + 1, w - 1)
            wx = sx - x0
            out[i, j] = (
                (1 - wy) * (1 - wx) * img[y0, x0]
                + (1 - wy) * wx * img[y0, x1]
                + wy * (1 - wx) * img[y1, x0]
                + wy * wx * img[y1, x1]
            )
    return out


def block_match_reference(img: np.ndarray, ref: tuple[int, int], params) -> list[tuple[int, int]]:
    p = params.patch_size
    rad = params.search_radius
    h, w = img.shape
    r, c = ref
    refpatch = img[r : r + p, c : c + p]
    candidates = []
    for i in range(max(0, r - rad), min(h - p, r + rad) + 1):
        for j in range(max(0, c - rad), min(w - p, c + rad) + 1):
            if (i, j) == (r, c):
                continue
            ssd = float(((img[i : i + p, j : j + p] - refpatch) ** 2).sum())
            candidates.append((ssd, i, j))
    candidates.sort(key=lambda t: t[0])  # stable sort keeps scan order on ties
    members = [(r, c)] + [(i, j) for _, i, j in candidates[: params.group_size - 1]]
    if len(members) < params.group_size:
        base = list(members)
        while len(members) < params.group_size:
            members.append(base[len(members) % len(base)])
    return members


def nllr_reference(img: np.ndarray, params) -> np.ndarray:
    """Single-iteration reference pipeline: loop SSD search + dense SVD."""
    img = np.asarray(img, dtype=np.float64)
    h, w = img.shape
    p = params.patch_size

    diffs = []
    for i in range(h - 1):
        for j in range(w - 1):
            diffs.append(0.5 * (img[i, j] - img[i, j + 1] - img[i + 1, j] + img[i + 1, j + 1]))
    sigma = float(np.median(np.abs(np.asarray(diffs))) / 0.6745)
    tau = params.shrink_lambda * sigma * math.sqrt(max(p * p, params.group_size))

    rows = list(range(0, h - p + 1, params.stride))
    if rows[-1] != h - p:
        rows.append(h - p)
    cols = list(range(0, w - p + 1, params.stride))
    if cols[-1] != w - p:
        cols.append(w - p)

    acc = np.zeros((h, w), dtype=np.float64)
    wacc = np.zeros((h, w), dtype=np.float64)
    for r in rows:
        for c in cols:
            members = block_match_reference(img, (r, c), params)
            matrix = np.stack([img[i : i + p, j : j + p].ravel() for i, j in members], axis=1)
            mean = matrix.mean(axis=0, keepdims=True)
            u, s, vt = np.linalg.svd(matrix - mean, full_matrices=False)
            shrunk = np.maximum(s - tau, 0.0)
            rank = int(np.count_nonzero(shrunk))
            rec = (u * shrunk) @ vt + mean
            weight = 1.0 / (1.0 + rank)
            for col, (i, j) in enumerate(members):
                acc[i : i + p, j : j + p] += weight * rec[:, col].reshape(p, p)
                wacc[i : i + p, j : j + p] += weight
    return np.clip(acc / wacc, 0.0, 1.0)
