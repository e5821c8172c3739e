"""8-bit grayscale image I/O: PNG (via Pillow) and binary PGM (P5).

Loading maps bytes to unit scale exactly (byte/255.0); saving quantizes
with half-up rounding (byte = floor(clip(v)*255 + 0.5)), so a
save-then-load round trip moves each pixel by at most 1/510.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .imgcore import GrayImage

_LUMA = np.array([0.299, 0.587, 0.114], dtype=np.float64)


class ImageIOError(Exception):
    """I/O or format failure, carrying the offending path and reason."""

    def __init__(self, path, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = str(path)
        self.reason = reason


def load_image(path) -> GrayImage:
    """Load an 8-bit grayscale PNG or binary PGM as floats in [0, 1].

    Multi-channel PNGs are converted via luma = (0.299R + 0.587G +
    0.114B)/255; 16-bit or float inputs are rejected.
    """
    suffix = Path(path).suffix.lower()
    if suffix == ".pgm":
        return _load_pgm(path)
    if suffix == ".png":
        return _load_png(path)
    raise ImageIOError(path, f"unsupported format {suffix!r} (expected .png or .pgm)")


def save_image(img: GrayImage, path) -> None:
    """Write an image as 8-bit PNG or PGM depending on the extension."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2D image, got shape {arr.shape}")
    data = np.floor(np.clip(arr, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
    suffix = Path(path).suffix.lower()
    try:
        if suffix == ".png":
            Image.fromarray(data, mode="L").save(path)
        elif suffix == ".pgm":
            header = f"P5\n{data.shape[1]} {data.shape[0]}\n255\n".encode("ascii")
            Path(path).write_bytes(header + data.tobytes())
        else:
            raise ImageIOError(path, f"unsupported format {suffix!r} (expected .png or .pgm)")
    except OSError as exc:
        raise ImageIOError(path, f"write failed: {exc}") from exc


def _load_png(path) -> GrayImage:
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "1":
                im = im.convert("L")
                mode = "L"
            if mode == "P":
                im = im.convert("RGB")
                mode = "RGB"
            if mode == "L":
                arr = np.asarray(im, dtype=np.uint8)
                return arr.astype(np.float64) / 255.0
            if mode == "LA":
                arr = np.asarray(im, dtype=np.uint8)[..., 0]
                return arr.astype(np.float64) / 255.0
            if mode in ("RGB", "RGBA"):
                rgb = np.asarray(im, dtype=np.uint8)[..., :3].astype(np.float64)
                return (rgb @ _LUMA) / 255.0
            raise ImageIOError(path, f"unsupported PNG mode {mode!r} (8-bit grayscale or RGB only)")
    except FileNotFoundError as exc:
        raise ImageIOError(path, "file not found") from exc
    except UnidentifiedImageError as exc:
        raise ImageIOError(path, "not a readable PNG") from exc
    except OSError as exc:
        raise ImageIOError(path, f"read failed: {exc}") from exc


def _load_pgm(path) -> GrayImage:
    try:
        raw = Path(path).read_bytes()
    except FileNotFoundError as exc:
        raise ImageIOError(path, "file not found") from exc
    except OSError as exc:
        raise ImageIOError(path, f"read failed: {exc}") from exc

    pos = 0

    def token() -> bytes:
        nonlocal pos
        while pos < len(raw):
            ch = raw[pos : pos + 1]
            if ch == b"#":
                while pos < len(raw) and raw[pos : pos + 1] not in (b"\n", b"\r"):
                    pos += 1
            elif ch.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(raw) and not raw[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ImageIOError(path, "truncated PGM header")
        return raw[start:pos]

    if token() != b"P5":
        raise ImageIOError(path, "not a binary PGM (P5)")
    try:
        width = int(token())
        height = int(token())
        maxval = int(token())
    except ValueError as exc:
        raise ImageIOError(path, "malformed PGM header") from exc
    if width < 1 or height < 1:
        raise ImageIOError(path, f"invalid PGM dimensions {width}x{height}")
    if maxval > 255:
        raise ImageIOError(path, f"unsupported PGM maxval {maxval} (8-bit only)")
    pos += 1  # exactly one whitespace byte separates header and raster
    raster = raw[pos : pos + width * height]
    if len(raster) < width * height:
        raise ImageIOError(path, "truncated PGM raster")
    arr = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return arr.astype(np.float64) / 255.0
