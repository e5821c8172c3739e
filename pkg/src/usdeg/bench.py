"""Benchmark ladders over corruption severity, pluggable restorers, and
paired training-data emission.

A ladder sweeps one corruption family over a list of severity levels,
corrupts every image with per-row independent random streams, applies a
restorer, and scores corrupted and restored outputs against the
pristine image. Reports are bit-reproducible from (images, spec,
base_seed) regardless of thread count.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import fileio
from .degrade import (
    DegradationSpec,
    apply_degradation,
    add_gaussian_noise,
    blur,
    draw_training_degradation,
    gaussian_kernel,
    kernel_from_sigma,
    speckle,
)
from .imgcore import AugmentSpec, augment_patch, clip_unit, draw_augment_spec
from .metrics import psnr, ssim
from .nllr import NllrParams, nllr_denoise
from .rng import stable_id_hash, substream
from .spectral import wiener_deblur

GAUSSIAN_LEVELS = tuple(round(i * 0.01, 2) for i in range(11))
SPECKLE_LEVELS = (1.0, 3.0, 5.0, 7.0, 10.0, 12.0, 15.0, 17.0, 20.0, 22.0, 25.0)
BLUR_SIGMA_LEVELS = (0.0, 3.0, 5.0, 7.0, 9.0, 11.0, 13.0, 15.0)

LADDER_KINDS = ("gaussian", "speckle", "blur")

CSV_HEADER = "image_id,kind,level,seed,psnr_in,ssim_in,psnr_out,ssim_out,error"


@dataclass(frozen=True)
class LadderSpec:
    kind: str
    levels: tuple[float, ...]
    seeds_per_image: int = 1
    restorer: str = "identity"

    def validate(self) -> None:
        if self.kind not in LADDER_KINDS:
            raise ValueError(f"unknown ladder kind {self.kind!r}")
        if not self.levels:
            raise ValueError("ladder needs at least one level")
        if self.seeds_per_image < 1:
            raise ValueError("seeds_per_image must be >= 1")
        lo = min(self.levels)
        if self.kind == "speckle" and lo < 1.0:
            raise ValueError("speckle levels must be >= 1")
        if self.kind in ("gaussian", "blur") and lo < 0.0:
            raise ValueError(f"{self.kind} levels must be >= 0")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "levels": list(self.levels),
            "seeds_per_image": self.seeds_per_image,
            "restorer": self.restorer,
        }


def default_ladders() -> dict[str, LadderSpec]:
    """The stock severity ladders: 11 Gaussian sigmas (0.00-0.10), 11
    speckle looks (1-25), 8 blur sigmas (0-15; 0 means no blur)."""
    return {
        "gaussian": LadderSpec("gaussian", GAUSSIAN_LEVELS),
        "speckle": LadderSpec("speckle", SPECKLE_LEVELS),
        "blur": LadderSpec("blur", BLUR_SIGMA_LEVELS),
    }


@dataclass
class LadderRow:
    image_id: str
    kind: str
    level: float
    seed: int
    psnr_in: float
    ssim_in: float
    psnr_out: float
    ssim_out: float
    error: str = ""


@dataclass
class LadderReport:
    spec: LadderSpec
    base_seed: int
    rows: list[LadderRow] = field(default_factory=list)


class RestorerError(RuntimeError):
    """Per-row restoration failure; the ladder records it and continues."""


Restorer = Callable[..., np.ndarray]


def make_restorer(
    name: str,
    nllr_params: NllrParams | None = None,
    wiener_nsr: float = 0.01,
) -> Restorer:
    """Build a restorer callable.

    Names: "identity", "nllr", "wiener", or "dir:PATH" to score
    precomputed outputs stored as
    PATH/{image_id}_{kind}_L{level_index}_s{seed_index}.png.
    The wiener restorer inverts the blur ladder's own kernel at each
    level; on non-blur ladders it falls back to a fixed k=3 surrogate.
    """
    if name == "identity":
        return lambda img, **_: img
    if name == "nllr":
        params = nllr_params or NllrParams()

        def _nllr(img, **_):
            try:
                return nllr_denoise(img, params)
            except ValueError as exc:
                raise RestorerError(str(exc)) from exc

        return _nllr
    if name == "wiener":

        def _wiener(img, *, kind, level, **_):
            kernel = kernel_from_sigma(level) if kind == "blur" and level > 0 else gaussian_kernel(3)
            return wiener_deblur(img, kernel, wiener_nsr)

        return _wiener
    if name.startswith("dir:"):
        root = Path(name[4:])

        def _external(img, *, kind, image_id, level_index, seed_index, **_):
            path = root / f"{image_id}_{kind}_L{level_index}_s{seed_index}.png"
            try:
                return fileio.load_image(path)
            except fileio.ImageIOError as exc:
                raise RestorerError(str(exc)) from exc

        return _external
    raise ValueError(f"unknown restorer {name!r}")


def corrupt_at_level(img: np.ndarray, kind: str, level: float, rng: np.random.Generator) -> np.ndarray:
    """Apply one ladder corruption; level 0 of gaussian/blur is the
    identity corruption."""
    if kind == "gaussian":
        return add_gaussian_noise(img, level, rng)
    if kind == "speckle":
        return speckle(img, level, rng)
    if kind == "blur":
        if level == 0:
            return clip_unit(img)
        return blur(img, kernel_from_sigma(level))
    raise ValueError(f"unknown ladder kind {kind!r}")


def run_ladder(
    images: list[tuple[str, np.ndarray]],
    spec: LadderSpec,
    base_seed: int,
    threads: int = 1,
    nllr_params: NllrParams | None = None,
    wiener_nsr: float = 0.01,
) -> LadderReport:
    """Corrupt/restore/score every (image, level, seed) combination.

    Each row draws from its own stream keyed by (base_seed,
    hash(image_id), level_index, seed_index), so single rows reproduce
    in isolation and thread count cannot change the report.
    """
    spec.validate()
    if not images:
        raise ValueError("image list is empty")
    restore = make_restorer(spec.restorer, nllr_params=nllr_params, wiener_nsr=wiener_nsr)

    tasks = [
        (image_id, np.asarray(img, dtype=np.float64), li, float(level), si)
        for image_id, img in images
        for li, level in enumerate(spec.levels)
        for si in range(spec.seeds_per_image)
    ]

    def run_one(task):
        image_id, src, level_index, level, seed_index = task
        rng = substream(base_seed, stable_id_hash(image_id), level_index, seed_index)
        corrupted = corrupt_at_level(src, spec.kind, level, rng)
        psnr_out = math.nan
        ssim_out = math.nan
        error = ""
        try:
            restored = restore(
                corrupted,
                kind=spec.kind,
                level=level,
                image_id=image_id,
                level_index=level_index,
                seed_index=seed_index,
            )
            restored = np.asarray(restored, dtype=np.float64)
            if restored.shape != src.shape:
                raise RestorerError(f"restored shape {restored.shape} != image shape {src.shape}")
            psnr_out = psnr(src, restored)
            ssim_out = ssim(src, restored)
        except RestorerError as exc:
            error = str(exc)
        return LadderRow(
            image_id=image_id,
            kind=spec.kind,
            level=level,
            seed=seed_index,
            psnr_in=psnr(src, corrupted),
            ssim_in=ssim(src, corrupted),
            psnr_out=psnr_out,
            ssim_out=ssim_out,
            error=error,
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run_one, tasks))
    else:
        rows = [run_one(t) for t in tasks]
    return LadderReport(spec=spec, base_seed=base_seed, rows=rows)


def _mean_std(values: list[float]) -> tuple[float, float]:
    if not values:
        return math.nan, math.nan
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return mean, std


def aggregate(report: LadderReport) -> list[dict]:
    """Per-level mean/std of each metric.

    +inf PSNR rows are excluded from the mean and counted separately; a
    level where every PSNR is +inf reports mean inf. Input metrics
    aggregate over all rows, output metrics over non-error rows only.
    """
    if not report.rows:
        raise ValueError("report has no rows")
    out = []
    for level in report.spec.levels:
        level = float(level)
        rows = [r for r in report.rows if r.level == level]
        ok_rows = [r for r in rows if not r.error]
        entry = {
            "kind": report.spec.kind,
            "level": level,
            "n_rows": len(rows),
            "n_errors": len(rows) - len(ok_rows),
        }
        for key, pool in (("psnr_in", rows), ("psnr_out", ok_rows)):
            vals = [getattr(r, key) for r in pool]
            finite = [v for v in vals if math.isfinite(v)]
            inf_count = sum(1 for v in vals if math.isinf(v))
            mean, std = _mean_std(finite)
            if not finite and inf_count:
                mean, std = math.inf, 0.0
            entry[f"{key}_mean"] = mean
            entry[f"{key}_std"] = std
            entry[f"{key}_inf_count"] = inf_count
        for key, pool in (("ssim_in", rows), ("ssim_out", ok_rows)):
            vals = [getattr(r, key) for r in pool if math.isfinite(getattr(r, key))]
            mean, std = _mean_std(vals)
            entry[f"{key}_mean"] = mean
            entry[f"{key}_std"] = std
        out.append(entry)
    return out


def _fmt(value: float) -> str:
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def ladder_csv_text(report: LadderReport) -> str:
    lines = [CSV_HEADER]
    for r in report.rows:
        lines.append(
            ",".join(
                [
                    r.image_id,
                    r.kind,
                    _fmt(float(r.level)),
                    str(r.seed),
                    _fmt(r.psnr_in),
                    _fmt(r.ssim_in),
                    _fmt(r.psnr_out),
                    _fmt(r.ssim_out),
                    r.error.replace(",", ";").replace("\n", " "),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_ladder_csv(report: LadderReport, path) -> None:
    Path(path).write_text(ladder_csv_text(report), encoding="utf-8")


def _jsonable(value):
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return None
    return value


def write_ladder_json(report: LadderReport, path) -> None:
    doc = {
        "spec": report.spec.to_json(),
        "base_seed": str(report.base_seed),
        "row_count": len(report.rows),
        "error_count": sum(1 for r in report.rows if r.error),
        "aggregates": [
            {k: _jsonable(v) for k, v in entry.items()} for entry in aggregate(report)
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


@dataclass
class PairRecord:
    """One emitted training pair plus everything needed to replay it."""

    image_id: str
    index: int
    target_kind: str
    augment: AugmentSpec
    degradation: DegradationSpec
    nllr_params: NllrParams | None
    degraded: np.ndarray
    target: np.ndarray

    def spec_json(self) -> dict:
        return {
            "image_id": self.image_id,
            "index": self.index,
            "target_kind": self.target_kind,
            "augment": self.augment.to_json(),
            "degradation": self.degradation.to_json(),
            "nllr": self.nllr_params.to_json() if self.nllr_params else None,
        }


def emit_pair_dataset(
    images: list[tuple[str, np.ndarray, str]],
    count_per_image: int,
    base_seed: int,
    out_sink: Callable[[PairRecord], None],
    nllr_params: NllrParams | None = None,
) -> dict:
    """Emit (degraded, target, spec) triples for tagged source images.

    Targets: natural images keep the augmented patch; ultrasound images
    pass it through non-local low-rank denoising. Per pair, one stream
    keyed by (base_seed, hash(image_id), pair index) drives the
    augmentation draw then the degradation draw.
    """
    if count_per_image < 1:
        raise ValueError("count_per_image must be >= 1")
    params = nllr_params or NllrParams()
    emitted = 0
    errors: list[dict] = []
    for image_id, img, target_kind in images:
        if target_kind not in ("natural", "ultrasound"):
            raise ValueError(f"unknown target kind {target_kind!r}")
        src = np.asarray(img, dtype=np.float64)
        for index in range(count_per_image):
            rng = substream(base_seed, stable_id_hash(image_id), index)
            aug = draw_augment_spec(rng)
            deg = draw_training_degradation(rng)
            patch = augment_patch(src, aug)
            degraded = apply_degradation(patch, deg)
            if target_kind == "ultrasound":
                try:
                    target = nllr_denoise(patch, params)
                except ValueError as exc:
                    errors.append({"image_id": image_id, "index": index, "error": str(exc)})
                    continue
            else:
                target = patch
            out_sink(
                PairRecord(
                    image_id=image_id,
                    index=index,
                    target_kind=target_kind,
                    augment=aug,
                    degradation=deg,
                    nllr_params=params if target_kind == "ultrasound" else None,
                    degraded=degraded,
                    target=target,
                )
            )
            emitted += 1
    return {"pairs": emitted, "errors": errors}


def directory_pair_sink(out_dir) -> Callable[[PairRecord], None]:
    """Sink writing {id}_{k}_input.png, {id}_{k}_target.png, and
    {id}_{k}_spec.json into out_dir."""
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)

    def sink(record: PairRecord) -> None:
        stem = f"{record.image_id}_{record.index}"
        fileio.save_image(record.degraded, root / f"{stem}_input.png")
        fileio.save_image(record.target, root / f"{stem}_target.png")
        (root / f"{stem}_spec.json").write_text(
            json.dumps(record.spec_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    return sink


def regenerate_pair(source_img: np.ndarray, spec_doc: dict) -> tuple[np.ndarray, np.ndarray]:
    """Rebuild the (degraded, target) pair from a pair spec document;
    bit-exact given the same source image."""
    aug = AugmentSpec.from_json(spec_doc["augment"])
    deg = DegradationSpec.from_json(spec_doc["degradation"])
    patch = augment_patch(np.asarray(source_img, dtype=np.float64), aug)
    degraded = apply_degradation(patch, deg)
    if spec_doc.get("nllr"):
        target = nllr_denoise(patch, NllrParams.from_json(spec_doc["nllr"]))
    else:
        target = patch
    return degraded, target
