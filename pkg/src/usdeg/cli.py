"""Command-line front end wiring all modules into reproducible runs.

Every subcommand resolves its configuration from built-in defaults, an
optional --config JSON file, then explicit flags (highest precedence),
and logs the fully resolved configuration next to its outputs so any
run can be re-executed via --config alone.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import bench, fileio
from .degrade import (
    add_gaussian_noise,
    apply_degradation,
    blur,
    draw_training_degradation,
    gaussian_kernel,
    kernel_from_sigma,
    speckle,
)
from .imgcore import augment_patch, draw_augment_spec
from .metrics import RoiSpec, extract_profile, profile_report, quality_report
from .nllr import NllrParams, nllr_denoise
from .rng import stream
from .spectral import fourier_perturb

THREADS_ENV_VAR = "US_DEGRADE_THREADS"

_DEFAULTS: dict[str, dict] = {
    "degrade": {
        "in_path": None,
        "out_path": None,
        "seed": 0,
        "blur_k": None,
        "blur_sigma": None,
        "gauss_sigma": None,
        "fourier_gamma": None,
        "speckle_l": None,
        "train_draw": False,
    },
    "augment": {
        "in_path": None,
        "out_path": None,
        "seed": 0,
        "resize": 128,
        "crop": 64,
    },
    "nllr": {
        "in_path": None,
        "out_path": None,
        "patch": 8,
        "stride": 4,
        "search": 15,
        "group": 32,
        "shrink_lambda": 1.2,
        "iters": 1,
        "relax": 0.1,
    },
    "metrics": {
        "ref_path": None,
        "test_path": None,
        "json_path": None,
    },
    "profile": {
        "in_path": None,
        "roi": None,
        "axis": "rows",
        "json_path": None,
        "csv_path": None,
        "fwhm_mode": "interp",
    },
    "ladder": {
        "dataset": None,
        "kind": None,
        "restorer": "identity",
        "seeds": 1,
        "seed": 0,
        "levels": None,
        "out_dir": None,
        "threads": "auto",
        "wiener_nsr": 0.01,
    },
    "pairs": {
        "dataset": None,
        "kind": None,
        "per_image": 1,
        "seed": 0,
        "out_dir": None,
    },
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="usdeg",
        description="Degradation modeling, denoising, and evaluation toolkit for B-mode ultrasound images.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("degrade", help="corrupt an image (fixed parameters or a training draw)")
    d.add_argument("--in", dest="in_path", metavar="IMG")
    d.add_argument("--out", dest="out_path", metavar="IMG")
    d.add_argument("--seed", type=int)
    d.add_argument("--blur-k", dest="blur_k", type=int, help="odd Gaussian kernel size")
    d.add_argument("--blur-sigma", dest="blur_sigma", type=float, help="Gaussian sigma (sets k)")
    d.add_argument("--gauss-sigma", dest="gauss_sigma", type=float, help="additive noise std")
    d.add_argument("--fourier-gamma", dest="fourier_gamma", type=float, help="spectral blend in [0,1]")
    d.add_argument("--speckle-L", dest="speckle_l", type=float, help="equivalent number of looks")
    d.add_argument("--train-draw", dest="train_draw", action="store_const", const=True,
                   help="draw a full training degradation instead of fixed parameters")
    d.add_argument("--config")

    a = sub.add_parser("augment", help="seed-drawn resize/rotate/crop patch")
    a.add_argument("--in", dest="in_path", metavar="IMG")
    a.add_argument("--out", dest="out_path", metavar="IMG")
    a.add_argument("--seed", type=int)
    a.add_argument("--resize", type=int)
    a.add_argument("--crop", type=int)
    a.add_argument("--config")

    n = sub.add_parser("nllr", help="non-local low-rank denoising")
    n.add_argument("--in", dest="in_path", metavar="IMG")
    n.add_argument("--out", dest="out_path", metavar="IMG")
    n.add_argument("--patch", type=int)
    n.add_argument("--stride", type=int)
    n.add_argument("--search", type=int)
    n.add_argument("--group", type=int)
    n.add_argument("--lambda", dest="shrink_lambda", type=float)
    n.add_argument("--iters", type=int)
    n.add_argument("--relax", type=float)
    n.add_argument("--config")

    m = sub.add_parser("metrics", help="PSNR/SSIM of a test image against a reference")
    m.add_argument("--ref", dest="ref_path", metavar="IMG")
    m.add_argument("--test", dest="test_path", metavar="IMG")
    m.add_argument("--json", dest="json_path", metavar="FILE",
                   help="write the report here instead of stdout")
    m.add_argument("--config")

    p = sub.add_parser("profile", help="ROI intensity profile and resolution metrics")
    p.add_argument("--in", dest="in_path", metavar="IMG")
    p.add_argument("--roi", help="r0:r1,c0:c1 (half-open pixel ranges)")
    p.add_argument("--axis", choices=["rows", "cols"])
    p.add_argument("--json", dest="json_path", metavar="FILE")
    p.add_argument("--csv", dest="csv_path", metavar="FILE", help="write profile samples as CSV")
    p.add_argument("--fwhm-mode", dest="fwhm_mode", choices=["interp", "count"])
    p.add_argument("--config")

    l = sub.add_parser("ladder", help="severity-ladder benchmark over an image directory")
    l.add_argument("--dataset", metavar="DIR")
    l.add_argument("--kind", choices=["gaussian", "speckle", "blur"])
    l.add_argument("--restorer", help="identity | nllr | wiener | dir:PATH")
    l.add_argument("--seeds", type=int, help="noise seeds per image and level")
    l.add_argument("--seed", type=int, help="base seed")
    l.add_argument("--levels", help="comma-separated severity levels (default: stock ladder)")
    l.add_argument("--out", dest="out_dir", metavar="DIR")
    l.add_argument("--threads", help="worker threads or 'auto'")
    l.add_argument("--wiener-nsr", dest="wiener_nsr", type=float)
    l.add_argument("--config")

    r = sub.add_parser("pairs", help="emit (degraded, target, spec) training triples")
    r.add_argument("--dataset", metavar="DIR")
    r.add_argument("--kind", choices=["natural", "ultrasound"])
    r.add_argument("--per-image", dest="per_image", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--out", dest="out_dir", metavar="DIR")
    r.add_argument("--config")

    return ap


def _resolve(command: str, args: argparse.Namespace) -> dict:
    resolved = dict(_DEFAULTS[command])
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            doc = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValueError(f"cannot read config {config_path}: {exc}") from exc
        unknown = set(doc) - set(resolved) - {"command"}
        if unknown:
            raise ValueError(f"unknown config keys for {command}: {sorted(unknown)}")
        resolved.update({k: v for k, v in doc.items() if k in resolved})
    for key in resolved:
        value = getattr(args, key, None)
        if value is not None:
            resolved[key] = value
    return resolved


def _require(resolved: dict, *keys: str) -> None:
    missing = [k for k in keys if resolved.get(k) is None]
    if missing:
        flags = ", ".join("--" + k.replace("_path", "").replace("_", "-") for k in missing)
        raise ValueError(f"missing required option(s): {flags}")


def _write_json(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _sibling(out_path, suffix: str) -> Path:
    out_path = Path(out_path)
    return out_path.with_name(out_path.stem + suffix)


def _log_config(command: str, resolved: dict, path) -> None:
    _write_json({"command": command, **resolved}, path)


def _load_dataset(directory) -> list[tuple[str, "object"]]:
    root = Path(directory)
    if not root.is_dir():
        raise ValueError(f"dataset directory not found: {directory}")
    files = sorted(p for p in root.iterdir() if p.suffix.lower() in (".png", ".pgm"))
    if not files:
        raise ValueError(f"no .png/.pgm images in {directory}")
    return [(p.stem, fileio.load_image(p)) for p in files]


def _resolve_threads(setting) -> int:
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        setting = env
    if setting in (None, "auto"):
        return os.cpu_count() or 1
    count = int(setting)
    if count < 1:
        raise ValueError("thread count must be positive")
    return count


def _run_degrade(resolved: dict) -> int:
    _require(resolved, "in_path", "out_path")
    img = fileio.load_image(resolved["in_path"])
    rng = stream(int(resolved["seed"]))
    if resolved["train_draw"]:
        spec = draw_training_degradation(rng)
        out = apply_degradation(img, spec)
        spec_doc = {"mode": "train", **spec.to_json()}
    else:
        if resolved["blur_k"] is not None and resolved["blur_sigma"] is not None:
            raise ValueError("--blur-k and --blur-sigma are mutually exclusive")
        out = img
        if resolved["blur_k"] is not None:
            out = blur(out, gaussian_kernel(int(resolved["blur_k"])))
        elif resolved["blur_sigma"]:
            out = blur(out, kernel_from_sigma(float(resolved["blur_sigma"])))
        if resolved["gauss_sigma"] is not None:
            out = add_gaussian_noise(out, float(resolved["gauss_sigma"]), rng)
        if resolved["fourier_gamma"] is not None:
            out = fourier_perturb(out, float(resolved["fourier_gamma"]), rng)
        if resolved["speckle_l"] is not None:
            out = speckle(out, float(resolved["speckle_l"]), rng)
        spec_doc = {
            "mode": "stress",
            "blur_k": resolved["blur_k"],
            "blur_sigma": resolved["blur_sigma"],
            "gauss_sigma": resolved["gauss_sigma"],
            "fourier_gamma": resolved["fourier_gamma"],
            "speckle_l": resolved["speckle_l"],
            "seed": str(resolved["seed"]),
        }
    fileio.save_image(out, resolved["out_path"])
    _write_json(spec_doc, _sibling(resolved["out_path"], ".spec.json"))
    _log_config("degrade", resolved, _sibling(resolved["out_path"], ".config.json"))
    return 0


def _run_augment(resolved: dict) -> int:
    _require(resolved, "in_path", "out_path")
    img = fileio.load_image(resolved["in_path"])
    rng = stream(int(resolved["seed"]))
    spec = draw_augment_spec(
        rng, target_resize=int(resolved["resize"]), crop_size=int(resolved["crop"])
    )
    patch = augment_patch(img, spec)
    fileio.save_image(patch, resolved["out_path"])
    _write_json(spec.to_json(), _sibling(resolved["out_path"], ".spec.json"))
    _log_config("augment", resolved, _sibling(resolved["out_path"], ".config.json"))
    return 0


def _run_nllr(resolved: dict) -> int:
    _require(resolved, "in_path", "out_path")
    img = fileio.load_image(resolved["in_path"])
    params = NllrParams(
        patch_size=int(resolved["patch"]),
        stride=int(resolved["stride"]),
        search_radius=int(resolved["search"]),
        group_size=int(resolved["group"]),
        shrink_lambda=float(resolved["shrink_lambda"]),
        iterations=int(resolved["iters"]),
        relax_delta=float(resolved["relax"]),
    )
    fileio.save_image(nllr_denoise(img, params), resolved["out_path"])
    _log_config("nllr", resolved, _sibling(resolved["out_path"], ".config.json"))
    return 0


def _run_metrics(resolved: dict) -> int:
    _require(resolved, "ref_path", "test_path")
    ref = fileio.load_image(resolved["ref_path"])
    test = fileio.load_image(resolved["test_path"])
    doc = quality_report(ref, test).to_json()
    if resolved["json_path"]:
        _write_json(doc, resolved["json_path"])
        _log_config("metrics", resolved, _sibling(resolved["json_path"], ".config.json"))
    else:
        print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def _parse_roi(text: str) -> tuple[tuple[int, int], tuple[int, int]]:
    try:
        rows_part, cols_part = text.split(",")
        r0, r1 = (int(v) for v in rows_part.split(":"))
        c0, c1 = (int(v) for v in cols_part.split(":"))
    except ValueError as exc:
        raise ValueError(f"cannot parse ROI {text!r} (expected r0:r1,c0:c1)") from exc
    return (r0, r1), (c0, c1)


def _run_profile(resolved: dict) -> int:
    _require(resolved, "in_path", "roi")
    img = fileio.load_image(resolved["in_path"])
    rows, cols = _parse_roi(resolved["roi"])
    axis = "along_rows" if resolved["axis"] == "rows" else "along_cols"
    profile = extract_profile(img, RoiSpec(rows, cols, axis))
    report = profile_report(profile, fwhm_mode=resolved["fwhm_mode"])
    if resolved["csv_path"]:
        lines = ["index,value"] + [f"{i},{v!r}" for i, v in enumerate(profile)]
        Path(resolved["csv_path"]).write_text("\n".join(lines) + "\n", encoding="utf-8")
    doc = {"roi": resolved["roi"], "axis": resolved["axis"], "samples": len(profile), **report.to_json()}
    if resolved["json_path"]:
        _write_json(doc, resolved["json_path"])
        _log_config("profile", resolved, _sibling(resolved["json_path"], ".config.json"))
    else:
        print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def _parse_levels(value) -> tuple[float, ...] | None:
    if value is None:
        return None
    if isinstance(value, str):
        return tuple(float(v) for v in value.split(",") if v.strip())
    return tuple(float(v) for v in value)


def _run_ladder(resolved: dict) -> int:
    _require(resolved, "dataset", "kind", "out_dir")
    images = _load_dataset(resolved["dataset"])
    kind = resolved["kind"]
    levels = _parse_levels(resolved["levels"]) or bench.default_ladders()[kind].levels
    spec = bench.LadderSpec(
        kind=kind,
        levels=levels,
        seeds_per_image=int(resolved["seeds"]),
        restorer=resolved["restorer"],
    )
    report = bench.run_ladder(
        images,
        spec,
        base_seed=int(resolved["seed"]),
        threads=_resolve_threads(resolved["threads"]),
        wiener_nsr=float(resolved["wiener_nsr"]),
    )
    out = Path(resolved["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    bench.write_ladder_csv(report, out / f"ladder_{kind}.csv")
    bench.write_ladder_json(report, out / f"ladder_{kind}.json")
    _log_config("ladder", resolved, out / "run_config.json")
    errors = sum(1 for r in report.rows if r.error)
    if errors:
        print(f"ladder finished with {errors}/{len(report.rows)} error rows", file=sys.stderr)
    if errors == len(report.rows):
        return 1
    return 0


def _run_pairs(resolved: dict) -> int:
    _require(resolved, "dataset", "kind", "out_dir")
    images = [(iid, img, resolved["kind"]) for iid, img in _load_dataset(resolved["dataset"])]
    sink = bench.directory_pair_sink(resolved["out_dir"])
    summary = bench.emit_pair_dataset(
        images,
        count_per_image=int(resolved["per_image"]),
        base_seed=int(resolved["seed"]),
        out_sink=sink,
    )
    out = Path(resolved["out_dir"])
    _write_json(summary, out / "pairs_summary.json")
    _log_config("pairs", resolved, out / "run_config.json")
    print(f"emitted {summary['pairs']} pairs ({len(summary['errors'])} errors)")
    return 0


_RUNNERS = {
    "degrade": _run_degrade,
    "augment": _run_augment,
    "nllr": _run_nllr,
    "metrics": _run_metrics,
    "profile": _run_profile,
    "ladder": _run_ladder,
    "pairs": _run_pairs,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        resolved = _resolve(args.command, args)
        return _RUNNERS[args.command](resolved)
    except (fileio.ImageIOError, ValueError) as exc:
        print(f"usdeg: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
