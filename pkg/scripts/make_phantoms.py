#!/usr/bin/env python3
"""Write the synthetic phantom suite as PNGs, ready for the CLI.

Usage: python scripts/make_phantoms.py OUTDIR [--size 128]
"""

import argparse
from pathlib import Path

from usdeg import fileio, phantoms


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir")
    ap.add_argument("--size", type=int, default=128)
    args = ap.parse_args()

    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name, img in phantoms.phantom_suite(args.size):
        path = out / f"{name}.png"
        fileio.save_image(img, path)
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
