#!/usr/bin/env python3
"""Regenerate the four (alpha3, alpha4) parametric traces as CSV + SVG.

Writes figures/trace{1..4}.csv and .svg using the preset parameter ranges.
Negative shape values are out of scope (no admissibility condition), so
the sweeps cover the d >= 0 portion of each region; the exact trace
geometry is meant for visual inspection, not for automated assertions.
"""

import pathlib
import subprocess
import sys

OUT = pathlib.Path(__file__).resolve().parent.parent / "figures"


def main() -> int:
    OUT.mkdir(exist_ok=True)
    for preset in (1, 2, 3, 4):
        for fmt, ext in (("csv", "csv"), ("svg", "svg")):
            target = OUT / f"trace{preset}.{ext}"
            cmd = [
                sys.executable, "-m", "tdlinnik", "figure",
                "--preset", str(preset),
                "--grid-c", "60", "--grid-d", "60",
                "--format", fmt, "--out", str(target),
            ]
            subprocess.run(cmd, check=True)
            print(f"wrote {target}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
