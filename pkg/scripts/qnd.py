#!/usr/bin/env python3
"""Cavity pull and linewidths for ground and excited qubit versus T1.

Usage: scripts/qnd.py [OUTDIR] [--delta-mhz 1000] [--t1-us 2 20 inf]
"""

import argparse
import math
from pathlib import Path

from cqed_circuits import dispersive_pull, transmon_device
from cqed_circuits.core import TWO_PI
from cqed_circuits.spectra import qnd_pull


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("outdir", nargs="?", default=".", type=Path)
    parser.add_argument("--delta-mhz", type=float, default=1000.0)
    parser.add_argument("--t1-us", type=float, nargs="+", default=[2.0, 20.0, math.inf])
    args = parser.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    device = transmon_device()
    delta = args.delta_mhz * 1e6
    oracle = dispersive_pull(device, TWO_PI * delta).difference / TWO_PI
    print(f"oracle pull at {args.delta_mhz:g} MHz: {oracle / 1e6:.4f} MHz")
    print(f"{'T1_us':>7s} {'pull_MHz':>9s} {'fwhm-_MHz':>10s} {'fwhm+_MHz':>10s} {'ratio':>6s}")
    for t1_us in args.t1_us:
        t1 = None if math.isinf(t1_us) else t1_us * 1e-6
        result = qnd_pull(device, delta, t1)
        result.write(args.outdir / f"qnd_t1_{t1_us:g}us")
        lo, hi = result.linewidths
        print(f"{t1_us:7g} {result.pull / 1e6:9.4f} {lo / 1e6:10.4f} {hi / 1e6:10.4f} {hi / lo:6.3f}")


if __name__ == "__main__":
    main()
