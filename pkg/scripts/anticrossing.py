#!/usr/bin/env python3
"""Anticrossing and Lamb-shift tables from every route, written as CSV.

Usage: scripts/anticrossing.py [OUTDIR] [--fast]

``--fast`` skips the time-domain route (about 2 s per detuning).
"""

import argparse
import time
from pathlib import Path

import numpy as np

from cqed_circuits import transmon_device
from cqed_circuits.spectra import anticrossing_sweep


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("outdir", nargs="?", default=".", type=Path)
    parser.add_argument("--fast", action="store_true", help="oracle and circuit routes only")
    args = parser.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    device = transmon_device()
    routes = ("oracle", "circuit-ac") if args.fast else ("oracle", "circuit-ac", "rbe-fft")
    grids = {
        "anticrossing": np.linspace(-600e6, 600e6, 25),
        "lambshift": np.linspace(100e6, 600e6, 11),
    }
    for name, deltas in grids.items():
        for route in routes:
            start = time.perf_counter()
            result = anticrossing_sweep(device, deltas, route)
            path = args.outdir / f"{name}_{route}.csv"
            result.to_csv(path)
            print(f"{path}  ({len(deltas)} points, {time.perf_counter() - start:.1f} s)")

    print("\ndelta_MHz  " + "  ".join(f"{r:>11s}" for r in routes))
    tables = {r: np.genfromtxt(args.outdir / f"lambshift_{r}.csv", delimiter=",", names=True,
                               dtype=None, encoding="ascii")["lamb_shift_hz"] for r in routes}
    for k, delta in enumerate(grids["lambshift"]):
        print(f"{delta / 1e6:9.0f}  " + "  ".join(f"{tables[r][k] / 1e6:11.4f}" for r in routes))
    at_g = anticrossing_sweep(device, [266e6], "oracle").rows[0].lamb_shift
    print(f"oracle at 266 MHz: {at_g / 1e6:.4f} MHz")


if __name__ == "__main__":
    main()
