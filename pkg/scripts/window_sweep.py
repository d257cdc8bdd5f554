#!/usr/bin/env python3
"""Sweep cos(theta) across [0, 1) for several n and report where the scaled
rotator construction is feasible, plus the falsification margin of the
prefix sum at each admissible point.

Usage:
    python3 scripts/window_sweep.py [--n 2 3 4] [--points 25]
"""

import argparse
import math
import sys

import numpy as np

from resolvent_order.gallery import (
    ThetaOutsideWindow,
    feasibility_window,
    partial_sum_failure,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, nargs="+", default=[2, 3, 4])
    parser.add_argument("--points", type=int, default=25)
    args = parser.parse_args()

    for n in args.n:
        lo, hi = feasibility_window(n)
        print(f"n = {n}: admissible cos(theta) in [{lo:.6f}, {hi:.6f})")
        for c in np.linspace(0.02, 0.98, args.points):
            try:
                result = partial_sum_failure(n, math.acos(float(c)))
            except ThetaOutsideWindow:
                continue
            margin = result.params["falsification_margin"]
            status = "pass" if result.passed else "FAIL"
            print(f"  cos(theta) = {c:.4f}  prefix margin = {margin:+.6f}  "
                  f"[{status}]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
