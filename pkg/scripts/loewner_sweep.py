#!/usr/bin/env python3
"""Sweep matrix sizes and count disagreements between the Loewner order,
the Loewner order of the resolvents, and the resolvent order itself.

The three verdicts are provably equivalent for symmetric PSD pairs, so any
nonzero disagreement count points at a numerical tolerance problem.

Usage:
    python3 scripts/loewner_sweep.py [--sizes 5 10 20 40] [--pairs-per-size 50]
"""

import argparse
import sys
import time

import numpy as np

from resolvent_order.certify import SamplerConfig
from resolvent_order.resolvent_calculus import (
    MonotoneMatrix,
    comparable_psd_pair,
    loewner_chain_check,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[5, 10, 20, 40])
    parser.add_argument("--pairs-per-size", type=int, default=50)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    cfg = SamplerConfig(seed=args.seed, n_pairs=50)
    rng = np.random.default_rng(args.seed)
    total_bad = 0
    print(f"{'n':>5} {'pairs':>6} {'disagree':>9} {'seconds':>8}")
    for n in args.sizes:
        t0 = time.perf_counter()
        bad = 0
        for _ in range(args.pairs_per_size):
            A, B = comparable_psd_pair(rng, n)
            rep = loewner_chain_check(
                MonotoneMatrix.of(A), MonotoneMatrix.of(B), cfg)
            if not (rep.consistent and rep.loewner):
                bad += 1
        total_bad += bad
        print(f"{n:>5} {args.pairs_per_size:>6} {bad:>9} "
              f"{time.perf_counter() - t0:>8.2f}")
    return 0 if total_bad == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
