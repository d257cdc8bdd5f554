#!/usr/bin/env python3
"""Run every gallery construction and print a claim-by-claim table.

Usage:
    python3 scripts/run_gallery.py [--seed 42] [--pairs 500] [--json out.json]
"""

import argparse
import json
import sys

from resolvent_order.certify import SamplerConfig
from resolvent_order.gallery import GALLERY, run_item
from resolvent_order.report import gallery_result_to_json


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--pairs", type=int, default=500)
    parser.add_argument("--json", type=str, default=None,
                        help="write the full JSON report here")
    args = parser.parse_args()

    cfg = SamplerConfig(seed=args.seed, n_pairs=args.pairs)
    results = [run_item(name, cfg) for name in GALLERY]

    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  "
              f"{sum(c.ok for c in r.claims)}/{len(r.claims)} claims")
        for c in r.claims:
            mark = "  ok " if c.ok else "  BAD"
            print(f"{mark}  {c.description}")

    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump([gallery_result_to_json(r) for r in results], fh,
                      indent=2, sort_keys=True)
        print(f"wrote {args.json}")

    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
