#!/usr/bin/env python3
"""Extended (non-gating) certification sweep.

Runs the 3-adic driver on every rank-1 curve and the two-variable driver
on the rank-2 curve, then the full height/box certification on each, and
prints a one-line verdict per curve.  The gating acceptance suite only
certifies the first and the rank-2 curve; this script covers the rest
with the same per-curve coefficient ranges.

Usage:  python3 scripts/certify_all_curves.py [curve_id ...]
"""

import sys
import time

from lucassq.curves import CURVES, CURVE_BY_ID
from lucassq.heights import certify_generators
from lucassq.padic import rank1_driver, rank2_driver


def run_one(curve):
    t0 = time.monotonic()
    driver = rank2_driver if curve.rank == 2 else rank1_driver
    result = driver(curve)
    t_driver = time.monotonic() - t0

    t0 = time.monotonic()
    try:
        cert = certify_generators(curve)
        verdict = cert.conclusion
        names = cert.survivor_names
    except ArithmeticError as exc:
        verdict, names = f"FAILED ({exc})", []
    t_cert = time.monotonic() - t0

    print(f"{curve.id:4s} rank {curve.rank}  "
          f"driver: {len(result.survivors):2d} survivors in {t_driver:6.1f}s  "
          f"heights: {verdict} in {t_cert:6.1f}s  box classes: {names}")


def main(argv):
    ids = argv or [c.id for c in CURVES]
    for cid in ids:
        run_one(CURVE_BY_ID[cid])


if __name__ == "__main__":
    main(sys.argv[1:])
