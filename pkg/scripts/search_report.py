#!/usr/bin/env python3
"""Standalone square-term census over a (P, Q) box, with per-index detail.

Prints, for each index n at which some nondegenerate coprime pair has a
square term, the number of hits and a few witnesses.  Defaults reproduce
the published search window.

Usage:  python3 scripts/search_report.py [p_max] [q_max] [n_max]
"""

import multiprocessing
import sys

from lucassq.cli import _scan_strip


def main(argv):
    p_max = int(argv[0]) if len(argv) > 0 else 200
    q_max = int(argv[1]) if len(argv) > 1 else 200
    n_max = int(argv[2]) if len(argv) > 2 else 50
    strips = [(p, q_max, n_max) for p in range(-p_max, p_max + 1) if p]
    with multiprocessing.Pool() as pool:
        chunks = pool.map(_scan_strip, strips, chunksize=8)
    per_n = {}
    for chunk in chunks:
        for p, q, n, r in chunk:
            per_n.setdefault(n, []).append((p, q, r))
    for n in sorted(per_n):
        hits = sorted(per_n[n])
        sample = ", ".join(f"U_{n}({p},{q})={r}^2" for p, q, r in hits[:4])
        print(f"n = {n:3d}: {len(hits):6d} hits   e.g. {sample}")
    print(f"\nindices with square terms: {sorted(per_n)}")
    n8 = sorted({(p, q) for p, q, _ in per_n.get(8, [])})
    print(f"pairs with U_8 square: {n8}")


if __name__ == "__main__":
    main(sys.argv[1:])
