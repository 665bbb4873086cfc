"""Command-line front end: the square search, the end-to-end theorem
pipeline, and small report commands over the catalog.

Exit codes: 0 success / complete certificate, 2 partial certificate,
3 invalid input.
"""

from __future__ import annotations

import argparse
import math
import multiprocessing
import sys
import time
from dataclasses import dataclass, field

from . import __version__
from .curves import (CURVES, CURVE_BY_ID, ab_to_pq, catalog, condition_value,
                     recover_ab)
from .elementary import square_criterion, u7_solutions
from .exact import is_perfect_square, perfect_square_root
from .jsonio import dump, dumps, encode_point, encode_rational
from .lucas import (LucasParams, classify_degenerate, is_degenerate, lucas_u,
                    square_term_indices)


# --- square search ----------------------------------------------------------

def _scan_strip(args) -> list:
    """Hits (p, q, n, root) for one value of p over the whole q range."""
    p, q_max, n_max = args
    out = []
    for q in range(-q_max, q_max + 1):
        if q == 0 or math.gcd(p, q) != 1:
            continue
        params = LucasParams(p, q)
        if is_degenerate(params):
            continue
        for n, r in square_term_indices(params, n_max):
            out.append((p, q, n, r))
    return out


def cmd_search(p_max: int, q_max: int, n_max: int, workers: int) -> dict:
    """Scan all coprime nondegenerate (P, Q) with 0 < |P| <= p_max,
    0 < |Q| <= q_max for square terms U_n, 2 <= n <= n_max.

    The merge is a deterministic sort, so the report is independent of the
    worker count.
    """
    if min(p_max, q_max, n_max, workers) < 1:
        raise ValueError("all bounds must be >= 1")
    strips = [(p, q_max, n_max) for p in range(-p_max, p_max + 1) if p != 0]
    t0 = time.monotonic()
    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            chunks = pool.map(_scan_strip, strips, chunksize=8)
    else:
        chunks = [_scan_strip(s) for s in strips]
    hits = sorted(h for chunk in chunks for h in chunk)
    per_n: dict = {}
    for p, q, n, r in hits:
        per_n.setdefault(n, []).append((p, q, r))
    return {
        "p_max": p_max, "q_max": q_max, "n_max": n_max,
        "indices": sorted(per_n),
        "hits_per_n": {str(n): len(v) for n, v in sorted(per_n.items())},
        "n8_pairs": sorted({(p, q) for p, q, _ in per_n.get(8, [])}),
        "elapsed_s": round(time.monotonic() - t0, 2),
    }


# --- theorem pipeline -------------------------------------------------------

RANK1_IDS = ("E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8",
             "E9", "E11", "E12")
RANK2_IDS = ("E10",)


@dataclass
class TheoremCertificate:
    version: str
    precision: int
    driver_records: list
    descent_records: list
    final_pairs: list
    partial: bool = False
    failing: list = field(default_factory=list)
    search_summary: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "tool": {"name": "lucassq", "version": self.version},
            "precision": {"padic_k": self.precision},
            "drivers": self.driver_records,
            "descents": self.descent_records,
            "final_pairs": [[p, q] for p, q in self.final_pairs],
            "partial": self.partial,
            "failing_cosets": self.failing,
            "search": self.search_summary,
        }


def _driver_record(curve, result) -> dict:
    return {
        "curve": curve.id,
        "rank": curve.rank,
        "precision": result.precision,
        "m0": result.m0,
        "cosets": [{"coset": r.coset, "eps": r.eps, "verdict": r.verdict,
                    "bound": r.bound, "detail": r.detail}
                   for r in result.reports],
        "survivors": [encode_point(pt) for pt in result.survivors],
    }


def _descent_record(curve, pt) -> dict:
    sol = recover_ab(curve, pt)
    rec = {"curve": curve.id, "point": encode_point(pt),
           "condition_value": None, "accepted": False}
    cond = condition_value(curve, pt)
    if cond is not None:
        rec["condition_value"] = encode_rational(cond)
    if sol is None:
        rec["reject_reason"] = "no rational descent data"
        return rec
    rec.update(equation=sol.equation, a=sol.a, b=sol.b,
               ratio=encode_rational(sol.ratio))
    if sol.params is None:
        rec["reject_reason"] = sol.reject_reason
    elif is_degenerate(sol.params):
        rec["pair"] = [sol.params.p, sol.params.q]
        rec["reject_reason"] = "degenerate sequence"
    else:
        rec["accepted"] = True
        rec["pair"] = [sol.params.p, sol.params.q]
        rec["u8"] = lucas_u(sol.params, 8)
    return rec


def cmd_verify_theorem(precision: int = 5, out: str = None) -> tuple:
    """Run every driver, push survivors through the descent maps, and emit
    the certificate.  Returns (certificate, exit_code)."""
    from .padic import rank1_driver, rank2_driver

    drivers, descents, failing = [], [], []
    pairs = set()
    for cid in RANK1_IDS + RANK2_IDS:
        curve = CURVE_BY_ID[cid]
        run = rank2_driver if curve.rank == 2 else rank1_driver
        try:
            result = run(curve, k=precision)
        except Exception as exc:                      # inconclusive coset
            failing.append({"curve": cid, "error": str(exc)})
            continue
        drivers.append(_driver_record(curve, result))
        for pt in result.survivors:
            rec = _descent_record(curve, pt)
            descents.append(rec)
            if rec["accepted"]:
                pairs.add(tuple(rec["pair"]))
    cert = TheoremCertificate(
        version=__version__, precision=precision,
        driver_records=drivers, descent_records=descents,
        final_pairs=sorted(pairs), partial=bool(failing), failing=failing)
    for p, q in cert.final_pairs:
        assert is_perfect_square(lucas_u(LucasParams(p, q), 8))
    if out:
        dump(cert.to_json(), out)
    return cert, (2 if cert.partial else 0)


# --- reports ----------------------------------------------------------------

def _descent_witness(p: int, q: int) -> dict:
    """Invert the descent map over a small (equation, a, b) box."""
    for eq in ("eq1", "eq2", "eq3", "eq4"):
        for a in range(1, 16):
            for b in range(-400, 401):
                if b == 0:
                    continue
                params, _ = ab_to_pq(eq, a, b)
                if params is not None and (params.p, params.q) == (p, q):
                    return {"equation": eq, "a": a, "b": abs(b)}
    return {}


def cmd_classify(n: int, p: int, q: int) -> dict:
    if not 2 <= n <= 8:
        raise ValueError(f"n must be in 2..8, got {n}")
    params = LucasParams(p, q)
    u = lucas_u(params, n)
    rep = {
        "n": n, "P": p, "Q": q, "u_n": u,
        "degeneracy": classify_degenerate(params).name,
        "square": is_perfect_square(u),
        "root": perfect_square_root(u) if u >= 0 else None,
    }
    if n <= 7:
        rep["criterion"] = square_criterion(n, params)
    if n == 7 and rep["square"]:
        fam = u7_solutions(8)
        if (p, q) in fam:
            rep["family_witness"] = {"generator_multiple": fam.index((p, q)) + 1}
    if n == 8 and rep["square"]:
        rep["descent"] = _descent_witness(p, q)
    return rep


def cmd_heights(curve_id: str, digits: int = 30) -> dict:
    from .heights import epsilon_nonarchimedean, height_diff_bound
    if curve_id not in CURVE_BY_ID:
        raise ValueError(f"unknown curve {curve_id!r}")
    curve = CURVE_BY_ID[curve_id]
    c, eps = height_diff_bound(curve_id, digits)
    epi, exact = epsilon_nonarchimedean(curve)
    return {
        "curve": curve_id,
        "epsilon_real": [mp_str(eps[0]), mp_str(eps[1])],
        "epsilon_complex": mp_str(eps[2]),
        "epsilon_finite": mp_str(epi),
        "epsilon_finite_exact": exact,
        "height_diff_bound": mp_str(c),
    }


def mp_str(v) -> str:
    return repr(float(v)) if not isinstance(v, str) else v


def cmd_catalog() -> list:
    return catalog()


# --- argument plumbing ------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lucassq",
        description="perfect squares in Lucas sequences U_n(P,Q), n <= 8")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search", help="scan a (P,Q) box for square terms")
    s.add_argument("--p-max", type=int, default=200)
    s.add_argument("--q-max", type=int, default=200)
    s.add_argument("--n-max", type=int, default=50)
    s.add_argument("--workers", type=int,
                   default=max(1, multiprocessing.cpu_count()))

    v = sub.add_parser("verify-theorem",
                       help="run the full n = 8 certification pipeline")
    v.add_argument("--precision", type=int, default=5,
                   help="3-adic working precision k (modulus 3^k)")
    v.add_argument("--float-digits", type=int, default=50)
    v.add_argument("--out", type=str, default=None,
                   help="write the JSON certificate here")

    c = sub.add_parser("classify", help="classify one pair at one index")
    c.add_argument("n", type=int)
    c.add_argument("P", type=int)
    c.add_argument("Q", type=int)

    h = sub.add_parser("heights", help="height-bound report for one curve")
    h.add_argument("curve", type=str)
    h.add_argument("--float-digits", type=int, default=30)
    h.add_argument("--tol", type=float, default=1e-5)

    sub.add_parser("catalog", help="dump the descent-curve table")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "search":
            print(dumps(cmd_search(args.p_max, args.q_max,
                                   args.n_max, args.workers)))
            return 0
        if args.command == "verify-theorem":
            cert, code = cmd_verify_theorem(args.precision, args.out)
            print(dumps(cert.to_json()))
            return code
        if args.command == "classify":
            print(dumps(cmd_classify(args.n, args.P, args.Q)))
            return 0
        if args.command == "heights":
            print(dumps(cmd_heights(args.curve, args.float_digits)))
            return 0
        if args.command == "catalog":
            print(dumps(cmd_catalog()))
            return 0
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 3


if __name__ == "__main__":
    sys.exit(main())
