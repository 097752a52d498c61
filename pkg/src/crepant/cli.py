"""Command-line front end: ``analyze``, ``poly``, ``hj``, ``scan``, ``oracle``.

Exit codes: 0 success, 2 parse or validation error, 3 disagreement between
the independent crepancy criteria (which signals a bug, not a user error).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd
from typing import Iterator, List, Optional

from .criteria import (
    CrossCheck,
    Decision,
    TwoParameterType,
    cross_check,
    decide_normalized,
)
from .fraction import parse_fraction
from .hj import dlr_criterion, hj_expand
from .lattice import SearchLimits, Triangulation, search_triangulation
from .polynomial import format_word, remainder_polynomial

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DISAGREE = 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class ScanRecord:
    n: int
    r: int
    d: int
    c: int
    verdict_poly: str
    verdict_fast: str
    verdict_hj: Optional[str]
    agree: bool
    witness: str

    @classmethod
    def from_check(cls, chk: CrossCheck) -> "ScanRecord":
        t = chk.t
        if chk.poly.offending is not None:
            o = chk.poly.offending
            witness = f"{format_word(o.word)} -> {o.coefficient.display()} age={o.age}"
        else:
            witness = f"{chk.poly.n_coefficients} coefficients of age 1"
        hj = None
        if chk.dlr is not None:
            hj = (Decision.CREPANT if chk.dlr else Decision.NOT_CREPANT).value
        return cls(t.n, t.r, t.d, t.c, chk.poly.decision.value, chk.fast.decision.value,
                   hj, chk.agree, witness)

    def to_dict(self) -> dict:
        return {
            "n": self.n, "r": self.r, "d": self.d, "c": self.c,
            "verdict_poly": self.verdict_poly,
            "verdict_fast": self.verdict_fast,
            "verdict_hj": self.verdict_hj,
            "agree": self.agree,
            "witness": self.witness,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScanRecord":
        return cls(**data)

    def to_text(self) -> str:
        hj = self.verdict_hj or "skipped"
        flag = "ok" if self.agree else "DISAGREE"
        return (f"n={self.n} r={self.r} d={self.d} c={self.c}  poly={self.verdict_poly} "
                f"fast={self.verdict_fast} hj={hj}  {flag}  [{self.witness}]")


def scan_types(n: int, rmax: int) -> Iterator[TwoParameterType]:
    """Every valid ``1/r(1,d,c,...,c)`` with ``r <= rmax``, ordered by (r, c)."""
    for r in range(2, rmax + 1):
        c = 0
        while 1 + (n - 2) * c <= r and c < r:
            d = r - 1 - (n - 2) * c
            if d < r:
                yield TwoParameterType(n, r, d, c)
            c += 1


def _scan_one(t: TwoParameterType) -> ScanRecord:
    return ScanRecord.from_check(cross_check(t))


def run_scan(n: int, rmax: int, jobs: int = 1) -> List[ScanRecord]:
    types = list(scan_types(n, rmax))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            # map() yields in input order whatever the completion order
            return list(pool.map(_scan_one, types, chunksize=64))
    return [_scan_one(t) for t in types]


def summarize(records: List[ScanRecord]) -> dict:
    return {
        "records": len(records),
        "crepant": sum(r.verdict_poly == "Crepant" for r in records),
        "not_crepant": sum(r.verdict_poly == "NotCrepant" for r in records),
        "hj_skipped": sum(r.verdict_hj is None for r in records),
        "disagreements": sum(not r.agree for r in records),
    }


def _emit(out, obj, as_json: bool, text: str):
    if as_json:
        out.write(json.dumps(obj, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")


def cmd_analyze(args, out) -> int:
    f = parse_fraction(args.type)
    nd = decide_normalized(f)
    v = nd.verdict
    chk = cross_check(nd.two_parameter) if nd.two_parameter is not None else None
    poly = remainder_polynomial(nd.fraction) if args.poly else None

    if args.json:
        payload = {
            "input": f.to_dict(),
            "normalized": nd.fraction.to_dict(),
            "permutation": list(nd.permutation),
            "verdict": v.to_dict(),
        }
        if poly is not None:
            payload["polynomial"] = poly.to_dict()
        if chk is not None:
            payload["cross_check"] = {
                "fast": chk.fast.decision.value,
                "hj": None if chk.hj is None else list(chk.hj.entries),
                "dlr": chk.dlr,
                "skipped": chk.skipped,
                "agree": chk.agree,
            }
        _emit(out, payload, True, "")
    else:
        lines = [f"type: {f}"]
        if nd.permutation != tuple(range(f.n)):
            lines.append(f"normalized: {nd.fraction} (coordinate order {list(nd.permutation)})")
        if poly is not None:
            lines.append(f"remainder polynomial ({len(poly)} terms):")
            lines.extend("  " + line for line in poly.to_text().splitlines())
        lines.append(f"verdict: {v.decision}")
        if v.offending is not None:
            o = v.offending
            lines.append(f"witness: {format_word(o.word)} -> {o.coefficient.display()} "
                         f"age={o.age}")
        elif v.decision is Decision.CREPANT and v.n_coefficients:
            lines.append(f"witness: {v.n_coefficients} coefficients, all of age 1")
        if v.reason:
            lines.append(f"reason: {v.reason}")
        if chk is not None:
            lines.append(f"fast path: {chk.fast.decision}")
            if chk.hj is not None:
                mark = "congruent" if chk.dlr else "not congruent"
                lines.append(f"HJ expansion of {chk.t.r}/{chk.t.d}: {list(chk.hj.entries)} "
                             f"({mark} to 2 mod {chk.t.n - 2})")
            else:
                lines.append(f"HJ check skipped: {chk.skipped}")
            lines.append("cross-check: " + ("agree" if chk.agree else "DISAGREE"))
        out.write("\n".join(lines) + "\n")
    return EXIT_DISAGREE if chk is not None and not chk.agree else EXIT_OK


def cmd_poly(args, out) -> int:
    p = remainder_polynomial(parse_fraction(args.type))
    if args.json:
        _emit(out, p.to_dict(), True, "")
    elif len(p):
        out.write(p.to_text() + "\n")
    return EXIT_OK


def cmd_hj(args, out) -> int:
    e = hj_expand(args.r, args.d)
    dlr = None if args.dim is None else dlr_criterion(e, args.dim)
    if args.json:
        _emit(out, {"r": args.r, "d": args.d, "entries": list(e.entries), "dlr": dlr}, True, "")
        return EXIT_OK
    text = str(list(e.entries))
    if dlr is not None:
        m = args.dim - 2
        if dlr:
            text += f" : all entries ≡ 2 (mod {m}) → crepant side"
        else:
            text += f" : not all entries ≡ 2 (mod {m}) → non-crepant side"
    if gcd(args.r, args.d) != 1:
        text += f"  (GCD({args.r}, {args.d}) > 1: criterion does not apply)"
    out.write(text + "\n")
    return EXIT_OK


def cmd_scan(args, out) -> int:
    if args.dim < 3:
        raise UsageError("--dim must be at least 3")
    records = run_scan(args.dim, args.rmax, args.jobs)
    for rec in records:
        _emit(out, rec.to_dict(), args.json, rec.to_text())
    summary = summarize(records)
    if args.json:
        _emit(out, {"summary": summary}, True, "")
    else:
        out.write("summary: " + ", ".join(f"{k}={v}" for k, v in summary.items()) + "\n")
    return EXIT_DISAGREE if summary["disagreements"] else EXIT_OK


def cmd_oracle(args, out) -> int:
    f = parse_fraction(args.type)
    limits = SearchLimits(max_r=args.max_r)
    res = search_triangulation(f.r, f.a, limits)
    if args.json:
        _emit(out, res.to_dict(), True, "")
    elif isinstance(res, Triangulation):
        lines = [f"witness triangulation: {len(res)} basic simplices, volume {res.volume}"]
        for s in res.simplices:
            lines.append("  " + " ".join(str(list(v.scaled)) for v in s.vertices))
        out.write("\n".join(lines) + "\n")
    else:
        out.write(f"NoWitnessFound (exhaustive: {str(res.exhaustive).lower()})\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit JSON instead of text")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS,
                        help="worker processes for scan (default 1)")

    ap = argparse.ArgumentParser(
        prog="crepant", parents=[common],
        description="Crepant resolutions of Gorenstein cyclic quotient singularities.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="decide crepancy for one type")
    p.add_argument("type", help="type string r:a1,...,an")
    p.add_argument("--poly", action="store_true", help="also print the remainder polynomial")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("poly", parents=[common], help="print the remainder polynomial")
    p.add_argument("type")
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("hj", parents=[common], help="Hirzebruch-Jung expansion of r/d")
    p.add_argument("r", type=int)
    p.add_argument("d", type=int)
    p.add_argument("--dim", type=int, default=None, help="dimension n for the congruence test")
    p.set_defaults(func=cmd_hj)

    p = sub.add_parser("scan", parents=[common], help="sweep all 1/r(1,d,c,...,c)")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--rmax", type=int, required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("oracle", parents=[common], help="search for a crepant triangulation")
    p.add_argument("type")
    p.add_argument("--max-r", type=int, default=12)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    args.json = getattr(args, "json", False)
    args.jobs = getattr(args, "jobs", 1)
    try:
        return args.func(args, out)
    except (ValueError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
