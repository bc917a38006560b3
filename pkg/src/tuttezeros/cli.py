"""Command-line interface: ``tuttezeros <command> ...``.

Exit codes: 0 success or certified, 1 verification failed, 2 unsupported
point, 3 search exhausted, 4 malformed input.
"""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .algebra import format_rational, parse_rational, to_decimal
from .errors import (
    NotInteriorPoint,
    NotStarredRegion,
    SearchExhausted,
    TutteZerosError,
)
from .forge import SearchBudget, complementary_pair
from .regions import Q_DIAMOND, Region, classify_region, unsupported_reason, v_diamond
from .zeros import ZeroCertificate, certificate_problems, find_zero

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_UNSUPPORTED, EXIT_EXHAUSTED, EXIT_MALFORMED = 0, 1, 2, 3, 4

SWEEP_COLUMNS = ["q0", "v0", "region", "outcome", "achieved_distance", "s", "t",
                 "witness_edge_count", "wall_time_ms"]
REGION_COLUMNS = ["q", "v", "region"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_MALFORMED, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {n}")
    return n


_NEGATIVE = re.compile(r"^-[0-9.]")


def _normalize_argv(argv: list[str]) -> list[str]:
    """Glue negative values such as ``-39/20`` to their option so argparse accepts them."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--") and "=" not in tok and i + 1 < len(argv) and _NEGATIVE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _add_budget(p: argparse.ArgumentParser) -> None:
    d = SearchBudget()
    p.add_argument("--budget-path", type=_positive_int, default=d.max_path_length,
                   help="longest path or chain tried (default %(default)s)")
    p.add_argument("--budget-sp", type=_positive_int, default=d.max_sp_term_size,
                   help="largest composition cost in closure searches (default %(default)s)")
    p.add_argument("--budget-kn", type=_positive_int, default=d.max_kn,
                   help="largest complete graph seed (default %(default)s)")
    p.add_argument("--budget-mult", type=_positive_int, default=d.max_parallel_mult,
                   help="most copies combined in one step (default %(default)s)")


def _budget(args) -> SearchBudget:
    return SearchBudget(max_path_length=args.budget_path, max_sp_term_size=args.budget_sp,
                        max_kn=args.budget_kn, max_parallel_mult=args.budget_mult)


def _grid(lo: Fraction, hi: Fraction, steps: int) -> list[Fraction]:
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def _region_text(q: Fraction, v: Fraction) -> str:
    region = classify_region(q, v)
    if region == Region.UNSUPPORTED:
        return f"Unsupported ({unsupported_reason(q, v)})"
    return str(region)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    print(_region_text(args.q, args.v))
    if 0 < args.q < Q_DIAMOND:
        d = v_diamond(args.q, Fraction(1, 10**12))
        for name, b in (("v_plus", d.v_plus), ("v_minus", d.v_minus)):
            print(f"{name} in [{format_rational(b.lo)}, {format_rational(b.hi)}] ~ {to_decimal(b.midpoint, 10)}")
    return EXIT_OK


def cmd_pair(args) -> int:
    try:
        pair = complementary_pair(args.q, args.v, _budget(args))
    except NotInteriorPoint as exc:
        print(exc, file=sys.stderr)
        return EXIT_UNSUPPORTED
    except SearchExhausted as exc:
        print(f"exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    print(f"A [{pair.a_type}]: {pair.a}")
    print(f"B [{pair.b_type}]: {pair.b}")
    print(f"planar: {str(pair.planar).lower()}")
    return EXIT_OK


def _outcome(exc: BaseException | None) -> str:
    if exc is None:
        return "certified"
    if isinstance(exc, (NotInteriorPoint, NotStarredRegion)):
        return "unsupported"
    return "exhausted"


def cmd_find_zero(args) -> int:
    try:
        cert = find_zero(args.q0, args.v, args.eps, _budget(args), planar_only=args.planar_only)
    except (NotInteriorPoint, NotStarredRegion) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except TutteZerosError as exc:
        print(f"exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(cert.to_json())
    lo, hi = cert.bracket
    kind = "dual " if cert.dual else ""
    print(f"certified {kind}zero in [{format_rational(lo)}, {format_rational(hi)}] "
          f"~ [{to_decimal(lo, 8)}, {to_decimal(hi, 8)}]; region {cert.region}; s={cert.s} t={cert.t}; "
          f"witness edges {cert.witness_edge_count}; distance {to_decimal(cert.achieved_distance, 8)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            cert = ZeroCertificate.from_json(fh.read())
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"malformed certificate: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    problems = certificate_problems(cert, exhaustive=args.exhaustive)
    if problems:
        for p in problems:
            print(f"FAIL: {p}")
        return EXIT_VERIFY_FAILED
    print("certificate verified" + (" (exhaustive)" if args.exhaustive else ""))
    return EXIT_OK


def _sweep_point(job) -> dict:
    q, v, eps, budget = job
    start = time.perf_counter()
    row = {"q0": format_rational(q), "v0": format_rational(v), "region": str(classify_region(q, v)),
           "achieved_distance": "", "s": "", "t": "", "witness_edge_count": ""}
    try:
        cert = find_zero(q, v, eps, budget)
    except TutteZerosError as exc:
        row["outcome"] = _outcome(exc)
    else:
        row.update(outcome="certified", achieved_distance=format_rational(cert.achieved_distance),
                   s=cert.s, t=cert.t, witness_edge_count=cert.witness_edge_count)
    row["wall_time_ms"] = int((time.perf_counter() - start) * 1000)
    return row


def _write_csv(rows, columns, out_path):
    fh = open(out_path, "w", newline="", encoding="utf-8") if out_path else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    finally:
        if out_path:
            fh.close()


def cmd_sweep(args) -> int:
    budget = _budget(args)
    jobs = [(q, v, args.eps, budget) for q in _grid(args.qmin, args.qmax, args.steps)
            for v in _grid(args.vmin, args.vmax, args.steps)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_point, jobs))
    else:
        rows = [_sweep_point(j) for j in jobs]
    _write_csv(rows, SWEEP_COLUMNS, args.out)
    totals, certified = Counter(), Counter()
    for row in rows:
        totals[row["region"]] += 1
        certified[row["region"]] += row["outcome"] == "certified"
    report = sys.stdout if args.out else sys.stderr
    for region in sorted(totals):
        print(f"{region}: {certified[region]}/{totals[region]} certified", file=report)
    return EXIT_OK


def cmd_region_map(args) -> int:
    rows = [{"q": format_rational(q), "v": format_rational(v), "region": str(classify_region(q, v))}
            for q in _grid(args.qmin, args.qmax, args.resolution)
            for v in _grid(args.vmin, args.vmax, args.resolution)]
    _write_csv(rows, REGION_COLUMNS, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tuttezeros",
                     description="Certified real zeros of the random-cluster Tutte polynomial. "
                                 "Rationals may be given as p/q or exact decimals (0.1 means 1/10).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="region of a point (q, v)")
    p.add_argument("--q", type=_rational, required=True)
    p.add_argument("--v", type=_rational, required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("pair", help="complementary gadget pair at an interior point")
    p.add_argument("--q", type=_rational, required=True)
    p.add_argument("--v", type=_rational, required=True)
    _add_budget(p)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("find-zero", help="certify a zero of Z_G(., v) within eps of q0")
    p.add_argument("--q0", type=_rational, required=True)
    p.add_argument("--v", type=_rational, required=True)
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--planar-only", action="store_true", help="refuse non-planar gadget pairs")
    p.add_argument("--out", help="write the JSON certificate here")
    _add_budget(p)
    p.set_defaults(func=cmd_find_zero)

    p = sub.add_parser("verify", help="re-check a JSON certificate")
    p.add_argument("certificate")
    p.add_argument("--exhaustive", action="store_true",
                   help="also expand Z over all edge subsets when the witness has at most 24 edges")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="run find-zero on a grid",
                       description="CSV columns: " + ",".join(SWEEP_COLUMNS) +
                                   ". outcome is certified, unsupported or exhausted.")
    for name in ("qmin", "qmax", "vmin", "vmax"):
        p.add_argument(f"--{name}", type=_rational, required=True)
    p.add_argument("--steps", type=_positive_int, required=True, help="grid points per axis")
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--out", help="CSV path (default stdout)")
    _add_budget(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("region-map", help="classification grid as CSV",
                       description="CSV columns: " + ",".join(REGION_COLUMNS) + ".")
    p.add_argument("--resolution", type=_positive_int, default=50, help="grid points per axis")
    p.add_argument("--qmin", type=_rational, default=Fraction(-2))
    p.add_argument("--qmax", type=_rational, default=Fraction(5))
    p.add_argument("--vmin", type=_rational, default=Fraction(-6))
    p.add_argument("--vmax", type=_rational, default=Fraction(1))
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_region_map)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_normalize_argv(argv))
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
