"""Command-line front end: strip / bound / table / verify.

Exit codes: 0 ok, 2 bad arguments, 3 partial certification, 4 missing
tables, 5 verification failure, 1 other errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds, verify
from .engine import (DEFAULT_N_MAX, DEFAULT_P_MAX, DEFAULT_WINDOW, WasteTable,
                     cache_filename, compute_waste_table, find_cached,
                     load_or_compute_table, resolve_threads)
from .errors import CyldomError
from .transitions import Variant

EXIT_OK = 0
EXIT_BADARGS = 2
EXIT_PARTIAL = 3
EXIT_MISSING = 4
EXIT_VERIFY = 5

DEFAULT_CACHE_DIR = "cyldom_cache"


def _parse_range(text: str) -> list[int]:
    """'65' or '65:75' (inclusive) or '65:75:2'."""
    parts = text.split(":")
    if len(parts) == 1:
        return [int(parts[0])]
    start, stop = int(parts[0]), int(parts[1])
    step = int(parts[2]) if len(parts) > 2 else 1
    if step < 1:
        raise ValueError("range step must be >= 1")
    return list(range(start, stop + 1, step))


def _parse_heights(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_strip(args) -> int:
    variant = Variant(args.variant)
    threads = resolve_threads(args.threads)
    table = compute_waste_table(
        args.height, variant,
        n_max=args.n_max, p_max=args.p_max, window=args.window,
        threads=threads, early_stop=not args.no_early_stop)
    if args.out:
        path = Path(args.out)
    else:
        cache = Path(args.cache_dir)
        cache.mkdir(parents=True, exist_ok=True)
        path = cache / cache_filename(variant, args.height, table.n_max)
    table.save(path)
    cert = "none" if table.global_cert is None else \
        "(N=%d, p=%d, q=%d)" % table.global_cert
    residues = "" if table.residue_constants is None else \
        f" residues={table.residue_constants}"
    print(f"strip {variant.value} h={args.height}: "
          f"seeds_certified={table.seeds_certified}/{table.seeds_total} "
          f"global={cert}{residues} n_max={table.n_max} -> {path}")
    return EXIT_OK if table.fully_certified else EXIT_PARTIAL


def _gather_tables(args, heights):
    """Load (or with --compute build) both variants for each height."""
    tables: dict[tuple[Variant, int], WasteTable] = {}
    missing = []
    for height in heights:
        for variant in Variant:
            table, _ = load_or_compute_table(
                args.cache_dir, variant, height, threads=args.threads,
                compute=args.compute)
            if table is None:
                missing.append(f"{variant.value} h={height}")
            else:
                tables[(variant, height)] = table
    return tables, missing


def _render_reports(reports, fmt: str) -> str:
    if fmt == "json":
        payload = [bounds.report_json_dict(r) for r in reports]
        return json.dumps(payload[0] if len(payload) == 1 else payload, indent=2) + "\n"
    if fmt == "csv":
        lines = [bounds.CSV_HEADER]
        lines += [bounds.report_csv_row(r) for r in reports]
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        lines = ["| n | m | lower | paper_lower | upper_ref | gap | exact | partition |",
                 "| - | - | - | - | - | - | - | - |"]
        for r in reports:
            paper = bounds.fraction_str(r.paper_lower) if r.paper_lower is not None \
                else "out of range"
            gap = bounds.fraction_str(r.upper_ref - r.paper_lower) \
                if r.paper_lower is not None else ""
            exact = "" if r.exact is None else str(r.exact)
            lines.append(f"| {r.n} | {r.m} | {r.lower} | {paper} | "
                         f"{bounds.fraction_str(r.upper_ref)} | {gap} | {exact} | "
                         f"{bounds.partition_str(r.partition)} |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def cmd_bound(args) -> int:
    tables, missing = _gather_tables(args, _parse_heights(args.heights))
    if missing:
        print("missing tables (rerun with --compute or run `cyldom strip`): "
              + ", ".join(missing), file=sys.stderr)
        return EXIT_MISSING
    report = bounds.make_report(args.n, args.m, tables, want_exact=args.exact)
    if args.exact and report.exact is None:
        print(f"note: ({args.n}, {args.m}) is beyond the exact-oracle caps; "
              "no exact value included", file=sys.stderr)
    _emit(_render_reports([report], args.format), args.out)
    return EXIT_OK


def cmd_table(args) -> int:
    tables, missing = _gather_tables(args, _parse_heights(args.heights))
    if missing:
        print("missing tables (rerun with --compute or run `cyldom strip`): "
              + ", ".join(missing), file=sys.stderr)
        return EXIT_MISSING
    reports = [bounds.make_report(n, m, tables, want_exact=args.exact)
               for n in _parse_range(args.n_range)
               for m in _parse_range(args.m_range)]
    if not reports and args.format == "json":
        _emit("[]\n", args.out)
    else:
        _emit(_render_reports(reports, args.format), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify.run_suite(args.suite, cache_dir=args.cache_dir,
                               threads=args.threads)
    failures = []
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'} {r.name}")
        if not r.ok:
            failures.append({"check": r.name, "expected": r.expected, "got": r.got})
    print(f"{len(results) - len(failures)}/{len(results)} checks passed")
    if failures:
        print(json.dumps(failures, indent=2))
        return EXIT_VERIFY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyldom",
        description="Certified lower bounds for domination numbers of "
                    "cylindrical grids via a min-plus transfer DP.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--cache-dir", default=DEFAULT_CACHE_DIR,
                        help="directory for cached waste tables")
        sp.add_argument("--threads", type=int, default=None,
                        help="worker count (default: CYLDOM_THREADS or all cores)")

    sp = sub.add_parser("strip", help="compute a waste table for one strip")
    common(sp)
    sp.add_argument("--height", type=int, required=True)
    sp.add_argument("--variant", choices=[v.value for v in Variant], required=True)
    sp.add_argument("--n-max", type=int, default=None,
                    help=f"columns to compute (default {DEFAULT_N_MAX[Variant.BOUNDARY]} "
                         f"boundary / {DEFAULT_N_MAX[Variant.INTERIOR]} interior)")
    sp.add_argument("--p-max", type=int, default=DEFAULT_P_MAX)
    sp.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    sp.add_argument("--no-early-stop", action="store_true",
                    help="keep iterating after certification")
    sp.add_argument("--out", default=None, help="explicit output path")
    sp.set_defaults(func=cmd_strip)

    sp = sub.add_parser("bound", help="bound report for one cylinder")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--heights", default="10", help="strip heights to use, e.g. 10,8")
    sp.add_argument("--compute", action="store_true",
                    help="compute missing tables instead of failing")
    sp.add_argument("--exact", action="store_true",
                    help="include the exact oracle value when within caps")
    sp.add_argument("--format", choices=("json", "csv", "markdown"), default="json")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("table", help="bound table over (n, m) ranges")
    common(sp)
    sp.add_argument("--n-range", required=True, help="A, A:B or A:B:STEP (inclusive)")
    sp.add_argument("--m-range", required=True)
    sp.add_argument("--heights", default="10")
    sp.add_argument("--compute", action="store_true")
    sp.add_argument("--exact", action="store_true")
    sp.add_argument("--format", choices=("json", "csv", "markdown"), default="csv")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("verify", help="run a verification suite")
    common(sp)
    sp.add_argument("--suite", choices=verify.SUITES, default="all")
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CyldomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BADARGS


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
