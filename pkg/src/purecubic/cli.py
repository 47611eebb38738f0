"""Command line: ``purecubic scan``, ``purecubic report`` and ``purecubic cache``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .pipelines import CaseLabel
from .plotting import render_figures
from .scanner import (
    ClassGroupCache,
    ScanConfig,
    overall_status,
    read_json,
    recheck_row,
    scan,
    verify_cache,
    write_report,
)

DEFAULT_CACHE = os.path.join(os.path.expanduser("~"), ".cache", "purecubic")


def _precision(text: str) -> int:
    """Accept '6' or '3^6'."""
    text = text.strip()
    if text.startswith("3^"):
        text = text[2:]
    n = int(text)
    if n < 3:
        raise argparse.ArgumentTypeError("precision must be at least 3^3")
    return n


def _figure_stem(out: str | None, fmt: str) -> tuple[Path, str]:
    if out:
        path = Path(out)
        return path.parent, path.stem
    return Path("."), f"report_{fmt}"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="purecubic", description="Verify 3-class group statements for Q(cbrt p).")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sc = sub.add_parser("scan", help="run the pipelines over a range of primes")
    sc.add_argument("--min", dest="min_p", type=int, default=5)
    sc.add_argument("--max", dest="max_p", type=int, default=200)
    sc.add_argument("--case", action="append", choices=[c.value for c in CaseLabel], default=[])
    sc.add_argument("--with-class-groups", action="store_true")
    sc.add_argument("--with-AK", dest="with_AK", action="store_true", help="class group of the sextic closure (slow)")
    sc.add_argument("--precision", type=_precision, default=6, help="3-adic precision exponent (default 3^6)")
    sc.add_argument("--effort", choices=["quick", "desk", "thorough"], default="desk")
    sc.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    sc.add_argument("--seed", type=int, default=0)
    sc.add_argument("--cache-dir", default=DEFAULT_CACHE)
    sc.add_argument("--format", choices=["csv", "json"], default="csv")
    sc.add_argument("--out", default=None, help="report path (stdout when omitted)")
    sc.add_argument("--no-figures", action="store_true")

    rp = sub.add_parser("report", help="re-render (and optionally re-check) a saved JSON report")
    rp.add_argument("input", help="JSON report written by scan")
    rp.add_argument("--format", choices=["csv", "json"], default="csv")
    rp.add_argument("--out", default=None)
    rp.add_argument("--recheck", action="store_true", help="re-derive every pass row from its certificates")
    rp.add_argument("--no-figures", action="store_true")

    ca = sub.add_parser("cache", help="inspect the class-group cache")
    ca.add_argument("action", choices=["show", "clear", "verify"])
    ca.add_argument("--cache-dir", default=DEFAULT_CACHE)
    return ap


def _emit(rows, fmt, out, config, figures: bool) -> None:
    text = write_report(rows, fmt, out, config)
    if not out:
        sys.stdout.write(text)
    if figures and rows:
        directory, stem = _figure_stem(out, fmt)
        for path in render_figures(rows, directory, stem):
            logging.info("wrote %s", path)


def cmd_scan(args) -> int:
    config = ScanConfig(
        min_p=args.min_p,
        max_p=args.max_p,
        cases=tuple(args.case),
        with_class_groups=args.with_class_groups,
        with_AK=args.with_AK,
        precision=args.precision,
        effort=args.effort,
        seed=args.seed,
        jobs=max(1, args.jobs),
        cache_dir=args.cache_dir,
    )
    progress = Path(args.out).with_suffix(".partial.jsonl") if args.out else None
    rows = scan(config, progress)
    _emit(rows, args.format, args.out, config, not args.no_figures)
    if progress is not None:
        progress.unlink(missing_ok=True)
    return overall_status(rows)


def cmd_report(args) -> int:
    path = Path(args.input)
    try:
        doc = read_json(path.read_text())
    except OSError as exc:
        raise OSError(f"cannot read report {path}: {exc}") from exc
    rows = doc["rows"]
    if args.recheck:
        for row in rows:
            if row["verdict"] == "pass" and not recheck_row(row):
                row["verdict"] = "fail"
                row.setdefault("errors", []).append("recheck: certificate did not reproduce")
    config = ScanConfig(**{k: (tuple(v) if k == "cases" else v) for k, v in (doc.get("config") or {}).items()})
    _emit(rows, args.format, args.out, config, not args.no_figures)
    return overall_status(rows)


def cmd_cache(args) -> int:
    cache = ClassGroupCache(args.cache_dir)
    if args.action == "clear":
        print(f"removed {cache.clear()} entries from {cache.dir}")
    elif args.action == "show":
        for path in cache.entries():
            try:
                entry = json.loads(path.read_text())
                print(f"{path.name}  {entry.get('descriptor')}  invariants={entry.get('invariants')}  "
                      f"certified={entry.get('certified')}  seed={entry.get('seed')}  effort={entry.get('effort')}")
            except (OSError, json.JSONDecodeError):
                print(f"{path.name}  <unreadable>")
    else:
        for item in verify_cache(cache):
            print(f"{item['file']}  {item.get('descriptor', '?')}  {item['status']}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "scan":
            return cmd_scan(args)
        if args.command == "report":
            return cmd_report(args)
        return cmd_cache(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
