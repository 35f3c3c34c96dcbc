"""Command-line entry point: run scenario configs, verify, list kinds."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .acceptance import format_results, run_suite
from .errors import ParseError, SchemaError
from .scenarios import list_kinds, parse_config, run_scenarios, write_reports

log = logging.getLogger("ergolab")


def _worker_count() -> int:
    raw = os.environ.get("ERGOLAB_THREADS", "")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        log.warning("ignoring non-integer ERGOLAB_THREADS=%r", raw)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ergolab",
        description="invariant measures, convolution, and entropy on group carriers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario config and write reports")
    run_p.add_argument("config", help="path to the JSON scenario config")
    run_p.add_argument("--out", required=True, help="report CSV path (JSON sibling is derived)")
    run_p.add_argument("--seed", type=int, default=None, help="override every scenario seed")
    run_p.add_argument(
        "--log-level", choices=["error", "info", "debug"], default="info"
    )

    verify_p = sub.add_parser("verify", help="run the built-in acceptance suite")
    verify_p.add_argument(
        "--suite", choices=["all", "exact", "statistical"], default="all"
    )

    sub.add_parser("list", help="print scenario kinds and parameter schemas")
    return parser


def cmd_run(args) -> int:
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(message)s")
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        scenarios = parse_config(text)
    except (ParseError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        from dataclasses import replace

        scenarios = [replace(sc, seed=args.seed) for sc in scenarios]
    log.info("running %d scenarios", len(scenarios))
    results = run_scenarios(scenarios, max_workers=_worker_count())
    write_reports(results, args.out)
    for res in results:
        status = "pass" if res.passed else "FAIL"
        log.info("%s %s (%s) %.2fs", status, res.scenario.id, res.scenario.kind, res.runtime_seconds)
    all_pass = all(r.passed for r in results)
    log.info("suite verdict: %s", "pass" if all_pass else "fail")
    return 0 if all_pass else 1


def cmd_verify(args) -> int:
    results = run_suite(args.suite)
    print(format_results(results))
    return 0 if all(r.passed for r in results) else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "list":
        print(list_kinds())
        return 0
    parser.error(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
