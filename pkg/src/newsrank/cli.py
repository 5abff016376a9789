"""Command line entry point: ``newsrank <stage> --config cfg.json``."""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .config import PipelineConfig
from .errors import NewsRankError
from .pipeline import Context, run_pipeline, run_stage
from .report import render_search_tables, render_tables

COMMANDS = ("classify-publishers", "detect-events", "rank", "serank", "report", "run")


def _setup_logging() -> None:
    level = os.environ.get("NEWSRANK_LOG", "info").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="newsrank", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="pipeline config JSON")
        p.add_argument("--seed", type=int, default=None, help="override gsdmm.seed")
        p.add_argument("--out", default=None, help="override the output directory")
        p.add_argument("--backend", choices=("cython", "python"), default=None,
                       help="GSDMM sweep kernel (default: compiled when available)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging()
    try:
        cfg = PipelineConfig.from_file(args.config).with_overrides(seed=args.seed, out=args.out)
        if args.command == "run":
            report = run_pipeline(cfg, backend=args.backend)
        else:
            cfg.check_inputs(args.command)
            report = run_stage(Context(cfg, args.backend), args.command)
    except NewsRankError as exc:
        print(f"newsrank: error: {exc}", file=sys.stderr)
        return 1
    if args.command in ("run", "report"):
        sys.stdout.write(render_tables(report))
    elif args.command == "serank":
        sys.stdout.write(render_search_tables(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
