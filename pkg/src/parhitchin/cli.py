"""Command line entry point: ``parhitchin --config campaign.json``."""
from __future__ import annotations

import argparse
import logging
import sys

from .campaign import load_config, report_human, run
from .errors import ConfigError

log = logging.getLogger("parhitchin")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="parhitchin",
                                 description="Run seeded verification campaigns and census reports.")
    ap.add_argument("--config", required=True, help="campaign config (JSON)")
    ap.add_argument("--out", help="write the report here (defaults to the config's output, else stdout)")
    ap.add_argument("--format", choices=("json", "table"), default="json")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes")
    ap.add_argument("--seed", type=int, help="override every experiment's base seed")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        if args.seed < 0:
            print("error: --seed must be non-negative", file=sys.stderr)
            return EXIT_CONFIG
        cfg = cfg.with_seed(args.seed)
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    log.info("running %d experiments", len(cfg.experiments))
    report = run(cfg, jobs=args.jobs)
    text = report.to_json() if args.format == "json" else report_human(report)
    out = args.out or cfg.output
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.all_passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
