#!/usr/bin/env python3
"""
sqzkey command line: key rates, sweeps, Monte Carlo simulation and B2B calibration
"""

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Sequence

from pydantic import ValidationError

from sqzkey.cli.commands import cmd_calibrate, cmd_keyrate, cmd_simulate, cmd_sweep
from sqzkey.cli.config import RunConfig, RunMode, load_config, to_ini
from sqzkey.errors import ConfigError, SqzKeyError
from sqzkey.settings import settings

logger = logging.getLogger("sqzkey")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_FAILURE = 2

EXIT_CODES = """exit codes:
  0  success
  1  configuration error: unreadable or invalid run file, bad parameter values
  2  runtime failure: any other sqzkey error, or --strict with a report that has no key
"""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqzkey",
        description=__doc__.strip(),
        epilog=EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("mode", choices=[m.value for m in RunMode], help="what to run")
    parser.add_argument("--config", required=True, help="INI run configuration")
    parser.add_argument("--out", default=None, help="output CSV path ('-' for stdout)")
    parser.add_argument("--seed", type=int, default=None, help="override [run] seed")
    parser.add_argument("--workers", type=int, default=None, help="override [run] workers")
    parser.add_argument("--b2b", default=None, help="B2B measurement CSV for calibrate")
    parser.add_argument(
        "--frames-dir", default=None, help="replay stored SQZF frames (simulate) or B2B frames (calibrate)"
    )
    parser.add_argument("--strict", action="store_true", help="exit 2 when a report has no positive key")
    parser.add_argument("--dump-config", action="store_true", help="print the resolved config and exit")
    return parser


def _run(cfg: RunConfig, b2b: Optional[str], frames_dir: Optional[str]) -> List:
    commands: Dict[RunMode, Callable[[], List]] = {
        RunMode.KEYRATE: lambda: cmd_keyrate(cfg),
        RunMode.SWEEP: lambda: cmd_sweep(cfg),
        RunMode.SIMULATE: lambda: cmd_simulate(cfg, frames_dir),
        RunMode.CALIBRATE: lambda: cmd_calibrate(cfg, b2b, frames_dir),
    }
    return commands[cfg.mode]()


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, settings.log_level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = load_config(args.config, mode=args.mode, seed=args.seed, output=args.out, workers=args.workers)
        if args.dump_config:
            sys.stdout.write(to_ini(cfg))
            return EXIT_OK
        results = _run(cfg, args.b2b, args.frames_dir)
    except ConfigError as e:
        print(f"❌ Config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationError as e:
        print(f"❌ Invalid parameters: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except SqzKeyError as e:
        logger.error("%s failed: %s", args.mode, e)
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILURE

    if args.strict and any(getattr(r, "no_key", False) for r in results):
        print("⚠️ No positive finite-size key", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
