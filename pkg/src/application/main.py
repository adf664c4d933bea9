import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from src import __version__
from src.application.commands import (
    EXIT_INVALID,
    EXIT_TOO_LARGE,
    cmd_check,
    cmd_enumerate,
    cmd_run,
)
from src.config.settings import Settings, apply_settings, settings
from src.core.errors import InstanceError, TooLargeError
from src.core.vcg.tiebreak import TIE_BREAKERS
from src.core.wdp import SOLVERS
from src.i18n.strings import Strings
from src.utils.logger import logger, setup_logger


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vcgkit", description="Combinatorial Vickrey auctions with exact arithmetic.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    parser.add_argument("--config", type=Path, help="JSON settings file")
    parser.add_argument("--log-file", type=Path, help="also write logs to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the auction on a bid file")
    run.add_argument("bids", type=Path, help="bid file (JSON)")
    run.add_argument("--seed", type=int, default=None, help="tie-breaking seed, an unsigned 64-bit integer")
    run.add_argument("--solver", choices=sorted(SOLVERS), default=None)
    run.add_argument("--tie-break", choices=sorted(TIE_BREAKERS), default=None)
    run.add_argument("--output", default="-", help="output path, '-' for stdout")
    run.set_defaults(handler=cmd_run)

    check = sub.add_parser("check", help="run the soundness suite")
    check.add_argument("--max-goods", type=int, default=None)
    check.add_argument("--max-bidders", type=int, default=None)
    check.add_argument("--instances", type=int, default=None)
    check.add_argument("--seed", type=int, default=None)
    check.add_argument("--exhaustive-goods", type=int, default=None)
    check.add_argument("--exhaustive-bidders", type=int, default=None)
    check.add_argument("--json", type=Path, default=None, help="write the reports as JSON")
    check.add_argument("--inject-mutant", action="store_true", help=argparse.SUPPRESS)
    check.set_defaults(handler=cmd_check)

    enum = sub.add_parser("enumerate", help="list partitions or allocations")
    enum.add_argument("--goods", required=True, help="comma-separated goods, e.g. A,B,C")
    enum.add_argument("--bidders", default=None, help="comma-separated bidders, e.g. 1,2")
    enum.add_argument("--what", choices=["partitions", "allocations"], required=True)
    enum.set_defaults(handler=cmd_enumerate)
    return parser


def _configure(args) -> None:
    if args.config:
        apply_settings(Settings.load_from_json(args.config))
        logger.debug(Strings.CONFIG_LOADED.value.format(args.config))
    level = logging.DEBUG if args.verbose or settings.DEBUG else logging.WARNING
    setup_logger(log_file=args.log_file or settings.LOG_FILE, level=level)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        _configure(args)
    except (OSError, ValueError, ValidationError) as e:
        logger.error(Strings.FATAL_ERROR.value.format(e))
        return EXIT_INVALID

    logger.debug(Strings.STARTING_COMMAND.value.format(settings.APP_NAME, __version__, args.command))
    try:
        return args.handler(args)
    except TooLargeError as e:
        logger.error(Strings.SIZE_GUARD_ERROR.value.format(e))
        return EXIT_TOO_LARGE
    except (InstanceError, ValueError) as e:
        logger.error(Strings.VALIDATION_ERROR.value.format(e))
        return EXIT_INVALID
    except Exception as e:
        logger.critical(Strings.FATAL_ERROR.value.format(e), exc_info=True)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
