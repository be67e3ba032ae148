import argparse
import sys
from typing import List, Optional

from cli.commands import COMMANDS
from cli.config import COEFFICIENT_KINDS, FORMATS, SUITES, CommandConfig
from cli.formatting import emit
from utilities.exceptions import MagnusForestError, ResourceCapError
from utilities.utils import Utils

logger = Utils.custom_logger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE_CAP = 3


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree", type=int, required=True,
                        help="Degree (trees) or maximum degree N (other commands)")
    common.add_argument("--format", default="text", choices=FORMATS,
                        help="Output format; xlsx needs --output")
    common.add_argument("--output", default=None,
                        help="Write to this file instead of stdout")
    common.add_argument("--path", default="default",
                        help='MatPolyPath JSON file, or "default" for [[0,1],[-1-t,0]]')
    common.add_argument("--s", default="1/4",
                        help="Evaluation point as a rational string p/q")
    common.add_argument("--parallel", action="store_true",
                        help="Use a process pool for the permutation route (capped by MAGNUS_FOREST_THREADS)")
    common.add_argument("--unsafe-degree", action="store_true",
                        help="Lift the safety caps on --degree")

    ap = argparse.ArgumentParser(
        prog="python -m cli",
        description="Magnus expansion in planar trees, permutations and polynomial matrix paths.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    trees = sub.add_parser("trees", parents=[common], help="List all trees of one kind and degree")
    trees.add_argument("--kind", default=None, choices=["rooted", "binary"])

    coefficients = sub.add_parser("coefficients", parents=[common],
                                  help="Exact Magnus coefficient tables up to degree N")
    coefficients.add_argument("--kind", default=None, choices=COEFFICIENT_KINDS)

    verify = sub.add_parser("verify", parents=[common], help="Run a verification suite to degree N")
    verify.add_argument("suite_name", nargs="?", default=None, choices=SUITES)
    verify.add_argument("--suite", default=None, choices=SUITES)
    verify.add_argument("--kind", default=None, help=argparse.SUPPRESS)

    magnus = sub.add_parser("magnus", parents=[common],
                            help="Omega_N(s) by the permutation route with its exponential and residual")
    magnus.add_argument("--kind", default=None, help=argparse.SUPPRESS)
    return ap


def main(argv: Optional[List[str]] = None, stdout=None) -> int:
    """
    Runs one command and returns its exit code.

    Exit codes: 0 success, 1 verification failure, 2 usage or input error, 3 safety cap.
    """
    stdout = stdout if stdout is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        config = CommandConfig.from_args(args)
        logger.debug(f"Running {config}")
        output = COMMANDS[config.command](config)
        emit(output, config.output_format, config.output, stdout)
        return output.exit_code
    except ResourceCapError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_RESOURCE_CAP
    except (MagnusForestError, ValueError, OSError) as e:
        logger.error(f"Command '{args.command}' failed: {e}", exc_info=True)
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
