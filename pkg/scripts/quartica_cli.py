"""
quartica command line.

    quartica incidence --builtin klein-bitangents --filter 4 --csv
    quartica verify --builtin dyck
    quartica milnor --builtin kl-octic --json
    quartica hirzebruch --builtin klein
    quartica find-bitangents --ciani 3 --match kk-table

Exit status: 0 when every check passes, 1 when a mathematical check fails,
2 for unusable input.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from config import get_config
from quartica.combinatorics import WeakCombinatorics
from quartica.config import print_color, print_logfile_name
from quartica.errors import CheckFailure, InputError
from quartica.llogger import setup_logger
from quartica.serialization import RunReport, load_json
from services import commands

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2

# bulky result keys left out of the text rendering
_TEXT_SKIP = {"table", "points", "per_line", "lines", "pairs", "dims", "runs", "solutions"}


def _add_curve_source(parser: argparse.ArgumentParser, lines: bool = False):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--builtin", help="registry name (see `quartica list`)")
    group.add_argument("--input", help="curve JSON file")
    if lines:
        group.add_argument("--lines", help="JSON list of coordinate triples")


def _add_output(parser: argparse.ArgumentParser, csv: bool = False):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--json", action="store_true", help="print the RunReport as JSON")
    if csv:
        group.add_argument("--csv", action="store_true", help="print the incidence table as CSV")
    parser.add_argument("--timing", action="store_true", help="add wall-clock timings")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quartica",
        description="Exact checks on smooth plane quartics, their bitangents and line arrangements.",
    )
    parser.add_argument("--threads", type=int, help="cap on worker threads (QUARTICA_THREADS)")
    parser.add_argument("--rank-method", choices=["auto", "exact", "modular"],
                        help="linear algebra backend (QUARTICA_RANK_METHOD)")
    parser.add_argument("--seed", type=int, help="seed for randomized steps (QUARTICA_SEED)")
    parser.add_argument("--tol", type=float, help="numeric tolerance (QUARTICA_TOL)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("incidence", help="intersection points and incidence table of the lines")
    _add_curve_source(p, lines=True)
    p.add_argument("--filter", type=int, dest="multiplicity",
                   help="only points of this multiplicity in the table (default: >= 3)")
    _add_output(p, csv=True)

    p = sub.add_parser("verify", help="check that 28 lines are bitangent to the quartic")
    _add_curve_source(p)
    _add_output(p)

    p = sub.add_parser("milnor", help="tau, mdr, minimal resolution and freeness class")
    _add_curve_source(p)
    _add_output(p)

    p = sub.add_parser("hirzebruch", help="Hirzebruch-type inequality for quartics and lines")
    _add_curve_source(p)
    p.add_argument("--wc", help="weak combinatorics as JSON (instead of a curve)")
    _add_output(p)

    p = sub.add_parser("find-bitangents", help="numeric bitangents of a quartic")
    _add_curve_source(p)
    p.add_argument("--ciani", help="member of the Ciani pencil with this rational parameter")
    p.add_argument("--random", type=int, dest="random_count",
                   help="run on this many seeded random quartics")
    p.add_argument("--match", help="exact table to match against (klein-table, dyck-table, kk-table)")
    _add_output(p)

    p = sub.add_parser("list", help="registry names")
    _add_output(p)

    p = sub.add_parser("diophantine", help="non-negative solutions of a linear system")
    p.add_argument("--system", help="system JSON (default: quartic plus two lines)")
    _add_output(p)

    p = sub.add_parser("quadruple-bound", help="upper bound on quadruple points of 28 bitangents")
    p.add_argument("--h", type=int, required=True, help="number of hyperflexes")
    _add_output(p)
    return parser


def run(args: argparse.Namespace) -> RunReport:
    cfg = get_config().engine_config(
        threads=args.threads, rank_method=args.rank_method, seed=args.seed, tol=args.tol
    )
    timing = getattr(args, "timing", False)
    source = dict(builtin=getattr(args, "builtin", None), input_path=getattr(args, "input", None))

    if args.command == "incidence":
        spec = commands.load_curve(lines=args.lines, **source)
        return commands.cmd_incidence(spec, args.multiplicity, cfg, timing)
    if args.command == "verify":
        return commands.cmd_verify_bitangents(commands.load_curve(**source), cfg, timing)
    if args.command == "milnor":
        return commands.cmd_milnor(commands.load_curve(**source), cfg, timing)
    if args.command == "hirzebruch":
        if args.wc is not None:
            if any(source.values()):
                raise InputError("give either --wc or a curve, not both")
            wc = WeakCombinatorics.model_validate(load_json(args.wc, "--wc"))
            return commands.cmd_hirzebruch(wc=wc, config=cfg, timing=timing)
        return commands.cmd_hirzebruch(spec=commands.load_curve(**source), config=cfg,
                                       timing=timing)
    if args.command == "find-bitangents":
        spec = commands.load_curve(**source) if any(source.values()) else None
        return commands.cmd_find_bitangents(
            spec=spec, ciani=args.ciani, random_count=args.random_count, match=args.match,
            config=cfg, timing=timing,
        )
    if args.command == "list":
        return commands.cmd_list()
    if args.command == "diophantine":
        return commands.cmd_diophantine(args.system, timing)
    if args.command == "quadruple-bound":
        return commands.cmd_quadruple_bound(args.h)
    raise InputError(f"unknown command {args.command}")


def render_text(report: RunReport) -> str:
    out = [f"{report.command}: {'PASS' if report.passed else 'FAIL'}"]
    if report.command == "list":
        out.extend(report.results.get("builtins", []))
        return "\n".join(out)
    for key in sorted(report.results):
        if key in _TEXT_SKIP:
            continue
        out.append(f"  {key}: {json.dumps(report.results[key], sort_keys=True)}")
    if report.command == "incidence" and report.results.get("table"):
        out.append(report.results["table"].rstrip("\n"))
    for message in report.messages:
        out.append(f"  ! {message}")
    if report.timing:
        out.append(f"  timing: {json.dumps(report.timing, sort_keys=True)}")
    return "\n".join(out)


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for the quartica command line"""
    parser = build_parser()
    args = parser.parse_args(argv)
    logger = setup_logger("quartica.cli", get_config().LOG_LEVEL)
    if get_config().LOG_DIR:
        print_logfile_name(logger, stream=sys.stderr)

    try:
        report = run(args)
    except (InputError, ValidationError) as exc:
        logger.error(f"{args.command}: input error: {exc}")
        print_color(f"input error: {exc}", "red", stream=sys.stderr)
        return EXIT_INPUT_ERROR
    except CheckFailure as exc:
        logger.error(f"{args.command}: check failed: {exc}")
        print_color(f"check failed: {exc}", "red", stream=sys.stderr)
        return EXIT_CHECK_FAILED

    if getattr(args, "json", False):
        print(report.to_json())
    elif getattr(args, "csv", False):
        sys.stdout.write(report.results.get("table", ""))
    else:
        print(render_text(report))
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
