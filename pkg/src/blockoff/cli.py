"""Command-line interface.

Exit codes are a fixed contract:
  0  success (candidates found; for `search`, a selection was made)
  1  parse, database, or profile errors
  2  the baseline itself failed to compile/run/validate (`search` only)
  3  no candidates detected
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .detect import DEFAULT_SIGMA, OffloadCandidate
from .frontend import SourceError
from .harness import DEFAULT_REPETITIONS, ProfileError
from .patterns import PatternDbError
from .pipeline import (
    ConfirmMode,
    RunConfig,
    candidate_rows,
    run_detect,
    run_search,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BASELINE_FAILED = 2
EXIT_NO_CANDIDATES = 3


def confirm_interface_change(notes, mode: ConfirmMode) -> bool:
    """Ask the user to approve an interface change; notes state the change."""
    if mode is ConfirmMode.ASSUME_YES:
        return True
    if mode is ConfirmMode.ASSUME_NO:
        return False
    if not sys.stdin.isatty():
        print(
            "warning: stdin is not a terminal; treating confirmation as 'no'",
            file=sys.stderr)
        return False
    for note in notes:
        print(f"  - {note}")
    while True:
        answer = input("apply this interface change? [y/n] ").strip().lower()
        if answer in ("y", "yes"):
            return True
        if answer in ("n", "no"):
            return False


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockoff",
        description=(
            "Find replaceable function blocks in C-like sources and pick the "
            "fastest replacement pattern by measuring."),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("sources", nargs="+", type=Path, help="C source files")
    common.add_argument("--db", required=True, type=Path,
                        help="pattern database root directory")
    common.add_argument("--sigma", type=float, default=DEFAULT_SIGMA,
                        help="similarity threshold in [0,1] (default 0.9)")

    p_detect = sub.add_parser(
        "detect", parents=[common], help="list offload candidates")
    p_detect.set_defaults(func=cmd_detect)

    p_search = sub.add_parser(
        "search", parents=[common],
        help="measure patterns and select the fastest")
    p_search.add_argument("--profiles", required=True, type=Path,
                          help="backend profiles JSON file")
    p_search.add_argument("--reps", type=int, default=DEFAULT_REPETITIONS,
                          help="timed runs per pattern (default 3)")
    p_search.add_argument("--out", type=Path, default=Path("out"),
                          help="output directory (default ./out)")
    mode = p_search.add_mutually_exclusive_group()
    mode.add_argument("--assume-yes", action="store_true",
                      help="approve every interface-change confirmation")
    mode.add_argument("--assume-no", action="store_true",
                      help="decline every interface-change confirmation")
    p_search.set_defaults(func=cmd_search)
    return parser


def _config_from_args(args) -> RunConfig:
    mode = ConfirmMode.INTERACTIVE
    if getattr(args, "assume_yes", False):
        mode = ConfirmMode.ASSUME_YES
    elif getattr(args, "assume_no", False):
        mode = ConfirmMode.ASSUME_NO
    return RunConfig(
        sources=list(args.sources),
        db_root=args.db,
        profiles_path=getattr(args, "profiles", None),
        sigma=args.sigma,
        repetitions=getattr(args, "reps", DEFAULT_REPETITIONS),
        confirm_mode=mode,
        out_dir=getattr(args, "out", Path("out")),
    )


def _print_candidates(detection) -> None:
    print("index\tsite\trecord\torigin\tscore\tbinding")
    for row in candidate_rows(detection):
        score = "-" if row["score"] is None else f"{row['score']:.3f}"
        print(
            f"{row['index']}\t{row['file']}:{row['line']}\t{row['record']}"
            f"\t{row['origin']}\t{score}\t{row['binding_status']}")


def cmd_detect(args) -> int:
    config = _config_from_args(args)
    detection = run_detect(config)
    for warning in detection.warnings:
        print(f"warning: record {warning.record_id}: {warning.message}",
              file=sys.stderr)
    if not detection.candidates:
        print("no candidates")
        return EXIT_NO_CANDIDATES
    _print_candidates(detection)
    return EXIT_OK


def cmd_search(args) -> int:
    config = _config_from_args(args)

    def confirm(cand: OffloadCandidate) -> bool:
        print(f"candidate {cand.index} ({cand.record_id}) needs an "
              f"interface change:")
        return confirm_interface_change(cand.binding.notes, config.confirm_mode)

    outcome = run_search(config, confirm)
    for warning in outcome.detection.warnings:
        print(f"warning: record {warning.record_id}: {warning.message}",
              file=sys.stderr)
    if outcome.report is None:
        print(
            f"baseline failed ({outcome.baseline.status.value}):\n"
            f"{outcome.baseline.log}", file=sys.stderr)
        return EXIT_BASELINE_FAILED
    _print_candidates(outcome.detection)
    report = outcome.report
    print(f"selected pattern: {report.selected.bits or '(baseline)'}")
    print(f"speedup vs. all-CPU: {report.speedup:.2f}x")
    print(f"report: {outcome.report_path}")
    if not outcome.detection.candidates:
        return EXIT_NO_CANDIDATES
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SourceError, PatternDbError, ProfileError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
