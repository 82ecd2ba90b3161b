"""Command-line surface: reduced systems, sweeps, graphs, tables, drives.

Exit codes: 0 on success, 1 when a mathematical check is falsified, 2 on
usage errors.  ``--json`` switches every command to machine-readable output.
"""

from __future__ import annotations

import argparse
import json
import sys

from .words import Alphabet, FiniteWord, canonicalize
from .forbidden import reduced_system
from .rauzy import build_graph
from .scheme import SchemeError, to_scheme
from .drive import parallel_drive, sequential_drive
from .bounds import (
    DEVIATION_SECOND,
    deviation_table,
    deviation_table_csv,
    format_deviation_table,
    format_growth_table,
    growth_table,
    growth_table_csv,
)
from .search import SURVEY_CSV_HEADER, TheoremViolation, default_jobs, multi_letter_survey, verify_theorem

USAGE_ERROR = 2
FALSIFIED = 1


def _parse_word(text: str, alphabet_size: int = 0):
    size = alphabet_size or max(2, len(set(text)))
    try:
        return canonicalize(FiniteWord.from_text(text, Alphabet(size)))
    except ValueError as exc:
        raise SystemExit(_usage(str(exc)))


def _usage(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return USAGE_ERROR


def cmd_forbid(args) -> int:
    w = _parse_word(args.word, args.alphabet)
    system = reduced_system(w)
    if args.json:
        print(system.to_json())
    else:
        print(system.to_text())
    return 0


def cmd_verify(args) -> int:
    if args.n_max < 1:
        return _usage("period cap must be at least 1")
    progress = sys.stderr if args.progress else None
    try:
        if args.alphabet <= 2:
            rows = verify_theorem(args.n_max, jobs=args.jobs, progress=progress)
        else:
            rows = multi_letter_survey(args.alphabet, args.n_max, progress=progress)
    except RuntimeError as exc:  # TheoremViolation or an agreement failure
        print(f"FALSIFIED: {exc}", file=sys.stderr)
        return FALSIFIED
    if args.json:
        for row in rows:
            print(row.to_json_line())
    else:
        print(SURVEY_CSV_HEADER)
        for row in rows:
            print(row.to_csv_line())
    return 0


def cmd_graph(args) -> int:
    if args.k < 0:
        return _usage("graph order must be nonnegative")
    w = _parse_word(args.word, args.alphabet)
    g = build_graph(w, args.k)
    if args.json:
        print(json.dumps({"k": g.k, "vertices": sorted(g.vertices), "edges": sorted(g.edges)}))
    elif args.scheme:
        print(to_scheme(g).to_dot())
    else:
        print(g.to_dot())
    return 0


def cmd_tables(args) -> int:
    if args.which == 2:
        table = deviation_table()
        if args.json:
            print(json.dumps(table))
        elif args.csv:
            print(deviation_table_csv(table))
        else:
            print(format_deviation_table(table))
        return 0
    multiplier = 1.0 if args.which == 1 else DEVIATION_SECOND
    table = growth_table(multiplier=multiplier)
    if args.json:
        print(json.dumps([[list(e) for e in row] for row in table]))
    elif args.csv:
        print(growth_table_csv(table))
    else:
        print(format_growth_table(table))
    return 0


def cmd_drive(args) -> int:
    w = _parse_word(args.word, args.alphabet)
    if len(set(w.text)) < 2:
        return _usage("drive needs a word using at least two letters")
    try:
        if args.mode == "parallel":
            outcome = parallel_drive(w)
        else:
            outcome = sequential_drive(w, policy=args.policy, seed=args.seed)
    except SchemeError as exc:
        print(f"FALSIFIED: {exc}", file=sys.stderr)
        return FALSIFIED
    if args.json:
        print(outcome.to_json_text())
    else:
        print(
            f"word {w.text}: cycle {outcome.final_cycle_length}, "
            f"crossroads {outcome.crossroads_total}, restrictions {outcome.restrictions_total}"
        )
        for e in outcome.events:
            print(
                f"  meet out={e.out_fork} in={e.in_fork} path={e.path_length} "
                f"deleted={e.restrictions_applied} children={list(e.children)}"
            )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="periodica",
        description="Forbidden-word systems of periodic sequences",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("forbid", help="print the reduced restriction system of a word")
    p.add_argument("word")
    p.add_argument("--alphabet", type=int, default=0, help="alphabet size (default: inferred)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_forbid)

    p = sub.add_parser("verify", help="sweep all necklaces up to a period cap")
    p.add_argument("n_max", type=int)
    p.add_argument("--alphabet", type=int, default=2)
    p.add_argument("--jobs", type=int, default=default_jobs())
    p.add_argument("--json", action="store_true")
    p.add_argument("--progress", action="store_true", help="report progress on stderr")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("graph", help="emit an order-k factor graph as DOT")
    p.add_argument("word")
    p.add_argument("k", type=int)
    p.add_argument("--dot", action="store_true", help="DOT output (the default)")
    p.add_argument("--scheme", action="store_true", help="contract road chains first")
    p.add_argument("--alphabet", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("tables", help="regenerate the three reference tables")
    p.add_argument("--which", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--csv", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("drive", help="run a scheme drive and print its event log")
    p.add_argument("word")
    p.add_argument("--mode", choices=("parallel", "sequential"), default="parallel")
    p.add_argument("--policy", choices=("first", "last", "random"), default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alphabet", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_drive)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except ValueError as exc:
        return _usage(str(exc))


if __name__ == "__main__":
    sys.exit(main())
