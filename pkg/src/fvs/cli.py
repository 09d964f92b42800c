"""Command-line interface: ``fvs solve|verify|bench|lp-solve``."""

from __future__ import annotations

import argparse
import os
import sys
import time

from .bench import DEFAULT_TIMEOUT, aggregate, run_suite, write_csv
from .branch import TABLE_ROWS, BranchConfig, canonical_name, run_with_big_stack, solve_min
from .graph import ContractViolation, verify_solution
from .ilp import (COMMAND_ENV, IlpError, builtin_backend, highs_backend, make_backend, parse_lp,
                  solve_ilp, write_assignment)
from .pace_io import ParseError, parse_instance, parse_solution, write_solution

EXIT_OK = 0
EXIT_FAIL = 1  # infeasible solution, timeout
EXIT_USAGE = 2
EXIT_IO = 3


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _check_algorithm(parser: argparse.ArgumentParser, text: str) -> str:
    try:
        return canonical_name(text)
    except ContractViolation as exc:
        parser.error(f"{exc}; valid algorithms include: {', '.join(TABLE_ROWS)}")


def cmd_solve(args, parser) -> int:
    algo = _check_algorithm(parser, args.algorithm)
    try:
        g = parse_instance(_read_text(args.instance))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ParseError as exc:
        print(f"error: {args.instance}: {exc}", file=sys.stderr)
        return EXIT_IO
    start = time.monotonic()
    timeout = args.timeout if args.timeout and args.timeout > 0 else None
    status = EXIT_OK
    if algo == "ilp":
        deadline = None if timeout is None else start + timeout
        try:
            sol = solve_ilp(g, make_backend(args.ilp_backend, args.ilp_command), deadline=deadline)
        except IlpError as exc:
            print(f"ILP stopped: {exc}", file=sys.stderr)
            sol = exc.incumbent
            status = EXIT_FAIL
            if sol is None:
                return status
        best = sol
    else:
        cfg = BranchConfig.parse(algo, time_limit=timeout, collect_stats=args.stats)
        res = run_with_big_stack(solve_min, g, cfg)
        best = res.best
        if res.status != "optimal":
            print(f"timeout after {time.monotonic() - start:.3f}s; reporting upper bound", file=sys.stderr)
            status = EXIT_FAIL
        if args.stats:
            st = res.stats
            print(f"nodes={st.nodes_visited} lb_prunes={st.prunes_by_lb} greedy={st.greedy_steps} "
                  f"subcubic={st.subcubic_calls} components={len(st.components_separated)} "
                  f"initial_dn={st.initial_dn} initial_dm={st.initial_dm}", file=sys.stderr)
    _write_text(args.output, write_solution(best.labels(g)))
    print(f"size={best.size} time={time.monotonic() - start:.3f}s algorithm={algo}", file=sys.stderr)
    return status


def cmd_verify(args, parser) -> int:
    try:
        g = parse_instance(_read_text(args.instance))
        labels = parse_solution(_read_text(args.solution))
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    ids = []
    for label in labels:
        try:
            ids.append(g.id_of(label))
        except KeyError:
            print(f"unknown vertex {label!r}", file=sys.stderr)
            return EXIT_FAIL
    if len(set(ids)) != len(ids):
        print("duplicate vertex in solution", file=sys.stderr)
        return EXIT_FAIL
    if not verify_solution(g, ids):
        print("not a feedback vertex set", file=sys.stderr)
        return EXIT_FAIL
    print(f"ok size={len(ids)}", file=sys.stderr)
    return EXIT_OK


def cmd_bench(args, parser) -> int:
    algos = [_check_algorithm(parser, a) for a in args.algorithms.split(",") if a.strip()]
    if not os.path.isdir(args.directory):
        print(f"error: {args.directory} is not a directory", file=sys.stderr)
        return EXIT_IO

    def progress(rec):
        print(f"{rec.instance} {rec.algorithm} {rec.outcome} {rec.wall_time_s or 0:.2f}s", file=sys.stderr)

    records = run_suite(args.directory, algos, timeout=args.timeout, jobs=args.jobs,
                        collect_stats=args.stats, ilp_backend=args.ilp_backend,
                        ilp_command=args.ilp_command, progress=progress)
    _write_text(args.csv, write_csv(records))
    sys.stderr.write(aggregate(records).table())
    return EXIT_OK


def cmd_lp_solve(args, parser) -> int:
    """Reference external solver: reads an LP file, writes ``x<id>=value`` lines."""
    try:
        model = parse_lp(_read_text(args.model))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    backend = builtin_backend if args.engine == "builtin" else highs_backend
    _write_text(args.solution, write_assignment(backend(model)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fvs", description="Exact feedback vertex set solvers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def ilp_flags(p):
        p.add_argument("--ilp-backend", choices=("builtin", "highs", "external"), default="highs")
        p.add_argument("--ilp-command", default=None,
                       help=f"external solver command with {{model}} {{solution}} {{start}}; "
                            f"defaults to ${COMMAND_ENV}")

    p = sub.add_parser("solve", help="solve one instance")
    p.add_argument("instance", help="instance file, or - for stdin")
    p.add_argument("-a", "--algorithm", default="cao+cc+deg3+lb")
    p.add_argument("-t", "--timeout", type=float, default=None, help="seconds")
    p.add_argument("-o", "--output", default=None, help="solution file (default stdout)")
    p.add_argument("--stats", action="store_true", help="collect search statistics")
    ilp_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a solution")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run algorithms on a directory of instances")
    p.add_argument("directory")
    p.add_argument("-a", "--algorithms", default="cao+cc+deg3+lb",
                   help="comma-separated algorithm strings")
    p.add_argument("-t", "--timeout", type=float, default=DEFAULT_TIMEOUT, help="seconds per run")
    p.add_argument("-j", "--jobs", type=int, default=1)
    p.add_argument("--csv", default=None, help="CSV output path (default stdout)")
    p.add_argument("--stats", action="store_true", help="collect reduction measures")
    ilp_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("lp-solve", help="solve an LP-format 0/1 covering model")
    p.add_argument("model")
    p.add_argument("solution")
    p.add_argument("--start", default=None, help="warm start file (ignored)")
    p.add_argument("--engine", choices=("builtin", "highs"), default="highs")
    p.set_defaults(func=cmd_lp_solve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
