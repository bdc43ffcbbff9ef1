"""Command-line entry point.

Exit codes: 0 success, 1 a solved query rewrote to F, 2 a check or
confluence run found a discrepancy (or the oracle refused), 64 usage or
input error.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .completion import Mode
from .engine import rewrite
from .logistics import rows_to_csv, run_benchmark
from .normal_form import dumps, render, render_explanations
from .oracle import (DEFAULT_CAP, OracleRefusal, check_completeness, check_soundness,
                     enumerate_models, render_models)
from .program import ParseError, Program, ProgramError, parse_literal, parse_program
from .recycling import Policy, batch_solve

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_CHECK = 2
EXIT_USAGE = 64

_NEGATIVE_LITERAL = re.compile(r"^-(\d+$|\d*\.\d+$|[a-z]\w*(\(.*\))?$)")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Exits 64 on usage errors and reads ``-lit`` queries as positionals."""

    def __init__(self, *args, **kw):
        kw.setdefault("allow_abbrev", False)
        super().__init__(*args, **kw)
        # argparse lets "negative numbers" through as positionals; widen that to literals
        self._negative_number_matcher = _NEGATIVE_LITERAL

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class CliConfig:
    subcommand: str
    program: str | None = None
    queries: list = field(default_factory=list)
    recycle: bool = True
    minimize: bool = False
    trace: bool = False
    records: bool = False
    seeds: int = 20
    locations: int = 4
    oracle_cap: int = DEFAULT_CAP
    abductive: bool = False
    json: str | None = None
    csv: str | None = None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="goalrewrite",
                     description="Goal rewriting and abduction for normal logic programs.")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="COMMAND")

    def solving(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("program", help="program file ('-' for stdin)")
        p.add_argument("queries", nargs="+", metavar="QUERY", help="ground literal, e.g. a or -b")
        p.add_argument("--no-recycle", dest="recycle", action="store_false",
                       help="solve each query from scratch instead of recycling earlier answers")
        p.add_argument("--minimize", action="store_true",
                       help="drop records subsumed by another record")
        p.add_argument("--trace", action="store_true", help="print every rewrite step")
        p.add_argument("--json", metavar="PATH", help="also write results as JSON")
        return p

    solving("solve", "rewrite queries to normal form")
    abduce = solving("abduce", "compute abductive explanations")
    abduce.add_argument("--records", action="store_true",
                        help="print full records instead of minimal explanations")

    oracle = sub.add_parser("oracle", help="enumerate partial stable models and answer sets")
    oracle.add_argument("program")
    oracle.add_argument("--oracle-cap", type=int, default=DEFAULT_CAP, metavar="N")

    check = sub.add_parser("check", help="check normal forms against the model oracle")
    check.add_argument("program")
    check.add_argument("queries", nargs="+", metavar="QUERY")
    check.add_argument("--oracle-cap", type=int, default=DEFAULT_CAP, metavar="N")

    bench = sub.add_parser("bench", help="run the logistics recycling benchmark")
    bench.add_argument("suite", choices=["logistics"])
    bench.add_argument("queries", nargs="*", metavar="QUERY",
                       help="defaults to the standard query set restricted to 1..N")
    bench.add_argument("--locations", type=int, default=4, metavar="N")
    bench.add_argument("--csv", metavar="PATH", help="write the table to PATH instead of stdout")

    conf = sub.add_parser("confluence", help="compare randomized rewrite orders")
    conf.add_argument("program")
    conf.add_argument("queries", nargs="+", metavar="QUERY")
    conf.add_argument("--seeds", type=int, default=20, metavar="K")
    conf.add_argument("--abductive", action="store_true")
    return parser


def parse_args(argv) -> CliConfig:
    ns = build_parser().parse_args(argv)
    cfg = CliConfig(ns.subcommand)
    for name in ("program", "queries", "recycle", "minimize", "trace", "records", "seeds",
                 "locations", "oracle_cap", "abductive", "json", "csv"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    return cfg


def _read_program(path: str) -> Program:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e
    try:
        return parse_program(text)
    except ParseError as e:
        raise UsageError(f"{path}: {e}") from e


def _parse_queries(texts) -> list:
    try:
        return [parse_literal(q) for q in texts]
    except ParseError as e:
        raise UsageError(f"bad query: {e}") from e


def _solve(cfg: CliConfig, out) -> int:
    program = _read_program(cfg.program)
    queries = _parse_queries(cfg.queries)
    mode = Mode.ABDUCTIVE if cfg.subcommand == "abduce" else Mode.PLAIN
    if cfg.trace:
        for q in queries:
            _, trace = rewrite(program, q, mode, trace=True)
            out.write(f"% trace {q}\n{trace.render()}")
    policy = Policy.RECYCLE if cfg.recycle else Policy.NO_RECYCLE
    results = batch_solve(program, queries, mode, policy)
    if cfg.minimize:
        results = {q: nf.minimized() for q, nf in results.items()}
    show = render if mode is Mode.PLAIN or cfg.records else render_explanations
    for q, nf in results.items():
        out.write(f"{show(nf)}\n" if len(results) == 1 else f"{q}: {show(nf)}\n")
    if cfg.json:
        Path(cfg.json).write_text(dumps(results.items()) + "\n")
    return EXIT_FALSE if any(nf.is_false for nf in results.values()) else EXIT_OK


def _oracle(cfg: CliConfig, out) -> int:
    program = _read_program(cfg.program)
    try:
        models = enumerate_models(program, cfg.oracle_cap)
    except OracleRefusal as e:
        print(f"goalrewrite: {e}", file=sys.stderr)
        return EXIT_CHECK
    out.write(render_models(models))
    return EXIT_OK


def _check(cfg: CliConfig, out) -> int:
    program = _read_program(cfg.program)
    queries = _parse_queries(cfg.queries)
    try:
        models = enumerate_models(program, cfg.oracle_cap, extra_atoms=[q.atom for q in queries])
    except OracleRefusal as e:
        print(f"goalrewrite: {e}", file=sys.stderr)
        return EXIT_CHECK
    ok = True
    for q in queries:
        nf, _ = rewrite(program, q)
        for report in (check_soundness(q, nf, models), check_completeness(q, nf, models)):
            out.write(f"{report}\n")
            ok &= report.passed
    return EXIT_OK if ok else EXIT_CHECK


def _bench(cfg: CliConfig, out) -> int:
    if cfg.locations < 2:
        raise UsageError("--locations must be at least 2")
    try:
        rows = run_benchmark(cfg.locations, cfg.queries or None)
    except (ParseError, ValueError) as e:
        raise UsageError(str(e)) from e
    table = rows_to_csv(rows)
    if cfg.csv:
        Path(cfg.csv).write_text(table)
    else:
        out.write(table)
    return EXIT_OK


def _confluence(cfg: CliConfig, out) -> int:
    if cfg.seeds < 1:
        raise UsageError("--seeds must be positive")
    program = _read_program(cfg.program)
    queries = _parse_queries(cfg.queries)
    mode = Mode.ABDUCTIVE if cfg.abductive else Mode.PLAIN
    ok = True
    for q in queries:
        reference, _ = rewrite(program, q, mode)
        bad = [s for s in range(cfg.seeds) if rewrite(program, q, mode, seed=s)[0] != reference]
        if bad:
            ok = False
            out.write(f"{q}: MISMATCH for seeds {', '.join(map(str, bad))}\n")
        else:
            out.write(f"{q}: ok ({cfg.seeds} seeds, {len(reference)} records)\n")
    return EXIT_OK if ok else EXIT_CHECK


COMMANDS = {"solve": _solve, "abduce": _solve, "oracle": _oracle, "check": _check,
            "bench": _bench, "confluence": _confluence}


def run(cfg: CliConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        return COMMANDS[cfg.subcommand](cfg, out)
    except (UsageError, ProgramError) as e:
        print(f"goalrewrite: {e}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> int:
    try:
        cfg = parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
