"""Truck-and-package logistics encoding and the recycling benchmark.

Successor-state atoms ``ta(X,Y,Z)``, ``pa(X,Y,Z)``, ``in(Y,Z)`` (truck or
package at X after moving the truck from Y to Z; package in the truck after
the move) are explained in terms of the initial-state abducibles ``ta(X)``,
``pa(X)`` and ``in``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

from .completion import Mode
from .engine import rewrite
from .normal_form import NormalForm, render_explanations
from .program import Atom, Literal, Program, parse_literal, parse_program
from .recycling import RewriteSystem, base_system, computed_rule_from_normal_form, extend_system

LOGISTICS_RULES = """\
#abducible ta/1, pa/1, in/0.
ta(X,X1,X).
pa(X,X1,X2) :- ta(X,X1,X2), in(X1,X2).
ta(X,X1,X2) :- X != X2, ta(X), not taol(X,X1,X2).
taol(X,X1,X2) :- Y != X, ta(Y,X1,X2).
pa(X,X1,X2) :- pa(X), not paol(X,X1,X2).
paol(X,X1,X2) :- Y != X, pa(Y,X1,X2).
in(X,Y) :- in.
"""

# the standard benchmark query set
TABLE_QUERIES = ("pa(1,2,3)", "-pa(1,2,3)", "pa(3,2,3)", "-pa(3,2,3)", "pa(1,5,7)",
                 "-pa(1,5,7)", "pa(7,5,1)", "-pa(7,5,1)", "pa(7,1,7)", "-pa(7,1,7)")


def logistics_text(n: int) -> str:
    if n < 2:
        raise ValueError(f"the logistics domain needs at least 2 locations, got {n}")
    return f"#domain 1..{n}.\n{LOGISTICS_RULES}"


def generate_logistics(n: int) -> Program:
    return parse_program(logistics_text(n))


def in_domain(query: Literal, n: int) -> bool:
    return all(1 <= int(c) <= n for c in query.atom.args)


def table_queries(n: int) -> list[Literal]:
    """The table's queries that name only locations 1..n."""
    return [q for q in map(parse_literal, TABLE_QUERIES) if in_domain(q, n)]


def recycled_literals(n: int) -> list[Literal]:
    """Every ground ta(x,y,z) and in(y,z) literal, both polarities."""
    locs = [str(k) for k in range(1, n + 1)]
    atoms = [Atom("in", (y, z)) for y in locs for z in locs]
    atoms += [Atom("ta", (x, y, z)) for x in locs for y in locs for z in locs]
    return [Literal(a, s) for a in atoms for s in (True, False)]


def recycling_system(program: Program, n: int) -> RewriteSystem:
    """R^1 holding computed rules for all ta/in successor literals."""
    r0 = base_system(program, Mode.ABDUCTIVE)
    delta = [computed_rule_from_normal_form(l, rewrite(r0, l)[0], 0, Mode.ABDUCTIVE)
             for l in recycled_literals(n)]
    return extend_system(r0, delta)


@dataclass(frozen=True)
class BenchRow:
    query: Literal
    mode: str  # "NR" or "WR"
    steps_total: int
    steps_literal: int
    records: int
    residues: str
    normal_form: NormalForm

    def as_csv_row(self) -> list:
        return [str(self.query), self.mode, self.steps_total, self.steps_literal,
                self.records, self.residues]


CSV_COLUMNS = ("query", "mode", "steps_total", "steps_literal", "records", "residues")


def run_benchmark(n: int, queries: Iterable[Literal | str] | None = None,
                  modes: Sequence[str] = ("NR", "WR")) -> list[BenchRow]:
    program = generate_logistics(n)
    if queries is None:
        queries = table_queries(n)
    queries = [parse_literal(q) if isinstance(q, str) else q for q in queries]
    for q in queries:
        if not in_domain(q, n):
            raise ValueError(f"query {q} names a location outside 1..{n}")
    systems = {}
    if "NR" in modes:
        systems["NR"] = base_system(program, Mode.ABDUCTIVE)
    if "WR" in modes:
        systems["WR"] = recycling_system(program, n)
    rows = []
    for q in queries:
        for mode in modes:
            nf, trace = rewrite(systems[mode], q)
            rows.append(BenchRow(q, mode, trace.total, trace.literal_rewrites, len(nf),
                                 render_explanations(nf), nf))
    return rows


def rows_to_csv(rows: Iterable[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv_row())
    return buf.getvalue()
