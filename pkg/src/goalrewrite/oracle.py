"""Brute-force ground semantics: alternating fixpoints, partial stable models
and answer sets, and soundness/completeness checks for normal forms.

A negation set S is represented by the frozenset of atoms whose default
negation it assumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .normal_form import NormalForm
from .program import Atom, Literal, Program, ground_program, sorted_literals

DEFAULT_CAP = 18


class OracleRefusal(RuntimeError):
    """The atom universe is larger than the enumeration cap."""


@dataclass(frozen=True)
class GroundRules:
    """A ground program in a form suited to repeated closure computations."""

    rules: tuple  # (head, positive atoms, negated atoms)
    atoms: tuple  # sorted universe

    @classmethod
    def from_program(cls, program: Program, extra_atoms: Iterable[Atom] = ()) -> GroundRules:
        if not program.is_ground():
            program = ground_program(program)
        rules = tuple((r.head, frozenset(r.pos_body), frozenset(r.neg_body))
                      for r in program.rules)
        universe = set(program.atoms()) | set(extra_atoms)
        return cls(rules, tuple(sorted(universe, key=Atom.sort_key)))


def _ground(p) -> GroundRules:
    return p if isinstance(p, GroundRules) else GroundRules.from_program(p)


def derive_closure(program, negations: Iterable[Atom]) -> frozenset:
    """Atoms derivable from the rules with ``not a`` read as a fact for a in S."""
    g = _ground(program)
    s = frozenset(negations)
    pending = [(h, pos) for h, pos, neg in g.rules if neg <= s]
    derived: set = set()
    changed = True
    while changed:
        changed = False
        rest = []
        for h, pos in pending:
            if h in derived:
                continue
            if pos <= derived:
                derived.add(h)
                changed = True
            else:
                rest.append((h, pos))
        pending = rest
    return frozenset(derived)


def f_p(program, negations: Iterable[Atom]) -> frozenset:
    """The negations of every atom not derivable under S."""
    g = _ground(program)
    closure = derive_closure(g, negations)
    return frozenset(a for a in g.atoms if a not in closure)


@dataclass(frozen=True)
class PartialStableModel:
    true_atoms: frozenset
    false_atoms: frozenset

    def holds(self, lit: Literal) -> bool:
        return lit.atom in (self.true_atoms if lit.positive else self.false_atoms)

    def contains(self, lits: Iterable[Literal]) -> bool:
        return all(self.holds(l) for l in lits)

    def literals(self) -> frozenset:
        return frozenset([Literal(a) for a in self.true_atoms]
                         + [Literal(a, False) for a in self.false_atoms])

    def __str__(self) -> str:
        pos = ",".join(str(a) for a in sorted(self.true_atoms, key=Atom.sort_key))
        neg = ",".join(str(a) for a in sorted(self.false_atoms, key=Atom.sort_key))
        return f"PSM: +{{{pos}}} -{{{neg}}}"


@dataclass(frozen=True)
class Models:
    atoms: tuple
    partial: tuple  # PartialStableModels, in enumeration order
    answer_sets: tuple  # frozensets of true atoms
    well_founded: PartialStableModel

    def containing(self, lit: Literal) -> list[PartialStableModel]:
        return [m for m in self.partial if m.holds(lit)]


def enumerate_models(program, cap: int = DEFAULT_CAP,
                     extra_atoms: Iterable[Atom] = ()) -> Models:
    """Scan every negation set for alternating-fixpoint models."""
    g = program if isinstance(program, GroundRules) else GroundRules.from_program(program,
                                                                                  extra_atoms)
    n = len(g.atoms)
    if n > cap:
        raise OracleRefusal(f"{n} ground atoms exceed the enumeration cap of {cap}")
    partial: dict = {}
    answer_sets = []
    for k in range(n + 1):
        for combo in combinations(g.atoms, k):
            s = frozenset(combo)
            fs = f_p(g, s)
            if not s <= fs or f_p(g, fs) != s:
                continue
            model = PartialStableModel(derive_closure(g, s), s)
            partial.setdefault((model.true_atoms, model.false_atoms), model)
            if fs == s:
                answer_sets.append(model.true_atoms)
    # least fixpoint of F_P^2, iterated from the empty set
    s = frozenset()
    while True:
        nxt = f_p(g, f_p(g, s))
        if nxt == s:
            break
        s = nxt
    wf = PartialStableModel(derive_closure(g, s), s)
    return Models(g.atoms, tuple(partial.values()), tuple(answer_sets), wf)


@dataclass(frozen=True)
class OracleReport:
    goal: Literal
    check: str
    passed: bool
    witnesses: tuple = field(default=())

    def __str__(self) -> str:
        status = "pass" if self.passed else "FAIL"
        extra = "".join(f"\n    {w}" for w in self.witnesses)
        return f"{self.check} {self.goal}: {status}{extra}"


def _ctx(ctx) -> str:
    return "{" + ", ".join(map(str, sorted_literals(ctx))) + "}"


def check_soundness(goal: Literal, nf: NormalForm, models: Models) -> OracleReport:
    """Every success context holds the goal and lies inside some partial stable model."""
    bad = []
    for rec in nf.records:
        if goal not in rec.context:
            bad.append(f"context {_ctx(rec.context)} lacks the goal")
        elif not any(m.contains(rec.context) for m in models.partial):
            bad.append(f"context {_ctx(rec.context)} is in no partial stable model")
    return OracleReport(goal, "soundness", not bad, tuple(bad))


def check_completeness(goal: Literal, nf: NormalForm, models: Models) -> OracleReport:
    """Every partial stable model holding the goal includes some success context."""
    bad = []
    for m in models.containing(goal):
        if not any(goal in r.context and m.contains(r.context) for r in nf.records):
            bad.append(f"{m} holds {goal} but includes no success context")
    return OracleReport(goal, "completeness", not bad, tuple(bad))


def render_models(models: Models) -> str:
    lines = [str(m) for m in models.partial]
    for a in models.answer_sets:
        lines.append("AS: {" + ",".join(str(x) for x in sorted(a, key=Atom.sort_key)) + "}")
    return "\n".join(lines) + "\n"
