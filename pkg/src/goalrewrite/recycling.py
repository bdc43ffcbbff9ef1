"""Computed rules, the recycling rules, and towers of rewrite systems.

A :class:`RewriteSystem` is an immutable snapshot: the program's completed
definitions plus a map from ground literals to computed rules.  A computed
rule for a literal replaces its literal rewriting entirely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .completion import Completion, Mode
from .dependency import build_dependency_graph, order_goals
from .normal_form import NormalForm, SuccessRecord, format_normal_form, parse_normal_form
from .program import Literal, Program, is_consistent, parse_literal


@dataclass(frozen=True)
class ComputedRule:
    literal: Literal
    body: NormalForm
    generation: int = 0
    mode: Mode = Mode.PLAIN

    def __str__(self) -> str:
        return f"{self.literal} -> {format_normal_form(self.body)}"


def computed_rule_from_normal_form(literal: Literal, nf: NormalForm, generation: int = 0,
                                   mode: Mode = Mode.PLAIN) -> ComputedRule:
    for rec in nf.records:
        if not rec.is_consistent():
            raise ValueError(f"record {rec} for {literal} is inconsistent; not a normal form")
    # loop bookkeeping belongs to the run that produced nf, not to the rule
    body = NormalForm(SuccessRecord(r.context, r.residue) for r in nf.records)
    return ComputedRule(literal, body, generation, mode)


@dataclass(frozen=True)
class RewriteSystem:
    completion: Completion
    computed: Mapping = field(default_factory=lambda: MappingProxyType({}))
    index: int = 0
    mode: Mode = Mode.PLAIN

    @property
    def program(self) -> Program:
        return self.completion.source

    def rule_for(self, lit: Literal) -> ComputedRule | None:
        return self.computed.get(lit)


def base_system(program: Program | Completion, mode: Mode = Mode.PLAIN) -> RewriteSystem:
    """R^0: literal rewriting by the completion only."""
    completion = program if isinstance(program, Completion) else Completion(program)
    return RewriteSystem(completion, MappingProxyType({}), 0, mode)


def extend_system(system: RewriteSystem, delta: Iterable[ComputedRule]) -> RewriteSystem:
    """R^{i+1}: ``system`` with the rules in ``delta`` replacing literal rewriting."""
    new = {}
    for rule in delta:
        if rule.generation != system.index:
            raise ValueError(f"rule for {rule.literal} was computed on R^{rule.generation}, "
                             f"not on R^{system.index}")
        if rule.mode is not system.mode:
            raise ValueError(f"{rule.mode.value} rule for {rule.literal} in a "
                             f"{system.mode.value} system")
        if rule.literal in new:
            raise ValueError(f"two computed rules for {rule.literal}")
        new[rule.literal] = rule
    computed = dict(system.computed)
    computed.update(new)
    return RewriteSystem(system.completion, MappingProxyType(computed), system.index + 1,
                         system.mode)


def apply_recycling(chain_set: frozenset, rule: ComputedRule,
                    mode: Mode = Mode.PLAIN) -> list[SuccessRecord]:
    """Records produced by recycling ``rule`` at a chain whose literal set is ``chain_set``.

    An empty list means F.
    """
    out = []
    for rec in rule.body.records:
        if mode is Mode.PLAIN:
            context = rec.context | chain_set
            if is_consistent(context):
                out.append(SuccessRecord(context))
            continue
        context = rec.context | chain_set if rec.context else frozenset()
        residue = frozenset((lit, ctx | chain_set) for lit, ctx in rec.residue)
        new = SuccessRecord(context, residue)
        if new.is_consistent():
            out.append(new)
    return out


# -- batch solving -----------------------------------------------------------

class Policy(Enum):
    RECYCLE = "recycle"
    NO_RECYCLE = "no-recycle"


def solve_goals(system: RewriteSystem, goals: Sequence[Literal], *,
                recycle: bool = True, **opts) -> tuple[dict, RewriteSystem]:
    """Solve ``goals`` in order; with ``recycle`` each result extends the system."""
    from .engine import rewrite

    results = {}
    for goal in goals:
        nf, _ = rewrite(system, goal, system.mode, **opts)
        results[goal] = nf
        if recycle and goal not in system.computed:
            rule = computed_rule_from_normal_form(goal, nf, system.index, system.mode)
            system = extend_system(system, [rule])
    return results, system


def batch_solve(program: Program, goals: Sequence[Literal], mode: Mode = Mode.PLAIN,
                policy: Policy = Policy.RECYCLE, **opts) -> dict:
    """Solve every goal; under RECYCLE, dependencies first and each answer recycled."""
    goals = list(dict.fromkeys(goals))
    system = base_system(program, mode)
    if policy is Policy.NO_RECYCLE:
        results, _ = solve_goals(system, goals, recycle=False, **opts)
    else:
        ordered = order_goals(build_dependency_graph(program), goals)
        results, _ = solve_goals(system, ordered, recycle=True, **opts)
    return {g: results[g] for g in goals}


# -- rule store --------------------------------------------------------------

def dump_rules(system: RewriteSystem) -> str:
    rules = sorted(system.computed.values(), key=lambda r: (r.generation, r.literal.sort_key()))
    return "".join(f"{r}\n" for r in rules)


def load_rules(text: str, system: RewriteSystem) -> RewriteSystem:
    """Extend ``system`` by the rules of a store file, as one new generation."""
    delta = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("%", 1)[0].strip()
        if not line:
            continue
        if " -> " not in line:
            raise ValueError(f"line {n}: expected 'literal -> normal form'")
        lit, body = line.split(" -> ", 1)
        delta.append(ComputedRule(parse_literal(lit), parse_normal_form(body), system.index,
                                  system.mode))
    return extend_system(system, delta)
