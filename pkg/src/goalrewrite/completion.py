"""Lazy, per-atom Clark completion and negation of definition bodies.

A definition body is a tuple of conjuncts, each a tuple of ground literals:
``()`` is F and a conjunct ``()`` is T.
"""

from __future__ import annotations

import itertools
import threading
from enum import Enum

from .program import Atom, Literal, Program, instantiate_body_only_variables, match_head

Body = tuple  # tuple[tuple[Literal, ...], ...]

FALSE: Body = ()
TRUE: Body = ((),)


class Mode(Enum):
    PLAIN = "plain"
    ABDUCTIVE = "abductive"


def _conjunct(lits) -> tuple:
    # identical subgoals under one parent share a rewrite chain; keep one
    return tuple(dict.fromkeys(lits))


def _dedup(conjuncts) -> Body:
    seen, out = set(), []
    for c in conjuncts:
        key = frozenset(c)
        if key not in seen:
            seen.add(key)
            out.append(c)
    return tuple(out)


def negate_body(body: Body) -> Body:
    """De Morgan dual of a DNF body, again in DNF."""
    if any(len(c) == 0 for c in body):
        return FALSE
    return _dedup(_conjunct(-l for l in choice) for choice in itertools.product(*body))


class Completion:
    """Completed definitions of a program, computed on demand and memoized."""

    def __init__(self, program: Program):
        self.source = program
        self.program = instantiate_body_only_variables(program)
        by_pred: dict = {}
        for rule in self.program.rules:
            by_pred.setdefault(rule.head.signature, []).append(rule)
        self._rules = by_pred
        self._cache: dict = {}
        self._neg_cache: dict = {}
        self._lock = threading.Lock()

    def definition(self, atom: Atom, mode: Mode = Mode.PLAIN) -> Body:
        if mode is Mode.ABDUCTIVE and self.program.is_abducible(atom):
            raise ValueError(f"abducible {atom} has no completed definition")
        try:
            return self._cache[atom]
        except KeyError:
            pass
        if not atom.is_ground():
            raise ValueError(f"definition requested for non-ground atom {atom}")
        conjuncts = []
        for rule in self._rules.get(atom.signature, ()):
            binding = match_head(rule.head, atom)
            if binding is None:
                continue
            inst = rule.substitute(binding)
            if any(l == r for l, r in inst.constraints):
                continue
            conjuncts.append(_conjunct(inst.body))
        body = _dedup(conjuncts)
        with self._lock:
            return self._cache.setdefault(atom, body)

    def negated_definition(self, atom: Atom, mode: Mode = Mode.PLAIN) -> Body:
        try:
            return self._neg_cache[atom]
        except KeyError:
            pass
        body = negate_body(self.definition(atom, mode))
        with self._lock:
            return self._neg_cache.setdefault(atom, body)

    def literal_definition(self, lit: Literal, mode: Mode = Mode.PLAIN) -> Body:
        if lit.positive:
            return self.definition(lit.atom, mode)
        return self.negated_definition(lit.atom, mode)


def completed_definition(program: Program, atom: Atom, mode: Mode = Mode.PLAIN) -> Body:
    return Completion(program).definition(atom, mode)


def render_body(body: Body) -> str:
    if not body:
        return "F"
    return " v ".join(" & ".join(map(str, c)) if c else "T" for c in body)
