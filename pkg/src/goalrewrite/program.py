"""Programs, literals and the textual program format.

Concrete syntax::

    % comment
    #abducible ta/1.
    #domain 1..4.
    ta(X,X1,X).
    pa(X,X1,X2) :- ta(X,X1,X2), in(X1,X2).
    taol(X,X1,X2) :- Y != X, ta(Y,X1,X2).
    a :- not b.

Variables start with an uppercase letter or ``_``; constants are lowercase
identifiers or integers (kept as strings).  ``!=`` is the only built-in.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union


class ParseError(ValueError):
    """Syntax error in a program or query, with a 1-based position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}" if line else message)


class ProgramError(ValueError):
    """A syntactically valid program that violates a program invariant."""


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[str, Var]


def _const_key(c: str):
    return (0, int(c), "") if c.lstrip("-").isdigit() else (1, 0, c)


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple = ()
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.predicate, self.args)))

    def __hash__(self) -> int:
        return self._hash

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def signature(self) -> tuple[str, int]:
        return (self.predicate, len(self.args))

    def is_ground(self) -> bool:
        return not any(isinstance(t, Var) for t in self.args)

    def variables(self) -> set[Var]:
        return {t for t in self.args if isinstance(t, Var)}

    def substitute(self, binding: dict) -> Atom:
        if not binding:
            return self
        return Atom(self.predicate, tuple(binding.get(t, t) if isinstance(t, Var) else t
                                          for t in self.args))

    def sort_key(self):
        return (self.predicate, tuple(_const_key(str(t)) for t in self.args))

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True
    _hash: int = field(init=False, repr=False, compare=False, default=0)
    _neg: Literal | None = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.atom._hash, self.positive)))

    def __hash__(self) -> int:
        return self._hash

    def __neg__(self) -> Literal:
        neg = self._neg
        if neg is None:
            neg = Literal(self.atom, not self.positive)
            object.__setattr__(self, "_neg", neg)
            object.__setattr__(neg, "_neg", self)
        return neg

    complement = __neg__

    def is_ground(self) -> bool:
        return self.atom.is_ground()

    def sort_key(self):
        return (self.atom.sort_key(), not self.positive)

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"-{self.atom}"


def sorted_literals(lits: Iterable[Literal]) -> list[Literal]:
    return sorted(lits, key=Literal.sort_key)


def is_consistent(lits: Iterable[Literal]) -> bool:
    s = lits if isinstance(lits, (set, frozenset)) else set(lits)
    return not any(-l in s for l in s if l.positive)


@dataclass(frozen=True)
class Rule:
    """``head :- body, constraints``; ``body`` keeps positive and ``not`` literals in source order."""

    head: Atom
    body: tuple = ()
    constraints: tuple = ()  # pairs (Term, Term) meaning left != right

    @property
    def pos_body(self) -> tuple[Atom, ...]:
        return tuple(l.atom for l in self.body if l.positive)

    @property
    def neg_body(self) -> tuple[Atom, ...]:
        return tuple(l.atom for l in self.body if not l.positive)

    def variables(self) -> set[Var]:
        out = self.head.variables()
        for lit in self.body:
            out |= lit.atom.variables()
        for pair in self.constraints:
            out |= {t for t in pair if isinstance(t, Var)}
        return out

    def body_only_variables(self) -> set[Var]:
        return self.variables() - self.head.variables()

    def substitute(self, binding: dict) -> Rule:
        return Rule(
            self.head.substitute(binding),
            tuple(Literal(l.atom.substitute(binding), l.positive) for l in self.body),
            tuple(tuple(binding.get(t, t) if isinstance(t, Var) else t for t in pair)
                  for pair in self.constraints),
        )

    def __str__(self) -> str:
        parts = [str(l.atom) if l.positive else f"not {l.atom}" for l in self.body]
        parts += [f"{l} != {r}" for l, r in self.constraints]
        if not parts:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(parts)}."


@dataclass(frozen=True)
class Program:
    rules: tuple = ()
    abducibles: frozenset = frozenset()  # {(predicate, arity)}
    domain: tuple = ()

    def __post_init__(self):
        for rule in self.rules:
            if rule.head.signature in self.abducibles:
                raise ProgramError(f"abducible predicate {rule.head.predicate}/"
                                   f"{rule.head.arity} used as a rule head: {rule}")

    def is_abducible(self, atom: Atom) -> bool:
        return atom.signature in self.abducibles

    def with_rules(self, rules: Iterable[Rule]) -> Program:
        return Program(tuple(rules), self.abducibles, self.domain)

    def is_ground(self) -> bool:
        return not any(rule.variables() for rule in self.rules)

    def atoms(self) -> set[Atom]:
        out = set()
        for rule in self.rules:
            out.add(rule.head)
            out.update(l.atom for l in rule.body)
        return out

    def __str__(self) -> str:
        lines = [f"#abducible {p}/{n}." for p, n in sorted(self.abducibles)]
        if self.domain:
            lines.append(f"#domain {', '.join(self.domain)}.")
        lines += [str(r) for r in self.rules]
        return "\n".join(lines) + ("\n" if lines else "")


# -- tokenizer ---------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|%[^\n]*)
  | (?P<neq>!=)
  | (?P<if>:-|<-)
  | (?P<range>\.\.)
  | (?P<dot>\.)
  | (?P<comma>,)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<slash>/)
  | (?P<minus>-)
  | (?P<hash>\#[a-z]+)
  | (?P<int>[0-9]+)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        for i, ch in enumerate(m.group()):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str):
        raise ParseError(message, self.tok.line, self.tok.col)

    def take(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            self.error(f"expected {kind}, found {self.tok.text or 'end of input'!r}")
        tok = self.tok
        self.i += 1
        return tok

    def accept(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    def term(self) -> Term:
        tok = self.tok
        if tok.kind == "var":
            self.i += 1
            return Var(tok.text)
        if tok.kind in ("ident", "int"):
            self.i += 1
            return tok.text
        if tok.kind == "minus" and self.toks[self.i + 1].kind == "int":
            self.i += 2
            return "-" + self.toks[self.i - 1].text
        self.error(f"expected a term, found {tok.text or 'end of input'!r}")

    def atom(self) -> Atom:
        name = self.take("ident").text
        args = []
        if self.accept("lpar"):
            args.append(self.term())
            while self.accept("comma"):
                args.append(self.term())
            self.take("rpar")
        return Atom(name, tuple(args))

    def body_item(self, body: list, constraints: list):
        tok = self.tok
        if tok.kind == "ident" and tok.text == "not" and self.toks[self.i + 1].kind == "ident":
            self.i += 1
            body.append(Literal(self.atom(), False))
        elif tok.kind == "ident" and self.toks[self.i + 1].kind != "neq":
            body.append(Literal(self.atom(), True))
        else:
            left = self.term()
            self.take("neq")
            constraints.append((left, self.term()))

    def directive(self, abducibles: set, domain: list):
        tok = self.take("hash")
        if tok.text == "#abducible":
            while True:
                name = self.take("ident").text
                self.take("slash")
                abducibles.add((name, int(self.take("int").text)))
                if not self.accept("comma"):
                    break
        elif tok.text == "#domain":
            first = self.term()
            if self.accept("range"):
                last = self.term()
                try:
                    lo, hi = int(first), int(last)
                except (TypeError, ValueError):
                    raise ParseError("#domain range bounds must be integers", tok.line, tok.col)
                domain.extend(str(k) for k in range(lo, hi + 1))
            else:
                domain.append(first)
                while self.accept("comma"):
                    domain.append(self.term())
            if any(isinstance(c, Var) for c in domain):
                raise ParseError("#domain takes constants only", tok.line, tok.col)
        else:
            raise ParseError(f"unknown directive {tok.text}", tok.line, tok.col)
        self.take("dot")

    def program(self) -> Program:
        rules, abducibles, domain = [], set(), []
        while self.tok.kind != "eof":
            if self.tok.kind == "hash":
                self.directive(abducibles, domain)
                continue
            start = self.tok
            head = self.atom()
            body, constraints = [], []
            if self.accept("if"):
                self.body_item(body, constraints)
                while self.accept("comma"):
                    self.body_item(body, constraints)
            self.take("dot")
            rule = Rule(head, tuple(body), tuple(constraints))
            if rule.body_only_variables() and not domain:
                raise ParseError(
                    f"variables {sorted(v.name for v in rule.body_only_variables())} occur only "
                    "in the body and no #domain was declared", start.line, start.col)
            rules.append(rule)
        return Program(tuple(rules), frozenset(abducibles), tuple(dict.fromkeys(domain)))


def parse_program(text: str) -> Program:
    return _Parser(text).program()


def parse_literal(text: str, *, ground: bool = True) -> Literal:
    """Parse ``atom`` or ``-atom``."""
    p = _Parser(text)
    positive = not p.accept("minus")
    atom = p.atom()
    p.take("eof")
    if ground and not atom.is_ground():
        raise ParseError(f"query {text.strip()!r} is not ground")
    return Literal(atom, positive)


parse_query = parse_literal


# -- grounding ---------------------------------------------------------------

def _eval_constraints(constraints) -> tuple | None:
    """Drop decided constraints; None when one is false."""
    kept = []
    for left, right in constraints:
        if isinstance(left, Var) or isinstance(right, Var):
            if left == right:
                return None
            kept.append((left, right))
        elif left == right:
            return None
    return tuple(kept)


def _instances(rule: Rule, variables: list[Var], domain) -> Iterator[Rule]:
    for values in itertools.product(domain, repeat=len(variables)):
        inst = rule.substitute(dict(zip(variables, values)))
        constraints = _eval_constraints(inst.constraints)
        if constraints is not None:
            yield Rule(inst.head, inst.body, constraints)


def _sorted_vars(vs) -> list[Var]:
    return sorted(vs, key=lambda v: v.name)


def instantiate_body_only_variables(program: Program) -> Program:
    """Instantiate variables that occur only in rule bodies over the domain.

    Head variables are left alone; constraints that become variable-free are
    decided and removed (the rule is dropped when one is false).
    """
    out = []
    for rule in program.rules:
        body_only = rule.body_only_variables()
        if not body_only:
            constraints = _eval_constraints(rule.constraints)
            if constraints is not None:
                out.append(rule if constraints == rule.constraints
                           else Rule(rule.head, rule.body, constraints))
            continue
        if not program.domain:
            raise ProgramError(f"empty domain for body-only variables in {rule}")
        out.extend(_instances(rule, _sorted_vars(body_only), program.domain))
    return program.with_rules(out)


def ground_program(program: Program) -> Program:
    """Fully instantiate every rule over the domain (for the model oracle)."""
    out = []
    for rule in program.rules:
        variables = _sorted_vars(rule.variables())
        if variables and not program.domain:
            raise ProgramError(f"cannot ground {rule}: no #domain declared")
        out.extend(_instances(rule, variables, program.domain))
    return program.with_rules(out)


def match_head(head: Atom, atom: Atom) -> dict | None:
    """Bind the variables of ``head`` so that it equals the ground ``atom``."""
    if head.predicate != atom.predicate or len(head.args) != len(atom.args):
        return None
    binding: dict = {}
    for t, c in zip(head.args, atom.args):
        if isinstance(t, Var):
            if binding.setdefault(t, c) != c:
                return None
        elif t != c:
            return None
    return binding
