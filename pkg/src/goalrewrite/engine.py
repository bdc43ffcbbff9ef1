"""Goal rewriting to normal form.

Two strategies are provided and must agree on every normal form:

* ``depth-first`` (default): each literal is rewritten to its own normal form
  before conjunctions are distributed, so the product of alternatives is
  formed only over finished sub-results.  Conjuncts that fail in one step
  are looked at first.
* ``worklist``: the goal is kept as an explicit DNF of disjuncts with pending
  annotated literals; one literal is processed per :func:`expand_step`.  A
  seed randomizes which disjunct and literal are processed next.

Both keep, for every pending literal, the rewrite chain from the query to it.
Loop literals are closed by LR1/LR2, literals with a computed rule are
recycled, abducibles (abductive mode) are set aside with their chain as
context, and everything else is rewritten by its completed definition.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

from .completion import Completion, Mode
from .normal_form import NormalForm, SuccessRecord
from .program import Literal, Program
from .recycling import RewriteSystem, apply_recycling, base_system

# -- loops -------------------------------------------------------------------


class LoopClass(Enum):
    NON_LOOP = "non-loop"
    ODD = "odd"
    POSITIVE = "positive"
    NEGATIVE = "negative"
    EVEN = "even"

    @property
    def fails(self) -> bool:
        return self in (LoopClass.ODD, LoopClass.POSITIVE)

    @property
    def succeeds(self) -> bool:
        return self in (LoopClass.NEGATIVE, LoopClass.EVEN)


def find_loop(chain: Sequence[Literal]) -> tuple[LoopClass, int | None]:
    """Classify the last literal of ``chain`` and locate the ancestor it loops on.

    Failing loops take precedence if several ancestors match, which the
    loop-free-prefix invariant rules out anyway.
    """
    last = chain[-1]
    neg = -last
    found = None
    for i in range(len(chain) - 1):
        lit = chain[i]
        if lit is neg or lit == neg:
            return LoopClass.ODD, i
        if found is None and lit == last:
            found = i
    if found is None:
        return LoopClass.NON_LOOP, None
    segment = chain[found:]
    if all(l.positive for l in segment):
        return LoopClass.POSITIVE, found
    if not any(l.positive for l in segment):
        return LoopClass.NEGATIVE, found
    return LoopClass.EVEN, found


def classify_loop(chain: Sequence[Literal]) -> LoopClass:
    return find_loop(chain)[0]


# -- trace -------------------------------------------------------------------

PROGRAM_RULE = "ProgramRule"
LITERAL_RULES = frozenset({PROGRAM_RULE})


@dataclass(frozen=True)
class Step:
    rule: str
    literal: Literal | None
    size: int


@dataclass
class Trace:
    record: bool = False
    steps: list = field(default_factory=list)
    counts: Counter = field(default_factory=Counter)
    max_chain: int = 0

    def add(self, rule: str, literal: Literal | None = None, size: int = 0):
        self.counts[rule] += 1
        if self.record:
            self.steps.append(Step(rule, literal, size))

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def literal_rewrites(self) -> int:
        return sum(n for rule, n in self.counts.items() if rule in LITERAL_RULES)

    def render(self) -> str:
        return "".join(f"#{n} {s.rule} {s.literal if s.literal is not None else '-'}"
                       f" | disjuncts={s.size}\n" for n, s in enumerate(self.steps, 1))


def _as_system(sys, mode: Mode | None) -> RewriteSystem:
    if isinstance(sys, (Program, Completion)):
        return base_system(sys, mode or Mode.PLAIN)
    if not isinstance(sys, RewriteSystem):
        raise TypeError(f"expected a RewriteSystem or Program, got {type(sys).__name__}")
    if mode is None or mode is sys.mode:
        return sys
    if sys.computed:
        raise ValueError(f"system holds {sys.mode.value} computed rules; "
                         f"cannot run in {mode.value} mode")
    return replace(sys, mode=mode)


_EMPTY = frozenset()


def _clash(a: frozenset, b: frozenset) -> bool:
    if len(a) > len(b):
        a, b = b, a
    for lit in a:
        if -lit in b:
            return True
    return False


# -- depth-first strategy ----------------------------------------------------


class _LiteralBits:
    """Literal sets as ints: atom k owns bit 2k (positive) and 2k+1 (negative)."""

    def __init__(self):
        self.index: dict = {}
        self.atoms: list = []
        self.even = 0
        self._byte_table: list = []
        self._literals: list = []
        self._decoded: dict = {}

    def bit(self, lit: Literal) -> int:
        k = self.index.get(lit.atom)
        if k is None:
            k = self.index[lit.atom] = len(self.atoms)
            self.atoms.append(lit.atom)
            self.even |= 1 << (2 * k)
        return 1 << (2 * k + (0 if lit.positive else 1))

    def encode(self, lits) -> int:
        out = 0
        for lit in lits:
            out |= self.bit(lit)
        return out

    def consistent(self, bits: int) -> bool:
        return not (bits & (bits >> 1) & self.even)

    def decode(self, bits: int) -> frozenset:
        hit = self._decoded.get(bits)
        if hit is not None:
            return hit
        table = self._byte_table
        if not table:
            table.extend(tuple(j for j in range(8) if b >> j & 1) for b in range(256))
        lits = self._literals
        while len(lits) < 2 * len(self.atoms):
            pos = len(lits)
            lits.append(Literal(self.atoms[pos >> 1], not pos & 1))
        out = []
        for i, chunk in enumerate(bits.to_bytes((bits.bit_length() + 7) // 8, "little")):
            if chunk:
                base = 8 * i
                out.extend(lits[base + j] for j in table[chunk])
        result = self._decoded[bits] = frozenset(out)
        return result


# internal record: (context, residue, support, root_loops).  Contexts and the
# support (context plus every residue context) are bitsets; residue is a
# frozenset of (literal, context bits).
_UNIT = (0, _EMPTY, 0, _EMPTY)


def _dedup(recs: list) -> list:
    if len(recs) < 2:
        return recs
    merged: dict = {}
    for r in recs:
        key = (r[0], r[1])
        old = merged.get(key)
        if old is None:
            merged[key] = r
        elif not r[3] <= old[3]:
            merged[key] = (old[0], old[1], old[2], old[3] | r[3])
    return list(merged.values())


class _DepthFirst:
    def __init__(self, system: RewriteSystem, trace: Trace, prune: bool):
        self.completion = system.completion
        self.program = system.completion.program
        self.computed = system.computed
        self.abductive = system.mode is Mode.ABDUCTIVE
        self.mode = system.mode
        self.trace = trace
        self.prune = prune
        self.bits = _LiteralBits()

    def run(self, query: Literal) -> NormalForm:
        recs = self.literal((query,), self.bits.bit(query), 0)
        decode = self.bits.decode
        residues: dict = {_EMPTY: _EMPTY}

        def residue(r):
            out = residues.get(r)
            if out is None:
                out = residues[r] = frozenset((l, decode(b)) for l, b in r)
            return out

        return NormalForm(SuccessRecord(decode(c), residue(r), loops) for c, r, _, loops in recs)

    def _recycle(self, lit, rule, chain_bits, bound) -> list:
        if rule.body.is_false:
            self.trace.add("ComputedF", lit)
            return []
        self.trace.add("RC'" if self.abductive else "RC", lit, len(rule.body))
        bits = self.bits
        out = []
        for rec in apply_recycling(bits.decode(chain_bits), rule, self.mode):
            ctx = bits.encode(rec.context)
            residue = frozenset((l, bits.encode(c)) for l, c in rec.residue)
            sup = ctx
            for _, c in residue:
                sup |= c
            if bound and not bits.consistent(sup | bound):
                continue
            out.append((ctx, residue, sup, _EMPTY))
        return out

    def literal(self, chain: tuple, chain_bits: int, bound: int) -> list:
        lit = chain[-1]
        trace = self.trace
        if len(chain) > trace.max_chain:
            trace.max_chain = len(chain)
        if self.prune and bound & self.bits.bit(-lit):
            trace.add("SR4", lit)
            return []
        cls, i = find_loop(chain)
        if cls.fails:
            trace.add("LR1", lit)
            return []
        if cls.succeeds:
            trace.add("LR2", lit, 1)
            if self.prune and not self.bits.consistent(chain_bits | bound):
                return []
            loops = frozenset((chain[1:-1],)) if i == 0 else _EMPTY
            return [(chain_bits, _EMPTY, chain_bits, loops)]
        rule = self.computed.get(lit)
        if rule is not None:
            return self._recycle(lit, rule, chain_bits, bound)
        if self.abductive and self.program.is_abducible(lit.atom):
            return [(0, frozenset(((lit, chain_bits),)), chain_bits, _EMPTY)]
        body = self.completion.literal_definition(lit, self.mode)
        trace.add(PROGRAM_RULE, lit, len(body))
        out = []
        for conj in body:
            if not conj:
                out.append((chain_bits, _EMPTY, chain_bits, _EMPTY))
            else:
                out.extend(self.conjunction(conj, chain, chain_bits, bound))
        return _dedup(out)

    def _fails_at_once(self, lit: Literal, chain: tuple, bound: int) -> bool:
        if self.prune and bound & self.bits.bit(-lit):
            self.trace.add("SR4", lit)
            return True
        cls, _ = find_loop(chain)
        if cls.fails:
            self.trace.add("LR1", lit)
            return True
        if cls.succeeds:
            return False
        rule = self.computed.get(lit)
        if rule is not None:
            if rule.body.is_false:
                self.trace.add("ComputedF", lit)
                return True
            return False
        if self.abductive and self.program.is_abducible(lit.atom):
            return False
        if not self.completion.literal_definition(lit, self.mode):
            self.trace.add(PROGRAM_RULE, lit, 0)
            return True
        return False

    def conjunction(self, conj: tuple, chain: tuple, chain_bits: int, bound: int) -> list:
        chains = [chain + (l,) for l in conj]
        for l, ch in zip(conj, chains):
            if self._fails_at_once(l, ch, bound):
                self.trace.add("SR2", l)
                return []
        bit = self.bits.bit
        partial = [_UNIT]
        for l, ch in zip(conj, chains):
            sub_bound = bound
            if self.prune:
                common = partial[0][2]
                for p in partial[1:]:
                    common &= p[2]
                    if not common:
                        break
                sub_bound = bound | common
            results = self.literal(ch, chain_bits | bit(l), sub_bound)
            if not results:
                self.trace.add("SR2", l)
                return []
            partial = self._merge(partial, results)
            if not partial:
                return []
        return partial

    def _merge(self, left: list, right: list) -> list:
        out = []
        even = self.bits.even
        sr4 = 0
        for a0, a1, a2, a3 in left:
            for b0, b1, b2, b3 in right:
                u = a2 | b2
                if u & (u >> 1) & even:
                    sr4 += 1
                    continue
                out.append((a0 | b0, (a1 | b1) if a1 and b1 else (a1 or b1), u,
                            (a3 | b3) if a3 and b3 else (a3 or b3)))
        sr3 = len(out)
        if self.trace.record:
            for _ in range(sr3):
                self.trace.add("SR3", None, sr3)
            for _ in range(sr4):
                self.trace.add("SR4", None, sr3)
        else:
            self.trace.counts["SR3"] += sr3
            self.trace.counts["SR4"] += sr4
        return _dedup(out)


# -- worklist strategy -------------------------------------------------------


class Status(Enum):
    OPEN = "open"
    SUCCEEDED = "succeeded"
    FAILED = "failed"


@dataclass(frozen=True)
class AnnotatedLiteral:
    literal: Literal
    chain: tuple  # from the query to literal, inclusive

    def __str__(self) -> str:
        return f"{self.literal}@{'<'.join(map(str, self.chain))}"


@dataclass(frozen=True)
class Disjunct:
    pending: tuple = ()
    context: frozenset = frozenset()
    residue: frozenset = frozenset()
    status: Status = Status.OPEN
    root_loops: frozenset = frozenset()
    support: frozenset = frozenset()


FAILED = Disjunct(status=Status.FAILED)


@dataclass(frozen=True)
class Goal:
    disjuncts: tuple = ()

    @property
    def is_false(self) -> bool:
        return not self.disjuncts

    def open_indices(self) -> list[int]:
        return [i for i, d in enumerate(self.disjuncts) if d.status is Status.OPEN]

    def normal_form(self) -> NormalForm:
        return NormalForm(SuccessRecord(d.context, d.residue, d.root_loops)
                          for d in self.disjuncts if d.status is Status.SUCCEEDED)


def initial_goal(query: Literal) -> Goal:
    return Goal((Disjunct(pending=(AnnotatedLiteral(query, (query,)),)),))


def _settle(pending: tuple, context: frozenset, residue: frozenset, support: frozenset,
            loops: frozenset, prune: bool, trace: Trace) -> Disjunct:
    for p in pending:
        # T(C) & l -> F when -l is in C
        if -p.literal in support:
            trace.add("SR4", p.literal)
            return FAILED
        if prune and _clash(frozenset(p.chain), support):
            trace.add("SR4", p.literal)
            return FAILED
    status = Status.OPEN if pending else Status.SUCCEEDED
    return Disjunct(pending, context, residue, status, loops, support)


def _conjoin(d: Disjunct, k: int, new_pending: tuple, context=_EMPTY, residue=_EMPTY,
             support=_EMPTY, loops=_EMPTY, *, prune: bool, trace: Trace) -> Disjunct:
    """Replace pending literal ``k`` of ``d`` by ``new_pending`` and T-merge the rest."""
    if support:
        if _clash(d.support, support):
            trace.add("SR4")
            return FAILED
        trace.add("SR3")
    pending = d.pending[:k] + new_pending + d.pending[k + 1:]
    return _settle(pending, d.context | context, d.residue | residue, d.support | support,
                   d.root_loops | loops, prune, trace)


def expand_step(system, goal: Goal, pick: random.Random | None = None,
                mode: Mode | None = None, trace: Trace | None = None,
                prune: bool = True) -> Goal:
    """Process one pending literal of one open disjunct of ``goal``."""
    system = _as_system(system, mode)
    trace = trace if trace is not None else Trace()
    opened = goal.open_indices()
    if not opened:
        raise ValueError("goal has no open disjunct")
    di = pick.choice(opened) if pick else opened[0]
    d = goal.disjuncts[di]
    k = pick.randrange(len(d.pending)) if pick else 0
    ann = d.pending[k]
    lit, chain = ann.literal, ann.chain
    chain_set = frozenset(chain)
    if len(chain) > trace.max_chain:
        trace.max_chain = len(chain)
    kw = dict(prune=prune, trace=trace)

    cls, i = find_loop(chain)
    program = system.completion.program
    if cls.fails:
        trace.add("LR1", lit)
        children = [FAILED]
    elif cls.succeeds:
        trace.add("LR2", lit)
        loops = frozenset((chain[1:-1],)) if i == 0 else _EMPTY
        children = [_conjoin(d, k, (), chain_set, _EMPTY, chain_set, loops, **kw)]
    elif lit in system.computed:
        rule = system.computed[lit]
        if rule.body.is_false:
            trace.add("ComputedF", lit)
            children = [FAILED]
        else:
            trace.add("RC'" if system.mode is Mode.ABDUCTIVE else "RC", lit, len(rule.body))
            children = [_conjoin(d, k, (), r.context, r.residue, r.support, **kw)
                        for r in apply_recycling(chain_set, rule, system.mode)]
    elif system.mode is Mode.ABDUCTIVE and program.is_abducible(lit.atom):
        residue = frozenset(((lit, chain_set),))
        children = [_conjoin(d, k, (), _EMPTY, residue, chain_set, **kw)]
    else:
        body = system.completion.literal_definition(lit, system.mode)
        trace.add(PROGRAM_RULE, lit, len(body))
        children = []
        for conj in body:
            if not conj:
                children.append(_conjoin(d, k, (), chain_set, _EMPTY, chain_set, **kw))
            else:
                new = tuple(AnnotatedLiteral(l, chain + (l,)) for l in conj)
                children.append(_conjoin(d, k, new, **kw))
    kept = [c for c in children if c.status is not Status.FAILED]
    if len(kept) < len(children):
        trace.add("SR1", lit, len(goal.disjuncts) - 1 + len(kept))
    return Goal(goal.disjuncts[:di] + tuple(kept) + goal.disjuncts[di + 1:])


def _run_worklist(system: RewriteSystem, query: Literal, seed, trace: Trace,
                  prune: bool) -> NormalForm:
    goal = initial_goal(query)
    pick = random.Random(seed) if seed is not None else None
    while goal.open_indices():
        goal = expand_step(system, goal, pick, system.mode, trace, prune)
    return goal.normal_form()


# -- entry point -------------------------------------------------------------

STRATEGIES = ("depth-first", "worklist")


def rewrite(system, query: Literal, mode: Mode | None = None, *, seed: int | None = None,
            trace: bool = False, prune: bool = True,
            strategy: str | None = None) -> tuple[NormalForm, Trace]:
    """Rewrite the ground literal ``query`` to its normal form.

    ``system`` is a :class:`RewriteSystem` or a plain program (rewritten on
    R^0).  Passing ``seed`` selects the randomized worklist strategy unless
    ``strategy`` says otherwise.
    """
    if not query.is_ground():
        raise ValueError(f"query {query} is not ground")
    system = _as_system(system, mode)
    if strategy is None:
        strategy = "worklist" if seed is not None else "depth-first"
    log = Trace(record=trace)
    if strategy == "depth-first":
        nf = _DepthFirst(system, log, prune).run(query)
    elif strategy == "worklist":
        nf = _run_worklist(system, query, seed, log, prune)
    else:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    return nf, log


def merge_success(context: frozenset, other: frozenset) -> frozenset | None:
    """SR3/SR4 on two consistent contexts: their union, or None for F."""
    if _clash(context, other):
        return None
    return context | other
