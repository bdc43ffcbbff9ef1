"""Small reference programs and a seeded random ground-program generator.

The reference programs are the worked examples the engine is tested against;
the generator produces the differential-testing corpus.
"""

from __future__ import annotations

import random

from .program import Atom, Literal, Program, Rule, parse_program

P0_TEXT = """\
a :- not b.
b :- c, not a.
c :- a.
"""

P1_TEXT = """\
b :- not c.
c :- c.
"""

P2_TEXT = """\
g :- a.
a :- not b.
a :- e.
b :- b.
e :- p.
p :- a.
"""

P3_TEXT = """\
g :- a.
a :- p.
p :- not a.
a :- not p.
p :- not b.
b :- not a.
"""

EXAMPLES = {"p0": P0_TEXT, "p1": P1_TEXT, "p2": P2_TEXT, "p3": P3_TEXT}


def example(name: str) -> Program:
    return parse_program(EXAMPLES[name])


def random_program(rng: random.Random, max_atoms: int = 10, max_rules: int = 15,
                   max_body: int = 3) -> tuple[Program, list[Atom]]:
    """A ground program over p0..p(k-1) with mixed positive/negated bodies.

    Returns the program and its full atom list; atoms that occur in no rule
    are still part of the universe and worth querying.
    """
    n = rng.randint(1, max_atoms)
    atoms = [Atom(f"p{i}") for i in range(n)]
    rules = []
    for _ in range(rng.randint(0, max_rules)):
        head = rng.choice(atoms)
        body = rng.sample(atoms, min(rng.randint(0, max_body), n))
        rules.append(Rule(head, tuple(Literal(a, rng.random() < 0.5) for a in body)))
    return Program(tuple(rules)), atoms


def random_corpus(seed: int, count: int, **kw) -> list[tuple[Program, list[Atom]]]:
    rng = random.Random(seed)
    return [random_program(rng, **kw) for _ in range(count)]


def all_literals(atoms) -> list[Literal]:
    return [Literal(a, sign) for a in atoms for sign in (True, False)]
