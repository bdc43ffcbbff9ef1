"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Every test prints a PASS/FAIL line (also repeated in the terminal summary).
"""

import random
import time

import pytest

import acceptance_report
from goalrewrite.completion import Mode
from goalrewrite.corpus import all_literals, example, random_corpus
from goalrewrite.engine import rewrite
from goalrewrite.logistics import generate_logistics, run_benchmark, table_queries
from goalrewrite.normal_form import render
from goalrewrite.oracle import check_completeness, check_soundness, enumerate_models
from goalrewrite.program import parse_literal, parse_program
from goalrewrite.recycling import (Policy, base_system, batch_solve,
                                   computed_rule_from_normal_form, extend_system)
from goalrewrite.corpus import P0_TEXT, P1_TEXT

CORPUS_SEED = 2024
CORPUS_SIZE = 100


def report(capsys, number, passed, summary):
    line = acceptance_report.record(number, passed, summary)
    with capsys.disabled():
        print(f"\n{line}")
    assert passed, line


def ctx(*texts):
    return frozenset(parse_literal(t) for t in texts)


@pytest.fixture(scope="module")
def corpus():
    """100 random programs (<= 10 atoms, <= 15 rules) with their models."""
    out = []
    for program, atoms in random_corpus(CORPUS_SEED, CORPUS_SIZE, max_atoms=10, max_rules=15):
        out.append((program, atoms, enumerate_models(program, extra_atoms=atoms)))
    return out


@pytest.fixture(scope="module")
def towers(corpus):
    """R^0, R^1, R^2 per corpus program, recycling random literal subsets."""
    rng = random.Random(CORPUS_SEED + 1)
    out = []
    for program, atoms, _ in corpus:
        lits = all_literals(atoms)
        system = base_system(program)
        tiers = [system]
        for _ in range(2):
            chosen = rng.sample(lits, rng.randint(1, len(lits)))
            delta = [computed_rule_from_normal_form(l, rewrite(system, l)[0], system.index)
                     for l in chosen if l not in system.computed]
            system = extend_system(system, delta)
            tiers.append(system)
        out.append(tiers)
    return out


def test_criterion_01_example_1(capsys):
    start = time.perf_counter()
    p0, p1 = parse_program(P0_TEXT), parse_program(P1_TEXT)
    got = {
        "P0 a": rewrite(p0, parse_literal("a"))[0],
        "P0 b": rewrite(p0, parse_literal("b"))[0],
        "P1 -b": rewrite(p1, parse_literal("-b"))[0],
        "P1 b": rewrite(p1, parse_literal("b"))[0],
    }
    elapsed = time.perf_counter() - start
    ok = (got["P0 a"].contexts() == {ctx("a", "-b")} and len(got["P0 a"]) == 1
          and got["P0 b"].is_false and got["P1 -b"].is_false
          and [r.context for r in got["P1 b"]] == [ctx("b", "-c")]
          and elapsed < 0.1)
    shown = ", ".join(f"{k} -> {render(v)}" for k, v in got.items())
    report(capsys, 1, ok, f"{shown} ({elapsed * 1000:.1f} ms, limit 100 ms)")


def test_criterion_02_p3_and_recycling(capsys):
    p3 = example("p3")
    p, g = parse_literal("p"), parse_literal("g")
    nf_p = rewrite(p3, p)[0]
    expected = {ctx("p", "-a"), ctx("p", "-b")}
    first = nf_p.contexts() == expected and len(nf_p) == 2
    r1 = extend_system(base_system(p3), [computed_rule_from_normal_form(p, nf_p, 0)])
    nf_g, trace = rewrite(r1, g)
    second = trace.counts["RC"] > 0 and any(ctx("g", "a", "p", "-b") <= c for c in nf_g.contexts())
    report(capsys, 2, first and second,
           f"p -> {render(nf_p)} (expected T({{-a, p}}) v T({{-b, p}})); "
           f"g with p recycled -> {render(nf_g)} (needs a context containing {{g, a, p, -b}}: "
           f"{'yes' if second else 'no'})")


def test_criterion_03_example_2(capsys):
    p2 = example("p2")
    g, p = parse_literal("g"), parse_literal("p")
    models = enumerate_models(p2)
    plain = batch_solve(p2, [g], policy=Policy.NO_RECYCLE)[g]
    recycled = batch_solve(p2, [p, g], policy=Policy.RECYCLE)[g]
    ok = (plain.contexts() == {ctx("g", "a", "-b")} and len(plain) == 1
          and recycled.contexts() == {ctx("g", "a", "-b"), ctx("g", "a", "e", "p", "-b")}
          and len(recycled) == 2
          and check_soundness(g, plain, models).passed
          and check_soundness(g, recycled, models).passed)
    report(capsys, 3, ok, f"no-recycle g -> {render(plain)}; recycle g -> {render(recycled)}")


def test_criterion_04_oracle_answer_sets(capsys):
    base = enumerate_models(parse_program(P0_TEXT)).answer_sets
    more = enumerate_models(parse_program(P0_TEXT + "c.\n")).answer_sets
    as_text = lambda sets: sorted("{" + ",".join(sorted(map(str, s))) + "}" for s in sets)
    ok = as_text(base) == ["{a,c}"] and as_text(more) == ["{a,c}", "{b,c}"]
    report(capsys, 4, ok, f"P0 answer sets {as_text(base)}; with fact c {as_text(more)}")


def test_criterion_05_sound_and_complete(capsys, corpus):
    start = time.perf_counter()
    total = bad = 0
    for program, atoms, _ in corpus:
        models = enumerate_models(program, extra_atoms=atoms)
        for lit in all_literals(atoms):
            nf = rewrite(program, lit)[0]
            total += 1
            if not (check_soundness(lit, nf, models).passed
                    and check_completeness(lit, nf, models).passed):
                bad += 1
    elapsed = time.perf_counter() - start
    report(capsys, 5, bad == 0 and elapsed < 60,
           f"{total - bad}/{total} literals sound and complete on R0 over {len(corpus)} programs "
           f"({elapsed:.1f} s, limit 60 s)")


def test_criterion_06_recycling_sound_and_complete(capsys, corpus, towers):
    total = bad = 0
    for (_, atoms, models), tiers in zip(corpus, towers):
        for system in tiers[1:]:
            for lit in all_literals(atoms):
                nf = rewrite(system, lit)[0]
                total += 1
                if not (check_soundness(lit, nf, models).passed
                        and check_completeness(lit, nf, models).passed):
                    bad += 1
    rules = sum(len(t[-1].computed) for t in towers)
    report(capsys, 6, bad == 0,
           f"{total - bad}/{total} literal checks pass on R1 and R2 ({rules} computed rules)")


def test_criterion_07_corollary_1(capsys, corpus):
    rng = random.Random(CORPUS_SEED + 2)
    total = bad = 0
    for program, atoms, _ in corpus:
        lits = all_literals(atoms)
        r0 = base_system(program)
        base = {l: rewrite(r0, l)[0] for l in lits}
        system = r0
        for _ in range(2):
            failing = [l for l in lits if l not in system.computed and rewrite(system, l)[0].is_false]
            chosen = rng.sample(failing, rng.randint(0, len(failing)))
            system = extend_system(system, [computed_rule_from_normal_form(l, rewrite(system, l)[0],
                                                                           system.index)
                                            for l in chosen])
            for l in lits:
                total += 1
                bad += rewrite(system, l)[0] != base[l]
    report(capsys, 7, bad == 0, f"{total - bad}/{total} normal forms identical to R0 "
                                f"after recycling F-literals")


def test_criterion_08_confluence(capsys, corpus, towers):
    seeds = range(20)
    systems = []
    for name in ("p0", "p1", "p2", "p3"):
        program = example(name)
        lits = all_literals(sorted(program.atoms(), key=lambda a: a.sort_key()))
        r0 = base_system(program)
        r1 = extend_system(r0, [computed_rule_from_normal_form(l, rewrite(r0, l)[0], 0)
                                for l in lits[::2]])
        systems += [(r0, lits), (r1, lits)]
    for (_, atoms, _), tiers in zip(corpus, towers):
        lits = all_literals(atoms)
        systems += [(tiers[0], lits), (tiers[2], lits)]
    goals = bad = 0
    for system, lits in systems:
        for lit in lits:
            reference = rewrite(system, lit)[0]
            goals += 1
            if any(rewrite(system, lit, seed=s)[0] != reference for s in seeds):
                bad += 1
    report(capsys, 8, bad == 0,
           f"{goals - bad}/{goals} goals give one record set over {len(seeds)} seeds "
           f"(examples and corpus, with and without computed rules)")


def test_criterion_09_loop_rotation(capsys):
    checks = bad = 0
    for program, atoms in random_corpus(CORPUS_SEED + 3, 50, max_atoms=8, max_rules=15):
        solved = {}

        def solve(lit):
            if lit not in solved:
                solved[lit] = rewrite(program, lit)[0]
            return solved[lit]

        for lit in all_literals(atoms):
            for rec in solve(lit):
                for theta in rec.root_loops:
                    for member in theta:
                        checks += 1
                        bad += rec.context not in solve(member).contexts()
    report(capsys, 9, bad == 0 and checks > 0,
           f"{checks - bad}/{checks} loop-segment literals reproduce the looping context")


def test_criterion_10_logistics_abduction(capsys):
    q = parse_literal("pa(3,2,3)")
    want = {frozenset({parse_literal("pa(3)")}), frozenset({parse_literal("in")})}
    parts, ok = [], True
    for n in range(4, 8):
        start = time.perf_counter()
        nf = batch_solve(generate_logistics(n), [q], Mode.ABDUCTIVE)[q]
        explanations = nf.explanations()
        elapsed = time.perf_counter() - start
        good = len(explanations) == 2 and set(explanations) == want and elapsed < 5
        ok &= good
        shown = " v ".join(sorted(" & ".join(map(str, e)) for e in explanations))
        parts.append(f"n={n}: {shown} ({elapsed:.2f} s)")
    report(capsys, 10, ok, "; ".join(parts) + " [limit 5 s each]")


def test_criterion_11_logistics_recycling(capsys):
    ratios, parts, ok = {}, [], True
    queries = table_queries(5)
    assert queries == table_queries(6)
    per_query = {}
    for n in (5, 6):
        rows = run_benchmark(n, queries)
        nr = {r.query: r.steps_literal for r in rows if r.mode == "NR"}
        wr = {r.query: r.steps_literal for r in rows if r.mode == "WR"}
        for q in queries:
            ok &= wr[q] < nr[q]
            per_query.setdefault(q, []).append(wr[q] / nr[q])
        ratios[n] = sum(wr.values()) / sum(nr.values())
        parts.append(f"n={n} WR/NR={sum(wr.values())}/{sum(nr.values())}={ratios[n]:.4f}")
    ok &= ratios[6] <= ratios[5]
    detail = ", ".join(f"{q} {a:.4f}->{b:.4f}" for q, (a, b) in per_query.items())
    report(capsys, 11, ok, "; ".join(parts) + f"; per query: {detail}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
