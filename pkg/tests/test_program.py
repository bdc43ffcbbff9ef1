import pytest
from hypothesis import given

from goalrewrite.corpus import P0_TEXT
from goalrewrite.program import (Atom, Literal, ParseError, Program, ProgramError, Rule, Var,
                                 ground_program, instantiate_body_only_variables, is_consistent,
                                 match_head, parse_literal, parse_program, parse_query)
from strategies import ground_programs


def test_parse_p0():
    p = parse_program(P0_TEXT)
    assert len(p.rules) == 3
    assert [str(r) for r in p.rules] == ["a :- not b.", "b :- c, not a.", "c :- a."]
    assert p.rules[1].pos_body == (Atom("c"),)
    assert p.rules[1].neg_body == (Atom("a"),)


def test_empty_program():
    p = parse_program("")
    assert p.rules == ()
    assert parse_program("% only a comment\n").rules == ()


def test_alternative_arrow_and_facts():
    p = parse_program("a <- b.\nb.")
    assert str(p.rules[0]) == "a :- b."
    assert p.rules[1].body == ()


def test_body_only_variable_without_domain_is_an_error():
    with pytest.raises(ParseError):
        parse_program("p :- q, X != Y.")


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as exc:
        parse_program("a :- b.\np :- q(.")
    assert (exc.value.line, exc.value.column) == (2, 8)


def test_abducible_head_rejected():
    with pytest.raises(ProgramError):
        parse_program("#abducible q/0.\nq :- p.")


def test_abducible_directive():
    p = parse_program("#abducible ta/1, in/0.\np :- ta(1), in.")
    assert p.abducibles == frozenset({("ta", 1), ("in", 0)})
    assert p.is_abducible(Atom("in"))
    assert not p.is_abducible(Atom("ta", ("1", "2")))


def test_domain_directive():
    assert parse_program("#domain 1..3.").domain == ("1", "2", "3")
    assert parse_program("#domain x, y.").domain == ("x", "y")


def test_parse_query():
    q = parse_query("pa(3,2,3)")
    assert q == Literal(Atom("pa", ("3", "2", "3")))
    assert q.positive
    b = parse_query("-b")
    assert b == Literal(Atom("b"), False)
    with pytest.raises(ParseError):
        parse_query("pa(X,2,3)")
    with pytest.raises(ParseError):
        parse_query("pa(1,")


def test_variables_parse_as_vars():
    lit = parse_literal("p(X, 1)", ground=False)
    assert lit.atom.args == (Var("X"), "1")
    assert not lit.is_ground()


def test_complement_is_involutive():
    lit = parse_literal("p(1)")
    assert -(-lit) == lit
    assert (-lit).positive is False
    assert str(-lit) == "-p(1)"


def test_is_consistent():
    a, b = parse_literal("a"), parse_literal("b")
    assert is_consistent({a, -b})
    assert not is_consistent({a, -a, b})


def test_instantiate_taol_rule():
    p = parse_program("#domain 1..2.\ntaol(X,X1,X2) :- Y != X, ta(Y,X1,X2).")
    out = instantiate_body_only_variables(p)
    assert [str(r) for r in out.rules] == [
        "taol(X,X1,X2) :- ta(1,X1,X2), 1 != X.",
        "taol(X,X1,X2) :- ta(2,X1,X2), 2 != X.",
    ]
    for r in out.rules:
        assert not r.body_only_variables()


def test_instantiate_identity_without_body_only_variables():
    p = parse_program("p(X) :- q(X), not r(X).")
    assert instantiate_body_only_variables(p).rules == p.rules


def test_instantiate_drops_false_constraint():
    p = parse_program("p :- q, 1 != 1.\nr :- 1 != 2.")
    out = instantiate_body_only_variables(p)
    assert [str(r) for r in out.rules] == ["r."]


def test_instantiate_needs_domain():
    rule = Rule(Atom("p"), (Literal(Atom("q", (Var("Y"),))),))
    with pytest.raises(ProgramError):
        instantiate_body_only_variables(Program((rule,)))


def test_ground_program_and_match_head():
    p = parse_program("#domain 1..2.\np(X) :- q(X), X != 2.")
    assert [str(r) for r in ground_program(p).rules] == ["p(1) :- q(1)."]
    head = p.rules[0].head
    assert match_head(head, Atom("p", ("2",))) == {Var("X"): "2"}
    assert match_head(head, Atom("q", ("2",))) is None
    assert match_head(Atom("t", (Var("X"), Var("X"))), Atom("t", ("1", "2"))) is None


def test_numeric_constants_sort_numerically():
    lits = [parse_literal(s) for s in ("p(10)", "p(9)", "p(2)")]
    assert sorted(lits, key=Literal.sort_key) == [lits[2], lits[1], lits[0]]


@given(ground_programs())
def test_print_parse_round_trip(pa):
    program, _ = pa
    assert parse_program(str(program)) == program


def test_round_trip_with_directives():
    text = "#abducible ta/1.\n#domain 1..3.\np(X) :- ta(X), not q(X), X != 2.\nq(1)."
    p = parse_program(text)
    assert parse_program(str(p)) == p
