"""Parsing, serialization round-trips, and DL-to-rules translation."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from certkit.model import (
    Atom,
    Const,
    Disjunct,
    Rewriting,
    Rule,
    UCQ,
    Var,
    abox,
    falsum_rule,
    plain_rule,
)
from certkit.syntax import (
    SyntaxProblem,
    equality_axioms,
    flatten_translation,
    parse_abox,
    parse_dl,
    parse_query,
    parse_rewriting,
    parse_rules,
    serialize_abox,
    serialize_query,
    serialize_rewriting,
    serialize_rule,
    serialize_rules,
    translate_dl,
)

from strategies import aboxes, constraint_programs, falsum_rules, plain_rules

# ----------------------------------------------------------------------
# Rules: parsing features
# ----------------------------------------------------------------------


def test_parse_plain_rule():
    (rule,) = parse_rules("A(?x), R(?x,?y) -> B(?y).")
    assert rule == plain_rule(
        (Atom("A", (Var("x"),)), Atom("R", (Var("x"), Var("y")))),
        Atom("B", (Var("y"),)),
    )


def test_parse_falsum_rule():
    (rule,) = parse_rules("St(?x), Prof(?x) -> false.")
    assert rule.is_falsum
    assert {a.predicate for a in rule.body} == {"St", "Prof"}


def test_parse_existential_head():
    (rule,) = parse_rules("MathSt(?x) -> exists ?y : takesCo(?x,?y), MathCo(?y).")
    (d,) = rule.head
    assert d.exists == frozenset({"y"})
    assert {a.predicate for a in d.atoms} == {"takesCo", "MathCo"}


def test_parse_disjunctive_head():
    (rule,) = parse_rules("P(?x) -> A(?x) | B(?x).")
    assert len(rule.head) == 2
    assert {d.atoms[0].predicate for d in rule.head} == {"A", "B"}


def test_parse_equality_sugar():
    (rule,) = parse_rules("R(?x,?y), ?x = ?y -> P(?x).")
    assert Atom("eq", (Var("x"), Var("y"))) in rule.body
    (neq_rule,) = parse_rules("R(?x,?y), ?x != ?y -> P(?x).")
    assert Atom("neq", (Var("x"), Var("y"))) in neq_rule.body


def test_parse_quoted_constant():
    (rule,) = parse_rules("A('Strange Name') -> B('Strange Name').")
    assert rule.body[0].args[0] == Const("Strange Name")


def test_parse_comments_and_blank_lines():
    rules = parse_rules("# leading comment\n\nA(?x) -> B(?x).  # trailing\n")
    assert len(rules) == 1


def test_parse_rejects_arity_clash():
    with pytest.raises(SyntaxProblem, match="arity"):
        parse_rules("A(?x) -> B(?x). A(?x,?y) -> B(?x).")


def test_parse_rejects_fresh_prefix_constant():
    with pytest.raises(SyntaxProblem, match="reserved"):
        parse_rules("A(_f0) -> B(_f0).")
    (rule,) = parse_rules("A(_f0) -> B(_f0).", allow_fresh=True)
    assert rule.body[0].args[0] == Const("_f0")


def test_parse_rejects_garbage():
    with pytest.raises(SyntaxProblem):
        parse_rules("A(?x -> B(?x).")
    with pytest.raises(SyntaxProblem):
        parse_rules("A(?x) -> B(?x)")  # missing dot
    with pytest.raises(SyntaxProblem):
        parse_rules("@bad")


def test_syntax_problem_carries_position():
    with pytest.raises(SyntaxProblem, match=r"line 2"):
        parse_rules("A(?x) -> B(?x).\nA(?x ->")


# ----------------------------------------------------------------------
# ABoxes and queries
# ----------------------------------------------------------------------


def test_parse_abox():
    box = parse_abox("takesCo(c,d). MathCo(d).\n")
    assert len(box) == 2
    assert box.constants() == frozenset({"c", "d"})


def test_parse_abox_rejects_variables():
    with pytest.raises(SyntaxProblem, match="ground"):
        parse_abox("A(?x).")


def test_parse_abox_rejects_directives():
    with pytest.raises(SyntaxProblem, match="directive"):
        parse_abox("#data\nA(c).")


def test_parse_query():
    q = parse_query("#query Q/1.\nSt(?x), takesCo(?x,?y), MathCo(?y) -> Q(?x).\n")
    assert q.predicate == "Q" and q.arity == 1
    assert len(q.rules) == 1


def test_parse_query_requires_directive():
    with pytest.raises(SyntaxProblem, match="#query"):
        parse_query("A(?x) -> Q(?x).")


def test_parse_query_checks_head():
    with pytest.raises(SyntaxProblem, match="Q/1"):
        parse_query("#query Q/1.\nA(?x) -> P(?x).")
    with pytest.raises(SyntaxProblem, match="arity"):
        parse_query("#query Q/1.\nA(?x), B(?y) -> Q(?x,?y).")


def test_parse_query_allows_empty_shell():
    q = parse_query("#query Qprime/0.\n")
    assert q.rules == ()
    assert q.arity == 0


# ----------------------------------------------------------------------
# Rewritings
# ----------------------------------------------------------------------


def test_parse_rewriting_sections():
    text = (
        "#data\nR(?x,?y), A(?y) -> A(?x).\n"
        "#bottom\nA(?x), D(?x) -> false.\n"
        "#queryrules\nA(?x), B(?x) -> Q(?x).\n"
    )
    rw = parse_rewriting(text)
    assert len(rw.data_rules) == 1
    assert len(rw.bottom_rules) == 1
    assert rw.query.predicate == "Q"


def test_parse_rewriting_rejects_loose_rules():
    with pytest.raises(SyntaxProblem, match="start with"):
        parse_rewriting("A(?x) -> B(?x).")


def test_parse_rewriting_rejects_bad_bottom():
    with pytest.raises(SyntaxProblem, match="false"):
        parse_rewriting("#bottom\nA(?x) -> B(?x).")


def test_parse_rewriting_rejects_mixed_query_heads():
    with pytest.raises(SyntaxProblem, match="several"):
        parse_rewriting("#queryrules\nA(?x) -> Q(?x).\nB(?x) -> P(?x).")


def test_parse_rewriting_empty_query_section():
    rw = parse_rewriting("#data\nR(?x,?y), A(?y) -> A(?x).\n#bottom\n#queryrules\n")
    assert rw.query.rules == ()


# ----------------------------------------------------------------------
# Serialization round-trips
# ----------------------------------------------------------------------


@given(constraint_programs(max_rules=5))
def test_rules_round_trip(rules):
    assert parse_rules(serialize_rules(rules)) == tuple(rules)


@given(aboxes())
def test_abox_round_trip(box):
    assert parse_abox(serialize_abox(box)) == box


@given(plain_rules(max_body=3))
def test_single_rule_round_trip(rule):
    (back,) = parse_rules(serialize_rule(rule) + "\n")
    assert back == rule


@given(st.lists(falsum_rules(), min_size=0, max_size=3))
def test_rewriting_round_trip(bottoms):
    q = UCQ("Q", 1, (plain_rule((Atom("A", (Var("x"),)),), Atom("Q", (Var("x"),))),))
    rw = Rewriting((), tuple(bottoms), q)
    assert parse_rewriting(serialize_rewriting(rw)) == rw


def test_query_round_trip():
    q = parse_query("#query Q/1.\nR(?x,?y), CalcCo(?y) -> Q(?x).\nMathSt(?x) -> Q(?x).\n")
    assert parse_query(serialize_query(q)) == q


def test_serialize_quotes_odd_names():
    box = abox([Atom("A", (Const("Strange Name"),))])
    text = serialize_abox(box)
    assert "'Strange Name'" in text
    assert parse_abox(text) == box


def test_serialize_existential_and_disjunction():
    rule = Rule(
        (Atom("B", (Var("x"),)),),
        (
            Disjunct(frozenset({"y"}), (Atom("R", (Var("x"), Var("y"))),)),
            Disjunct(frozenset(), (Atom("C", (Var("x"),)),)),
        ),
    )
    text = serialize_rule(rule)
    assert "exists ?y :" in text and "|" in text
    assert parse_rules(text) == (rule,)


def test_equality_atoms_round_trip():
    rule = falsum_rule((Atom("eq", (Var("x"), Var("y"))), Atom("R", (Var("x"), Var("y")))))
    text = serialize_rule(rule)
    assert "eq(?x,?y)" in text
    assert parse_rules(text) == (rule,)


# ----------------------------------------------------------------------
# DL parsing and translation
# ----------------------------------------------------------------------


def _rules_for(dl_text: str):
    return flatten_translation(translate_dl(parse_dl(dl_text)))


def test_dl_atomic_inclusion():
    assert _rules_for("CalcCo [= MathCo.") == parse_rules("CalcCo(?x) -> MathCo(?x).")


def test_dl_exists_on_left():
    got = _rules_for("exists takesCo. MathCo [= St.")
    assert got == parse_rules("takesCo(?x,?y), MathCo(?y) -> St(?x).")


def test_dl_exists_on_right():
    got = _rules_for("MathSt [= exists takesCo. MathCo.")
    (rule,) = got
    (d,) = rule.head
    assert d.exists == frozenset({"y"})
    assert {a.predicate for a in d.atoms} == {"takesCo", "MathCo"}


def test_dl_conjunction_to_falsum():
    got = _rules_for("St and Prof [= bottom.")
    assert got == parse_rules("St(?x), Prof(?x) -> false.")


def test_dl_disjunctive_head():
    (rule,) = _rules_for("P [= A or B.")
    assert len(rule.head) == 2


def test_dl_forall_on_right():
    got = _rules_for("A [= forall R. B.")
    assert got == parse_rules("A(?x), R(?x,?y) -> B(?y).")


def test_dl_inverse_role():
    got = _rules_for("exists inv(R). A [= B.")
    assert got == parse_rules("R(?y,?x), A(?y) -> B(?x).")


def test_dl_role_inclusion_detected_from_usage():
    got = _rules_for("R [= S. exists R. top [= A.")
    assert parse_rules("R(?x,?y) -> S(?x,?y).")[0] in got


def test_dl_transitivity_and_composition():
    assert _rules_for("trans(R).") == parse_rules("R(?x,?y), R(?y,?z) -> R(?x,?z).")
    assert _rules_for("R o S [= T.") == parse_rules("R(?x,?y), S(?y,?z) -> T(?x,?z).")


def test_dl_self_restriction():
    got = _rules_for("self(R) [= A.")
    assert got == parse_rules("R(?x,?x) -> A(?x).")


def test_dl_nominal_uses_equality():
    (rule,) = _rules_for("A [= {a}.")
    assert rule.head[0].atoms[0] == Atom("eq", (Var("x"), Const("a")))


def test_dl_vacuous_and_tautological_axioms():
    assert _rules_for("bottom [= A.") == ()
    assert _rules_for("A [= top.") == ()


def test_dl_bottom_in_every_branch_collapses_to_falsum():
    (rule,) = _rules_for("A [= bottom or bottom.")
    assert rule.is_falsum


def test_dl_rejects_or_on_left():
    with pytest.raises(SyntaxProblem, match="or"):
        _rules_for("A or B [= C.")


def test_dl_rejects_concept_role_clash():
    with pytest.raises(SyntaxProblem, match="both"):
        parse_dl("exists R. A [= B. A [= C. exists A. top [= D.")


def test_dl_top_only_left_is_rejected():
    with pytest.raises(SyntaxProblem, match="unsafe"):
        _rules_for("top [= A.")


def test_translate_dl_keeps_axiom_grouping():
    groups = translate_dl(parse_dl("CalcCo [= MathCo. St and Prof [= bottom."))
    assert [g.index for g in groups] == [0, 1]
    assert len(groups[0].rules) == 1
    assert groups[1].rules[0].is_falsum


# ----------------------------------------------------------------------
# Equality axioms
# ----------------------------------------------------------------------


def test_equality_axioms_shape():
    rules = equality_axioms({("A", 1), ("R", 2)})
    falsums = [r for r in rules if r.is_falsum]
    assert len(falsums) == 1  # eq/neq clash
    # one replacement rule per argument position, plus symmetry + transitivity
    assert len(rules) == 1 + 2 + 3


def test_equality_axioms_skip_reserved_predicates():
    rules = equality_axioms({("eq", 2), ("neq", 2)})
    assert len(rules) == 3
