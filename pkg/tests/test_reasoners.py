"""Built-in reasoners, the external adapter, and randomized property checks."""

from __future__ import annotations

import stat

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from certkit.chase import ChaseBudget
from certkit.model import Atom, Const, UCQ, Var, abox, plain_rule
from certkit.reasoners import (
    INCONCLUSIVE,
    PROPERTIES,
    ExternalReasonerError,
    atomic_subsumptions,
    builtin,
    datalog_subset,
    external,
    plain_datalog_subset,
    program_reasoner,
    property_spotcheck,
    schema_subset,
    trivial_reasoner,
)
from certkit.syntax import parse_abox, parse_query, parse_rules

from strategies import aboxes, datalog_programs

# ----------------------------------------------------------------------
# Rule-set fragments
# ----------------------------------------------------------------------

_MIXED = parse_rules(
    "CalcCo(?x) -> MathCo(?x)."
    "R(?x,?y) -> S(?y,?x)."
    "R(?x,?y) -> A(?x)."
    "MathCo(?y), takesCo(?x,?y) -> St(?x)."
    "MathSt(?x) -> exists ?y : takesCo(?x,?y)."
    "P(?x) -> A(?x) | B(?x)."
    "St(?x), Prof(?x) -> false."
)


def test_schema_subset_keeps_axiom_shapes():
    kept = schema_subset(_MIXED)
    # atomic inclusion, inverse role inclusion, and domain survive; the
    # join rule, existential, disjunction, and falsum do not.
    assert len(kept) == 3
    assert all(len(r.body) == 1 for r in kept)


def test_schema_subset_rejects_constants():
    rules = parse_rules("A(?x) -> B(?x). C(bob) -> D(bob).")
    assert schema_subset(rules) == parse_rules("A(?x) -> B(?x).")


def test_datalog_subset_keeps_falsum_drops_existential():
    kept = datalog_subset(_MIXED)
    assert len(kept) == 5
    assert any(r.is_falsum for r in kept)
    plain = plain_datalog_subset(_MIXED)
    assert len(plain) == 4
    assert not any(r.is_falsum for r in plain)


# ----------------------------------------------------------------------
# Frozen behavior on the shipped ontology
# ----------------------------------------------------------------------

# Expected (unsat-flag, answers) per reasoner per test ABox a1..a6, frozen
# from the reference chase: only rl and classify use the recursion-free
# datalog rules, and neither can exploit the existential axiom on a5.
_UNIVERSITY_TABLE = {
    "trivial": [(False, ()), (False, ()), (False, ()), (False, ()), (False, ()), (False, ())],
    "rdf": [(False, ()), (False, ()), (False, ()), (False, ()), (False, ()), (False, ())],
    "rdfs": [(False, ()), (False, ()), (False, ()), (False, ()), (False, ()), (False, ())],
    "rl": [
        (False, (("c",),)),
        (False, (("c",),)),
        (False, (("c",),)),
        (False, (("c",),)),
        (False, ()),
        (True, None),
    ],
    "classify": [
        (False, (("c",),)),
        (False, (("c",),)),
        (False, (("c",),)),
        (False, (("c",),)),
        (False, ()),
        (True, None),
    ],
}


@pytest.mark.parametrize("name", sorted(_UNIVERSITY_TABLE))
def test_builtins_on_university_tests(
    name, university_tbox, university_query, university_aboxes
):
    handle = builtin(name)
    for box, (want_unsat, want_answers) in zip(
        university_aboxes, _UNIVERSITY_TABLE[name]
    ):
        assert handle.check_unsat(university_tbox, box) == want_unsat
        if want_answers is not None:
            got = handle.answer(university_query, university_tbox, box)
            assert got == frozenset(want_answers)


def test_atomic_subsumptions_university(university_tbox):
    derived, undecided = atomic_subsumptions(university_tbox)
    pairs = sorted(
        (r.body[0].predicate, r.head[0].atoms[0].predicate) for r in derived
    )
    assert pairs == [("CalcCo", "MathCo"), ("MathSt", "St")]
    assert undecided == ()


def test_classify_beats_rl_on_hidden_subsumption(hidden_tbox):
    q = parse_query("#query Q/1.\nA(?x), B(?x) -> Q(?x).")
    box = parse_abox("B(c).")
    # The only route from B to A runs through an existential axiom, so the
    # datalog fragment alone cannot see it; classification recovers it as a
    # derived atomic inclusion.
    derived, _ = atomic_subsumptions(hidden_tbox)
    assert [(r.body[0].predicate, r.head[0].atoms[0].predicate) for r in derived] == [
        ("B", "A")
    ]
    assert builtin("rl").answer(q, hidden_tbox, box) == frozenset()
    assert builtin("classify").answer(q, hidden_tbox, box) == frozenset({("c",)})


# ----------------------------------------------------------------------
# Bounded evaluation (peval) on the recursive chain
# ----------------------------------------------------------------------


def test_peval_reaches_n_hops(chain_tbox, chain_query):
    box = parse_abox("R(a0,a1). R(a1,a2). R(a2,a3). A(a3).")
    want = {
        0: {("a3",)},
        1: {("a2",), ("a3",)},
        2: {("a1",), ("a2",), ("a3",)},
        3: {("a0",), ("a1",), ("a2",), ("a3",)},
        4: {("a0",), ("a1",), ("a2",), ("a3",)},
    }
    for rounds, expected in want.items():
        handle = builtin("peval", (str(rounds),))
        assert handle.answer(chain_query, chain_tbox, box) == frozenset(expected)
    assert builtin("rl").answer(chain_query, chain_tbox, box) == frozenset(want[3])


def test_peval_never_reports_unsat(university_tbox, university_aboxes):
    handle = builtin("peval", ("3",))
    assert handle.check_unsat(university_tbox, university_aboxes[5]) is False


@given(datalog_programs(max_rules=3), aboxes(max_facts=4), st.integers(0, 3))
@settings(max_examples=25)
def test_peval_is_monotone_in_rounds(program, box, rounds):
    q = UCQ("Q", 1, (plain_rule((Atom("A", (Var("x"),)),), Atom("Q", (Var("x"),))),))
    fewer = builtin("peval", (str(rounds),)).answer(q, program, box)
    more = builtin("peval", (str(rounds + 1),)).answer(q, program, box)
    full = builtin("rl").answer(q, program, box)
    assert fewer <= more <= full


# ----------------------------------------------------------------------
# Injective evaluation (rl_neq)
# ----------------------------------------------------------------------


def test_rl_neq_requires_distinct_bindings():
    q = parse_query("#query Q/1.\nR(?x,?y) -> Q(?x).")
    assert builtin("rl_neq").answer(q, (), parse_abox("R(a,b).")) == frozenset(
        {("a",)}
    )
    assert builtin("rl_neq").answer(q, (), parse_abox("R(c,c).")) == frozenset()
    assert builtin("rl").answer(q, (), parse_abox("R(c,c).")) == frozenset({("c",)})


def test_rl_neq_single_variable_matches_rl(chain_tbox, chain_query):
    box = parse_abox("R(a0,a1). A(a1).")
    assert builtin("rl_neq").answer(chain_query, chain_tbox, box) == builtin(
        "rl"
    ).answer(chain_query, chain_tbox, box)


# ----------------------------------------------------------------------
# Fixed-program reasoner
# ----------------------------------------------------------------------


@given(datalog_programs(max_rules=3), aboxes(max_facts=4))
@settings(max_examples=25)
def test_program_reasoner_matches_rl_on_datalog(program, box):
    q = UCQ(
        "Q",
        1,
        (
            plain_rule((Atom("A", (Var("x"),)),), Atom("Q", (Var("x"),))),
            plain_rule((Atom("R", (Var("x"), Var("y"))),), Atom("Q", (Var("x"),))),
        ),
    )
    fixed = program_reasoner(program)
    assert fixed.answer(q, (), box) == builtin("rl").answer(q, program, box)


def test_program_reasoner_ignores_runtime_tbox(chain_tbox, chain_query):
    fixed = program_reasoner(())
    box = parse_abox("R(a0,a1). A(a1).")
    assert fixed.answer(chain_query, chain_tbox, box) == frozenset({("a1",)})


# ----------------------------------------------------------------------
# Factory
# ----------------------------------------------------------------------


def test_builtin_factory_rejects_bad_inputs():
    with pytest.raises(ValueError, match="unknown"):
        builtin("sparkle")
    with pytest.raises(ValueError, match="numeric"):
        builtin("peval", ("many",))
    with pytest.raises(ValueError, match="no parameters"):
        builtin("rl", ("3",))


def test_builtin_program_reads_rule_file(tmp_path, chain_query):
    path = tmp_path / "prog.rules"
    path.write_text("R(?x,?y), A(?y) -> A(?x).\n")
    handle = builtin("program", (str(path),))
    assert handle.name == "program(prog.rules)"
    box = parse_abox("R(a0,a1). A(a1).")
    assert handle.answer(chain_query, (), box) == frozenset({("a0",), ("a1",)})


def test_trivial_reasoner_shape():
    handle = trivial_reasoner()
    assert handle.check_unsat((), abox([Atom("A", (Const("c"),))])) is False
    q = parse_query("#query Q/1.\nA(?x) -> Q(?x).")
    assert handle.answer(q, (), abox([Atom("A", (Const("c"),))])) == frozenset()


# ----------------------------------------------------------------------
# External adapter
# ----------------------------------------------------------------------


def _write_script(tmp_path, name, body):
    path = tmp_path / name
    path.write_text("#!/bin/sh\n" + body)
    path.chmod(path.stat().st_mode | stat.S_IXUSR)
    return str(path)


def test_external_wire_protocol(tmp_path, chain_query):
    # check: unsat iff the ABox mentions 'poison'; answer: echo constants of
    # A-atoms, one line each.
    script = _write_script(
        tmp_path,
        "toy.sh",
        'mode="$1"; shift\n'
        'while [ $# -gt 0 ]; do case "$1" in --abox) abox="$2";; esac; shift; done\n'
        'if [ "$mode" = check ]; then\n'
        '  if grep -q poison "$abox"; then echo t; else echo f; fi\n'
        "else\n"
        "  sed -n 's/^A(\\(.*\\))\\.$/\\1/p' \"$abox\"\n"
        "fi\n",
    )
    handle = external(script)
    assert handle.name == f"external({script})"
    assert handle.check_unsat((), parse_abox("A(poison).")) is True
    assert handle.check_unsat((), parse_abox("A(c).")) is False
    assert handle.answer(chain_query, (), parse_abox("A(c). B(d).")) == frozenset(
        {("c",)}
    )


def test_external_rejects_protocol_violations(tmp_path, chain_query):
    box = parse_abox("A(c).")
    chatty = external(_write_script(tmp_path, "chatty.sh", "echo maybe\n"))
    with pytest.raises(ExternalReasonerError, match="expected t or f"):
        chatty.check_unsat((), box)
    failing = external(_write_script(tmp_path, "fail.sh", "echo broken >&2; exit 3\n"))
    with pytest.raises(ExternalReasonerError, match="exited with 3"):
        failing.check_unsat((), box)
    wide = external(_write_script(tmp_path, "wide.sh", 'if [ "$1" = answer ]; then echo a,b; else echo f; fi\n'))
    with pytest.raises(ExternalReasonerError, match="fields"):
        wide.answer(chain_query, (), box)


def test_external_timeout_is_inconclusive(tmp_path, chain_query):
    slow = external(_write_script(tmp_path, "slow.sh", "sleep 5\n"), timeout=0.2)
    assert slow.check_unsat((), parse_abox("A(c).")) is INCONCLUSIVE
    assert slow.answer(chain_query, (), parse_abox("A(c).")) is INCONCLUSIVE


def test_external_boolean_answers(tmp_path):
    script = _write_script(
        tmp_path, "bool.sh", 'if [ "$1" = answer ]; then echo "()"; else echo f; fi\n'
    )
    q = UCQ("Q", 0, ())
    assert external(script).answer(q, (), parse_abox("A(c).")) == frozenset({()})


# ----------------------------------------------------------------------
# Randomized property checks
# ----------------------------------------------------------------------


def test_spotcheck_clean_on_sound_reasoner(university_tbox, university_query):
    report = property_spotcheck(
        builtin("rl"), university_query, university_tbox, trials=60, seed=0
    )
    assert report.ok
    assert report.checked == PROPERTIES
    assert report.trials == 60
    assert report.violated() == ()


def test_spotcheck_finds_strong_faithfulness_violation():
    q = parse_query("#query Q/1.\nR(?x,?y) -> Q(?x).")
    report = property_spotcheck(builtin("rl_neq"), q, (), trials=400, seed=0)
    assert "strongly-faithful" in report.violated()
    cex = [c for c in report.counterexamples if c.property == "strongly-faithful"]
    assert cex and cex[0].abox  # serialized witness ABox comes along


def test_spotcheck_is_deterministic(university_tbox, university_query):
    one = property_spotcheck(
        builtin("rl_neq"), university_query, university_tbox, trials=50, seed=7
    )
    two = property_spotcheck(
        builtin("rl_neq"), university_query, university_tbox, trials=50, seed=7
    )
    assert one == two


def test_spotcheck_empty_signature_is_vacuous():
    report = property_spotcheck(builtin("rl"), UCQ("Q", 0, ()), (), trials=50)
    assert report.trials == 0
    assert report.ok
