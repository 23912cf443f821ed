"""Suite execution, completeness verdicts, and counterexample search.

A suite run scores every test against a reasoner handle, re-verifies any
failure against the reference chase, and aggregates a verdict:

- GuaranteedComplete: every test passed (for an exhaustive suite this
  certifies completeness for the suite's query and reasoner class);
- NotComplete: a conclusive test failed, with a chase-confirmed witness;
- NotGuaranteed: only auxiliary tests failed, which hints at but does not
  prove incompleteness for the original query;
- Inconclusive: budgets or timeouts prevented a verdict.

Auxiliary tests are the ones whose query predicate is the reserved Qprime
introduced by datalog instantiation; every other failure is conclusive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .chase import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    ChaseBudget,
    certain_answers,
    is_unsatisfiable,
    with_equality_axioms,
)
from .model import (
    ABox,
    Atom,
    Const,
    QPRIME,
    Rule,
    Substitution,
    TestSuite,
    UCQ,
    all_constants,
    head_atom,
)
from .reasoners import INCONCLUSIVE, ReasonerHandle
from .syntax import serialize_abox, serialize_rule
from .unfold import unfold_levels

# ----------------------------------------------------------------------
# Verdicts and outcomes
# ----------------------------------------------------------------------

GUARANTEED_COMPLETE = "GuaranteedComplete"
NOT_COMPLETE = "NotComplete"
NOT_GUARANTEED = "NotGuaranteed"
INCONCLUSIVE_VERDICT = "Inconclusive"

EXIT_CODES = {
    GUARANTEED_COMPLETE: 0,
    NOT_COMPLETE: 1,
    NOT_GUARANTEED: 2,
    INCONCLUSIVE_VERDICT: 3,
}

PASS = "pass"
FAIL = "fail"
UNDECIDED = "inconclusive"


def _tuple_text(tup: Optional[Tuple[str, ...]]) -> str:
    if tup is None:
        return ""
    if not tup:
        return "()"
    return ",".join(tup)


def _one_line(box: ABox) -> str:
    return serialize_abox(box).replace("\n", " ").strip()


@dataclass(frozen=True)
class TestOutcome:
    """Score of a single test, in manifest order."""

    test_id: str
    kind: str  # "unsat" or "query"
    outcome: str  # pass / fail / inconclusive
    witness_tuple: Optional[Tuple[str, ...]]
    notes: str
    box: ABox
    query: Optional[UCQ] = None


@dataclass(frozen=True)
class SuiteReport:
    """All test outcomes plus the aggregated verdict and witness."""

    reasoner: str
    verdict: str
    tests: Tuple[TestOutcome, ...]
    cert_basis: str
    conclusion: str
    witness_box: Optional[ABox] = None
    witness_tuple: Optional[Tuple[str, ...]] = None
    witness_kind: Optional[str] = None  # "missing-answer" or "missed-unsat"

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def to_tsv(self) -> str:
        lines = ["test-id\tkind\toutcome\twitness-tuple\tnotes"]
        for t in self.tests:
            notes = t.notes.replace("\t", " ").replace("\n", " ")
            lines.append(
                f"{t.test_id}\t{t.kind}\t{t.outcome}\t{_tuple_text(t.witness_tuple)}\t{notes}"
            )
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = [f"reasoner: {self.reasoner}", f"cert basis: {self.cert_basis}"]
        for t in self.tests:
            mark = {PASS: "ok", FAIL: "FAIL", UNDECIDED: "?"}[t.outcome]
            suffix = f"  [{_tuple_text(t.witness_tuple)}]" if t.witness_tuple else ""
            lines.append(f"  {t.test_id:12s} {mark:4s} {t.notes}{suffix}")
        lines.append(f"verdict: {self.verdict}")
        if self.witness_box is not None:
            what = (
                f"missing answer {_tuple_text(self.witness_tuple)}"
                if self.witness_kind == "missing-answer"
                else "missed unsatisfiability"
            )
            lines.append(f"witness: {_one_line(self.witness_box)} ({what})")
        lines.append(self.conclusion)
        return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# Suite execution
# ----------------------------------------------------------------------


def _run_tests(
    handle: ReasonerHandle,
    tbox_rules: Sequence[Rule],
    suite: TestSuite,
    budget: ChaseBudget,
    auxiliary_failures_conclusive: bool,
) -> Tuple[List[TestOutcome], dict]:
    tbox_rules = tuple(tbox_rules)
    outcomes: List[TestOutcome] = []
    state = {
        "rank": 0,  # 0 complete, 1 inconclusive, 2 auxiliary fail, 3 conclusive fail
        "witness": None,  # (box, tuple|None, kind)
    }

    def record_failure(conclusive: bool, box: ABox, tup: Optional[Tuple[str, ...]], kind: str) -> None:
        rank = 3 if conclusive else 2
        if rank > state["rank"]:
            state["rank"] = rank
        if conclusive and state["witness"] is None:
            state["witness"] = (box, tup, kind)

    def record_inconclusive() -> None:
        if state["rank"] < 1:
            state["rank"] = 1

    def basis_unsat(box: ABox) -> bool:
        program = with_equality_axioms(tbox_rules, box)
        return is_unsatisfiable(program, box, budget)

    def basis_answers(query: UCQ, box: ABox) -> FrozenSet[Tuple[str, ...]]:
        program = with_equality_axioms(tbox_rules, box)
        return certain_answers(query, program, box, budget)

    for i, box in enumerate(suite.unsat_tests):
        test_id = f"unsat_{i:03d}"
        check = handle.check_unsat(tbox_rules, box)
        if check is INCONCLUSIVE:
            record_inconclusive()
            outcomes.append(
                TestOutcome(test_id, "unsat", UNDECIDED, None, "reasoner inconclusive", box)
            )
            continue
        if check:
            outcomes.append(
                TestOutcome(test_id, "unsat", PASS, None, "unsatisfiability reported", box)
            )
            continue
        try:
            confirmed = basis_unsat(box)
        except BudgetExceeded as e:
            record_inconclusive()
            outcomes.append(
                TestOutcome(test_id, "unsat", UNDECIDED, None, f"reference chase: {e}", box)
            )
            continue
        if not confirmed:
            record_inconclusive()
            outcomes.append(
                TestOutcome(
                    test_id,
                    "unsat",
                    UNDECIDED,
                    None,
                    "suite problem: ABox is satisfiable under the cert basis",
                    box,
                )
            )
            continue
        record_failure(True, box, None, "missed-unsat")
        outcomes.append(
            TestOutcome(
                test_id,
                "unsat",
                FAIL,
                None,
                "missed unsatisfiability (confirmed by the reference chase)",
                box,
            )
        )

    for i, (box, query) in enumerate(suite.query_tests):
        test_id = f"test_{i:03d}"
        conclusive = (
            auxiliary_failures_conclusive
            or suite.simple_for is not None
            or query.predicate != QPRIME
        )
        check = handle.check_unsat(tbox_rules, box)
        if check is INCONCLUSIVE:
            record_inconclusive()
            outcomes.append(
                TestOutcome(test_id, "query", UNDECIDED, None, "reasoner inconclusive", box, query)
            )
            continue
        if check:
            outcomes.append(
                TestOutcome(
                    test_id, "query", PASS, None, "unsatisfiability reported", box, query
                )
            )
            continue
        try:
            if basis_unsat(box):
                # Any reasoner must report such an input unsatisfiable, so the
                # failure is conclusive no matter which query the test carries.
                record_failure(True, box, None, "missed-unsat")
                outcomes.append(
                    TestOutcome(
                        test_id,
                        "query",
                        FAIL,
                        None,
                        "missed unsatisfiability (confirmed by the reference chase)",
                        box,
                        query,
                    )
                )
                continue
            expected = basis_answers(query, box)
        except BudgetExceeded as e:
            record_inconclusive()
            outcomes.append(
                TestOutcome(test_id, "query", UNDECIDED, None, f"reference chase: {e}", box, query)
            )
            continue
        answers = handle.answer(query, tbox_rules, box)
        if answers is INCONCLUSIVE:
            record_inconclusive()
            outcomes.append(
                TestOutcome(test_id, "query", UNDECIDED, None, "reasoner inconclusive", box, query)
            )
            continue
        missing = sorted(expected - answers)
        if not missing:
            outcomes.append(
                TestOutcome(
                    test_id, "query", PASS, None, "all certain answers returned", box, query
                )
            )
            continue
        witness = missing[0]
        record_failure(conclusive, box, witness, "missing-answer")
        role = "" if conclusive else " (auxiliary test)"
        outcomes.append(
            TestOutcome(
                test_id,
                "query",
                FAIL,
                witness,
                f"missing {len(missing)} certain answer(s){role}",
                box,
                query,
            )
        )

    return outcomes, state


def _verdict_of(rank: int) -> str:
    return (
        GUARANTEED_COMPLETE,
        INCONCLUSIVE_VERDICT,
        NOT_GUARANTEED,
        NOT_COMPLETE,
    )[rank]


def run_suite(
    handle: ReasonerHandle,
    tbox_rules: Sequence[Rule],
    suite: TestSuite,
    budget: ChaseBudget = DEFAULT_BUDGET,
    cert_basis: str = "tbox rules",
) -> SuiteReport:
    """Score every test and aggregate a completeness verdict.

    Certain answers for each test are computed with the reference chase over
    tbox_rules (which may equally be a flattened rewriting; cert_basis is
    recorded in the report).  A conclusive failure always carries a
    chase-confirmed witness: either a certain answer the reasoner missed or
    an unsatisfiable ABox it accepted.
    """
    outcomes, state = _run_tests(handle, tbox_rules, suite, budget, False)
    verdict = _verdict_of(state["rank"])
    conclusions = {
        GUARANTEED_COMPLETE: (
            "all tests passed; an exhaustive suite certifies completeness for its query"
        ),
        NOT_COMPLETE: "a conclusive test failed: the witness ABox proves incompleteness",
        NOT_GUARANTEED: (
            "only auxiliary tests failed; incompleteness for the original query "
            "is possible but not proven"
        ),
        INCONCLUSIVE_VERDICT: "some tests were inconclusive; no verdict",
    }
    witness = state["witness"] or (None, None, None)
    return SuiteReport(
        reasoner=handle.name,
        verdict=verdict,
        tests=tuple(outcomes),
        cert_basis=cert_basis,
        conclusion=conclusions[verdict],
        witness_box=witness[0],
        witness_tuple=witness[1],
        witness_kind=witness[2],
    )


def ground_verdict(
    handle: ReasonerHandle,
    tbox_rules: Sequence[Rule],
    suite: TestSuite,
    budget: ChaseBudget = DEFAULT_BUDGET,
    cert_basis: str = "tbox rules",
) -> SuiteReport:
    """Like run_suite for ground-instantiation suites, where every failure is
    conclusive: a pass means complete for all ground queries over the rules,
    a failure means not complete for some ground query."""
    outcomes, state = _run_tests(handle, tbox_rules, suite, budget, True)
    verdict = _verdict_of(state["rank"])
    conclusions = {
        GUARANTEED_COMPLETE: "all tests passed: complete for every ground query",
        NOT_COMPLETE: "a test failed: not complete for some ground query",
        NOT_GUARANTEED: "a test failed: not complete for some ground query",
        INCONCLUSIVE_VERDICT: "some tests were inconclusive; no verdict",
    }
    witness = state["witness"] or (None, None, None)
    return SuiteReport(
        reasoner=handle.name,
        verdict=verdict,
        tests=tuple(outcomes),
        cert_basis=cert_basis,
        conclusion=conclusions[verdict],
        witness_box=witness[0],
        witness_tuple=witness[1],
        witness_kind=witness[2],
    )


# ----------------------------------------------------------------------
# Fair unfolding-based incompleteness search
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class CounterexampleWitness:
    """A chase-confirmed incompleteness instance found by the search."""

    depth: int
    rule: Rule
    box: ABox
    missing_tuple: Tuple[str, ...]

    def describe(self) -> str:
        return (
            f"depth {self.depth}: on {_one_line(self.box)} the answer "
            f"{_tuple_text(self.missing_tuple)} is certain but was not returned "
            f"(from {serialize_rule(self.rule)})"
        )


def _injective_body_instance(
    rule: Rule, taken: Set[str]
) -> Tuple[ABox, Substitution]:
    """Freeze the rule body with globally fresh, pairwise distinct constants."""
    order: List[str] = []
    for atom in sorted(rule.body):
        for term in atom.args:
            if term.is_var and term.name not in order:
                order.append(term.name)
    mapping: Dict[str, Const] = {}
    i = 0
    for name in order:
        while f"_f{i}" in taken:
            i += 1
        mapping[name] = Const(f"_f{i}")
        i += 1
    atoms = [
        Atom(a.predicate, tuple(mapping[t.name] if t.is_var else t for t in a.args))
        for a in rule.body
    ]
    return ABox(frozenset(atoms)), mapping


def incompleteness_search(
    handle: ReasonerHandle,
    data_rules: Sequence[Rule],
    query: UCQ,
    tbox_rules: Sequence[Rule],
    max_depth: int,
    budget: ChaseBudget = DEFAULT_BUDGET,
) -> Optional[CounterexampleWitness]:
    """Hunt for an incompleteness witness by fair unfolding.

    Unfolds the datalog rules into the query breadth-first up to max_depth;
    each unfolded conjunctive query is instantiated injectively and the
    reasoner's answers are compared against the expected head tuple.  The
    first chase-confirmed miss is returned; None means no conclusion (the
    reasoner may still be incomplete at greater depths).
    """
    tbox_rules = tuple(tbox_rules)
    taken = set(all_constants(tbox_rules, tuple(query.rules)))
    for depth, rule in unfold_levels(tuple(data_rules), tuple(query.rules), max_depth):
        box, mapping = _injective_body_instance(rule, taken | set(rule.constants()))
        head = head_atom(rule)
        expected = tuple(
            mapping[t.name].name if t.is_var else t.name for t in head.args
        )
        program = with_equality_axioms(tbox_rules, box)
        try:
            if is_unsatisfiable(program, box, budget):
                continue
            if expected not in certain_answers(query, program, box, budget):
                continue
        except BudgetExceeded:
            continue
        check = handle.check_unsat(tbox_rules, box)
        if check is INCONCLUSIVE or check:
            continue
        answers = handle.answer(query, tbox_rules, box)
        if answers is INCONCLUSIVE:
            continue
        if expected not in answers:
            return CounterexampleWitness(depth, rule, box, expected)
    return None
