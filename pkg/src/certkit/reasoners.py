"""Pluggable query reasoners and randomized property checks.

A reasoner handle bundles two callables: an unsatisfiability check and a
query-answering function.  Built-in handles cover the usual weak reasoning
strategies (ignore the TBox, use only its datalog part, classify first, and
so on); the external adapter wraps any command-line tool speaking the wire
protocol documented in the README.  Handles are stateless between calls.
"""

from __future__ import annotations

import functools
import random
import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import (
    Callable,
    Dict,
    FrozenSet,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from .chase import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    ChaseBudget,
    body_matches,
    certain_answers,
    entails_rule,
    is_unsatisfiable,
    saturate,
    with_equality_axioms,
)
from .model import (
    ABox,
    Atom,
    Const,
    EQ,
    NEQ,
    Rule,
    UCQ,
    Var,
    all_constants,
    head_atom,
    is_plain,
    plain_rule,
)
from .syntax import parse_rules, serialize_abox, serialize_query, serialize_rules

# ----------------------------------------------------------------------
# Results and handles
# ----------------------------------------------------------------------


class _Inconclusive:
    """Sentinel for answers lost to budgets or timeouts."""

    _instance: Optional["_Inconclusive"] = None

    def __new__(cls) -> "_Inconclusive":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inconclusive"


INCONCLUSIVE = _Inconclusive()

CheckResult = Union[bool, _Inconclusive]
AnswerResult = Union[FrozenSet[Tuple[str, ...]], _Inconclusive]

# Informational capability tags; no behavior depends on them.
SOUND = "sound"
MONOTONIC = "monotonic"
WEAKLY_FAITHFUL = "weakly-faithful"
STRONGLY_FAITHFUL = "strongly-faithful"
FO_REPRODUCIBLE = "first-order-reproducible"
COMPACT = "compact"


@dataclass(frozen=True)
class ReasonerHandle:
    """A named reasoner: an unsat check plus a query-answering function.

    check_unsat(tbox_rules, box) returns True (input reported inconsistent),
    False, or INCONCLUSIVE.  answer(query, tbox_rules, box) returns a frozen
    set of constant tuples or INCONCLUSIVE.  When check_unsat returns True
    the answer set carries no information.  claims lists the properties the
    reasoner is believed to have; property_spotcheck can probe them.
    """

    name: str
    claims: FrozenSet[str]
    check_unsat: Callable[[Sequence[Rule], ABox], CheckResult]
    answer: Callable[[UCQ, Sequence[Rule], ABox], AnswerResult]


# ----------------------------------------------------------------------
# Rule-set fragments
# ----------------------------------------------------------------------


def _no_constants(*atoms: Atom) -> bool:
    return all(t.is_var for a in atoms for t in a.args)


def _schema_shape(rule: Rule) -> bool:
    """Concept/role inclusion, inverse inclusion, domain, or range shape."""
    if not is_plain(rule) or len(rule.body) != 1:
        return False
    body = rule.body[0]
    head = head_atom(rule)
    if not _no_constants(body, head):
        return False
    if body.arity == 1 and head.arity == 1:
        return body.args == head.args
    if body.arity == 2:
        x, y = body.args
        if x == y:
            return False
        if head.arity == 2:
            return head.args in ((x, y), (y, x))
        if head.arity == 1:
            return head.args[0] in (x, y)
    return False


def schema_subset(rules: Sequence[Rule]) -> Tuple[Rule, ...]:
    """The rules expressible as simple schema axioms: atomic concept and
    role inclusions (including inverses), domains, and ranges."""
    return tuple(r for r in rules if _schema_shape(r))


def datalog_subset(rules: Sequence[Rule]) -> Tuple[Rule, ...]:
    """The rules with a single non-existential head disjunct or a falsum
    head: no value invention and no reasoning by cases."""
    return tuple(
        r
        for r in rules
        if r.is_falsum or (len(r.head) == 1 and not r.head[0].exists)
    )


def plain_datalog_subset(rules: Sequence[Rule]) -> Tuple[Rule, ...]:
    """Like datalog_subset but without the falsum-headed rules."""
    return tuple(r for r in datalog_subset(rules) if not r.is_falsum)


# ----------------------------------------------------------------------
# Built-in reasoners
# ----------------------------------------------------------------------


def trivial_reasoner() -> ReasonerHandle:
    """Always satisfiable, always the empty answer set."""
    claims = frozenset({SOUND, MONOTONIC, WEAKLY_FAITHFUL, STRONGLY_FAITHFUL, COMPACT})
    return ReasonerHandle(
        "trivial",
        claims,
        lambda tbox_rules, box: False,
        lambda query, tbox_rules, box: frozenset(),
    )


def _fragment_reasoner(
    name: str,
    claims: FrozenSet[str],
    fragment: Callable[[Sequence[Rule]], Tuple[Rule, ...]],
    detect_unsat: bool,
    budget: ChaseBudget,
) -> ReasonerHandle:
    """Certain answers with respect to a syntactic fragment of the TBox."""

    def check_unsat(tbox_rules: Sequence[Rule], box: ABox) -> CheckResult:
        if not detect_unsat:
            return False
        program = with_equality_axioms(fragment(tbox_rules), box)
        try:
            return is_unsatisfiable(program, box, budget)
        except BudgetExceeded:
            return INCONCLUSIVE

    def answer(query: UCQ, tbox_rules: Sequence[Rule], box: ABox) -> AnswerResult:
        program = with_equality_axioms(fragment(tbox_rules), box)
        try:
            return certain_answers(query, program, box, budget)
        except BudgetExceeded:
            return INCONCLUSIVE

    return ReasonerHandle(name, claims, check_unsat, answer)


_FULL_CLAIMS = frozenset(
    {SOUND, MONOTONIC, WEAKLY_FAITHFUL, STRONGLY_FAITHFUL, FO_REPRODUCIBLE, COMPACT}
)


def rdf_reasoner(budget: ChaseBudget = DEFAULT_BUDGET) -> ReasonerHandle:
    """Ignores the TBox entirely; evaluates the query over the data alone."""
    return _fragment_reasoner("rdf", _FULL_CLAIMS, lambda rules: (), False, budget)


def rdfs_reasoner(budget: ChaseBudget = DEFAULT_BUDGET) -> ReasonerHandle:
    """Uses only the schema-shaped rules; never reports inconsistency."""
    return _fragment_reasoner("rdfs", _FULL_CLAIMS, schema_subset, False, budget)


def rl_reasoner(budget: ChaseBudget = DEFAULT_BUDGET) -> ReasonerHandle:
    """Uses the datalog rules, including falsum heads, so it can detect
    (some) inconsistencies; ignores existential and disjunctive rules."""
    return _fragment_reasoner("rl", _FULL_CLAIMS, datalog_subset, True, budget)


@functools.lru_cache(maxsize=64)
def atomic_subsumptions(
    tbox_rules: Tuple[Rule, ...], budget: ChaseBudget = DEFAULT_BUDGET
) -> Tuple[Tuple[Rule, ...], Tuple[Tuple[str, str], ...]]:
    """Entailed inclusions between the unary predicates of a rule set.

    Returns (derived inclusion rules, pairs whose entailment check hit the
    budget and stayed undecided).  Used by the classify reasoner.
    """
    concepts: Set[str] = set()
    for rule in tbox_rules:
        for predicate, arity in rule.predicates():
            if arity == 1 and predicate not in (EQ, NEQ):
                concepts.add(predicate)
    derived: List[Rule] = []
    undecided: List[Tuple[str, str]] = []
    x = Var("x")
    for sub in sorted(concepts):
        for sup in sorted(concepts):
            if sub == sup:
                continue
            candidate = plain_rule((Atom(sub, (x,)),), Atom(sup, (x,)))
            try:
                if entails_rule(tbox_rules, candidate, budget):
                    derived.append(candidate)
            except BudgetExceeded:
                undecided.append((sub, sup))
    return tuple(derived), tuple(undecided)


def classify_reasoner(budget: ChaseBudget = DEFAULT_BUDGET) -> ReasonerHandle:
    """First derives all atomic subsumptions entailed by the full TBox, then
    reasons like rl over the TBox extended with them."""

    def fragment(tbox_rules: Sequence[Rule]) -> Tuple[Rule, ...]:
        derived, _ = atomic_subsumptions(tuple(tbox_rules), budget)
        return datalog_subset(tuple(tbox_rules) + derived)

    claims = frozenset(
        {SOUND, MONOTONIC, WEAKLY_FAITHFUL, STRONGLY_FAITHFUL, FO_REPRODUCIBLE, COMPACT}
    )
    return _fragment_reasoner("classify", claims, fragment, True, budget)


def _ground_head(atom: Atom, binding: Dict[str, str]) -> Atom:
    return Atom(
        atom.predicate,
        tuple(t if t.is_const else Const(binding[t.name]) for t in atom.args),
    )


def _evaluate_query(
    query: UCQ, facts: FrozenSet[Atom], injective: bool
) -> FrozenSet[Tuple[str, ...]]:
    """Evaluate the union of conjunctive queries directly over a fact set.

    With injective=True, matches must send distinct query variables to
    distinct individuals.
    """
    answers: Set[Tuple[str, ...]] = set()
    for rule in query.rules:
        names = sorted(rule.variables())
        head = head_atom(rule)
        for binding in body_matches(rule.body, facts):
            if injective:
                images = [binding[v] for v in names if v in binding]
                if len(set(images)) != len(images):
                    continue
            answers.add(
                tuple(t.name if t.is_const else binding[t.name] for t in head.args)
            )
    return frozenset(answers)


def rl_neq_reasoner(budget: ChaseBudget = DEFAULT_BUDGET) -> ReasonerHandle:
    """Like rl, but evaluates the query over the saturated facts with every
    pair of query variables required to be distinct."""

    def check_unsat(tbox_rules: Sequence[Rule], box: ABox) -> CheckResult:
        program = with_equality_axioms(datalog_subset(tbox_rules), box)
        try:
            return saturate(program, box, budget).unsat
        except BudgetExceeded:
            return INCONCLUSIVE

    def answer(query: UCQ, tbox_rules: Sequence[Rule], box: ABox) -> AnswerResult:
        program = with_equality_axioms(datalog_subset(tbox_rules), box)
        try:
            model = saturate(program, box, budget)
        except BudgetExceeded:
            return INCONCLUSIVE
        if model.unsat:
            return frozenset()
        answer_set: Optional[FrozenSet[Tuple[str, ...]]] = None
        for branch in model.branches:
            found = _evaluate_query(query, branch, injective=True)
            answer_set = found if answer_set is None else (answer_set & found)
        return answer_set if answer_set is not None else frozenset()

    claims = frozenset({SOUND, MONOTONIC, WEAKLY_FAITHFUL})
    return ReasonerHandle("rl_neq", claims, check_unsat, answer)


def peval_reasoner(rounds: int, budget: ChaseBudget = DEFAULT_BUDGET) -> ReasonerHandle:
    """Applies the plain datalog rules for a fixed number of parallel rounds
    (no fixpoint), then evaluates the query over the derived facts.  Never
    reports inconsistency."""
    if rounds < 0:
        raise ValueError("the number of rounds cannot be negative")

    def answer(query: UCQ, tbox_rules: Sequence[Rule], box: ABox) -> AnswerResult:
        rules = plain_datalog_subset(tbox_rules)
        facts = frozenset(box.atoms)
        for _ in range(rounds):
            derived: Set[Atom] = set(facts)
            for rule in rules:
                head = head_atom(rule)
                for binding in body_matches(rule.body, facts):
                    derived.add(_ground_head(head, binding))
            updated = frozenset(derived)
            if updated == facts:
                break
            facts = updated
        return _evaluate_query(query, facts, injective=False)

    claims = frozenset({SOUND, MONOTONIC, WEAKLY_FAITHFUL, STRONGLY_FAITHFUL})
    return ReasonerHandle(f"peval({rounds})", claims, lambda t, a: False, answer)


def program_reasoner(
    rules: Sequence[Rule],
    name: str = "program",
    budget: ChaseBudget = DEFAULT_BUDGET,
) -> ReasonerHandle:
    """Certain answers over a fixed rule program; the TBox argument passed
    at call time is ignored in favor of the program."""
    fixed = tuple(rules)

    def check_unsat(tbox_rules: Sequence[Rule], box: ABox) -> CheckResult:
        program = with_equality_axioms(fixed, box)
        try:
            return is_unsatisfiable(program, box, budget)
        except BudgetExceeded:
            return INCONCLUSIVE

    def answer(query: UCQ, tbox_rules: Sequence[Rule], box: ABox) -> AnswerResult:
        program = with_equality_axioms(fixed, box)
        try:
            return certain_answers(query, program, box, budget)
        except BudgetExceeded:
            return INCONCLUSIVE

    claims = frozenset({MONOTONIC, WEAKLY_FAITHFUL, STRONGLY_FAITHFUL, FO_REPRODUCIBLE})
    return ReasonerHandle(name, claims, check_unsat, answer)


BUILTIN_NAMES = ("trivial", "rdf", "rdfs", "rl", "classify", "rl_neq", "peval", "program")


def builtin(
    name: str, params: Sequence[str] = (), budget: ChaseBudget = DEFAULT_BUDGET
) -> ReasonerHandle:
    """Construct a built-in reasoner by name.

    peval takes one parameter (the round count); program takes one parameter
    (a rule file path).  The others take none.
    """
    params = tuple(params)
    if name == "peval":
        if len(params) != 1 or not params[0].isdigit():
            raise ValueError("peval needs a single numeric parameter, e.g. peval:2")
        return peval_reasoner(int(params[0]), budget)
    if name == "program":
        if len(params) != 1:
            raise ValueError("program needs a single rule-file parameter")
        path = Path(params[0])
        rules = parse_rules(path.read_text(), allow_fresh=True)
        return program_reasoner(rules, name=f"program({path.name})", budget=budget)
    if params:
        raise ValueError(f"reasoner {name} takes no parameters")
    factories = {
        "trivial": lambda: trivial_reasoner(),
        "rdf": lambda: rdf_reasoner(budget),
        "rdfs": lambda: rdfs_reasoner(budget),
        "rl": lambda: rl_reasoner(budget),
        "classify": lambda: classify_reasoner(budget),
        "rl_neq": lambda: rl_neq_reasoner(budget),
    }
    if name not in factories:
        raise ValueError(f"unknown built-in reasoner: {name}")
    return factories[name]()


# ----------------------------------------------------------------------
# External process adapter
# ----------------------------------------------------------------------


class ExternalReasonerError(Exception):
    """The external command broke the wire protocol."""


def _parse_answer_lines(text: str, arity: int) -> FrozenSet[Tuple[str, ...]]:
    answers: Set[Tuple[str, ...]] = set()
    for line in text.splitlines():
        if arity == 0:
            if line != "()":
                raise ExternalReasonerError(
                    f"expected () for a Boolean answer line, got {line!r}"
                )
            answers.add(())
            continue
        parts = line.split(",")
        if len(parts) != arity:
            raise ExternalReasonerError(
                f"answer line {line!r} has {len(parts)} fields, expected {arity}"
            )
        for part in parts:
            if not part or any(ch.isspace() for ch in part):
                raise ExternalReasonerError(f"malformed constant {part!r} in {line!r}")
        answers.add(tuple(parts))
    return frozenset(answers)


def external(command_template: str, timeout: float = 60.0) -> ReasonerHandle:
    """Wrap a command-line reasoner speaking the wire protocol.

    The template is split shell-style and invoked as
    `CMD check --tbox FILE --abox FILE` and
    `CMD answer --tbox FILE --abox FILE --query FILE`.
    A timeout yields INCONCLUSIVE; protocol violations raise
    ExternalReasonerError.
    """
    base = shlex.split(command_template)
    if not base:
        raise ValueError("empty external reasoner command")

    def invoke(
        mode: str, tbox_rules: Sequence[Rule], box: ABox, query: Optional[UCQ]
    ) -> Optional[str]:
        with tempfile.TemporaryDirectory(prefix="certkit-ext-") as work:
            tbox_path = Path(work) / "tbox.rules"
            abox_path = Path(work) / "input.abox"
            tbox_path.write_text(serialize_rules(tbox_rules))
            abox_path.write_text(serialize_abox(box))
            args = base + [mode, "--tbox", str(tbox_path), "--abox", str(abox_path)]
            if query is not None:
                query_path = Path(work) / "query.q"
                query_path.write_text(serialize_query(query))
                args += ["--query", str(query_path)]
            try:
                proc = subprocess.run(
                    args, capture_output=True, text=True, timeout=timeout
                )
            except subprocess.TimeoutExpired:
                return None
            if proc.returncode != 0:
                detail = proc.stderr.strip().splitlines()
                raise ExternalReasonerError(
                    f"{base[0]} {mode} exited with {proc.returncode}"
                    + (f": {detail[0]}" if detail else "")
                )
            return proc.stdout

    def check_unsat(tbox_rules: Sequence[Rule], box: ABox) -> CheckResult:
        out = invoke("check", tbox_rules, box, None)
        if out is None:
            return INCONCLUSIVE
        lines = out.splitlines()
        if len(lines) != 1 or lines[0] not in ("t", "f"):
            raise ExternalReasonerError(f"check printed {out!r}, expected t or f")
        return lines[0] == "t"

    def answer(query: UCQ, tbox_rules: Sequence[Rule], box: ABox) -> AnswerResult:
        out = invoke("answer", tbox_rules, box, query)
        if out is None:
            return INCONCLUSIVE
        return _parse_answer_lines(out, query.arity)

    return ReasonerHandle(f"external({base[0]})", frozenset(), check_unsat, answer)


# ----------------------------------------------------------------------
# Randomized property checks
# ----------------------------------------------------------------------

PROPERTIES = (SOUND, MONOTONIC, WEAKLY_FAITHFUL, STRONGLY_FAITHFUL)


@dataclass(frozen=True)
class PropertyCounterexample:
    """A concrete input violating one of the probed properties."""

    property: str
    abox: str
    detail: str


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of randomized falsification; finding nothing proves nothing."""

    reasoner: str
    trials: int
    checked: Tuple[str, ...]
    counterexamples: Tuple[PropertyCounterexample, ...]
    inconclusive_trials: int

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def violated(self) -> Tuple[str, ...]:
        return tuple(sorted({c.property for c in self.counterexamples}))


def _signature_of(query: UCQ, tbox_rules: Sequence[Rule]) -> List[Tuple[str, int]]:
    seen: Set[Tuple[str, int]] = set()
    for rule in tbox_rules:
        seen |= rule.predicates()
    for rule in query.rules:
        for atom in rule.body:
            seen.add((atom.predicate, atom.arity))
    seen = {
        (p, n)
        for p, n in seen
        if p not in (EQ, NEQ) and not (p == query.predicate and n == query.arity)
    }
    return sorted(seen)


def _one_line(box: ABox) -> str:
    return serialize_abox(box).replace("\n", " ").strip()


def _map_abox(box: ABox, mapping: Dict[str, str]) -> ABox:
    return ABox(
        frozenset(
            Atom(a.predicate, tuple(Const(mapping.get(t.name, t.name)) for t in a.args))
            for a in box.atoms
        )
    )


def _map_tuple(tup: Tuple[str, ...], mapping: Dict[str, str]) -> Tuple[str, ...]:
    return tuple(mapping.get(c, c) for c in tup)


def _describe(mapping: Dict[str, str]) -> str:
    return "{" + ", ".join(f"{k}->{v}" for k, v in sorted(mapping.items())) + "}"


def property_spotcheck(
    handle: ReasonerHandle,
    query: UCQ,
    tbox_rules: Sequence[Rule],
    trials: int = 200,
    seed: int = 0,
    budget: ChaseBudget = DEFAULT_BUDGET,
) -> PropertyReport:
    """Try to falsify soundness, monotonicity, and faithfulness.

    Each trial draws a small random ABox over the query/TBox signature and
    checks: answers stay within the certain answers (soundness); growing the
    ABox never loses answers (monotonicity); renaming unprotected
    individuals apart preserves behavior (weak faithfulness); merging
    unprotected individuals preserves reported answers (strong
    faithfulness).  The first counterexample found per property is reported
    and that property is not probed further.  Trials cut short by budgets
    or timeouts are counted separately.  A clean report is evidence, not
    proof.
    """
    rng = random.Random(seed)
    tbox_rules = tuple(tbox_rules)
    signature = _signature_of(query, tbox_rules)
    protected = sorted(all_constants(tuple(query.rules), tbox_rules))
    pool = sorted(set(protected) | {"a", "b", "c", "d"})
    found: Dict[str, PropertyCounterexample] = {}
    inconclusive_trials = 0
    if not signature:
        return PropertyReport(handle.name, 0, PROPERTIES, (), 0)

    def random_atoms(count: int) -> FrozenSet[Atom]:
        atoms = set()
        for _ in range(count):
            predicate, arity = rng.choice(signature)
            args = tuple(Const(rng.choice(pool)) for _ in range(arity))
            atoms.add(Atom(predicate, args))
        return frozenset(atoms)

    def fresh_names(count: int, taken: Set[str]) -> List[str]:
        out: List[str] = []
        i = 0
        while len(out) < count:
            name = f"n{i}"
            if name not in taken:
                out.append(name)
            i += 1
        return out

    def certain_tuple_set(box: ABox) -> FrozenSet[Tuple[str, ...]]:
        program = with_equality_axioms(tbox_rules, box)
        return certain_answers(query, program, box, budget)

    def certainly_unsat(box: ABox) -> bool:
        program = with_equality_axioms(tbox_rules, box)
        return is_unsatisfiable(program, box, budget)

    class _Cut(Exception):
        pass

    def need_check(box: ABox) -> bool:
        result = handle.check_unsat(tbox_rules, box)
        if result is INCONCLUSIVE:
            raise _Cut()
        return bool(result)

    def need_answer(box: ABox) -> FrozenSet[Tuple[str, ...]]:
        result = handle.answer(query, tbox_rules, box)
        if result is INCONCLUSIVE:
            raise _Cut()
        return result  # type: ignore[return-value]

    def check_sound(box: ABox) -> None:
        if need_check(box):
            if not certainly_unsat(box):
                found[SOUND] = PropertyCounterexample(
                    SOUND, _one_line(box), "reported unsatisfiable, but the input is satisfiable"
                )
            return
        answers = need_answer(box)
        if certainly_unsat(box):
            return
        extra = answers - certain_tuple_set(box)
        if extra:
            found[SOUND] = PropertyCounterexample(
                SOUND,
                _one_line(box),
                f"answered {sorted(extra)} beyond the certain answers",
            )

    def check_monotonic(box: ABox) -> None:
        larger = ABox(box.atoms | random_atoms(rng.randint(1, 2)))
        first = need_check(box)
        second = need_check(larger)
        if first and not second:
            found[MONOTONIC] = PropertyCounterexample(
                MONOTONIC,
                _one_line(box),
                f"unsat verdict lost on superset {_one_line(larger)}",
            )
            return
        if not first and not second:
            lost = need_answer(box) - need_answer(larger)
            if lost:
                found[MONOTONIC] = PropertyCounterexample(
                    MONOTONIC,
                    _one_line(box),
                    f"answers {sorted(lost)} lost on superset {_one_line(larger)}",
                )

    def check_weak(box: ABox) -> None:
        individuals = sorted({t.name for a in box.atoms for t in a.args})
        movable = [c for c in individuals if c not in protected]
        targets = fresh_names(len(movable), set(individuals) | set(pool))
        mapping = {c: c for c in individuals if c in protected}
        mapping.update(dict(zip(movable, targets)))
        image = _map_abox(box, mapping)
        if need_check(box):
            if not need_check(image):
                found[WEAKLY_FAITHFUL] = PropertyCounterexample(
                    WEAKLY_FAITHFUL,
                    _one_line(box),
                    f"unsat verdict lost under renaming {_describe(mapping)}",
                )
            return
        answers = need_answer(box)
        if not answers:
            return
        if need_check(image):
            found[WEAKLY_FAITHFUL] = PropertyCounterexample(
                WEAKLY_FAITHFUL,
                _one_line(box),
                f"satisfiable verdict lost under renaming {_describe(mapping)}",
            )
            return
        renamed = need_answer(image)
        missing = {t for t in answers if _map_tuple(t, mapping) not in renamed}
        if missing:
            found[WEAKLY_FAITHFUL] = PropertyCounterexample(
                WEAKLY_FAITHFUL,
                _one_line(box),
                f"answers {sorted(missing)} lost under renaming {_describe(mapping)}",
            )

    def check_strong(box: ABox) -> None:
        individuals = sorted({t.name for a in box.atoms for t in a.args})
        mapping = {
            c: (c if c in protected else rng.choice(pool)) for c in individuals
        }
        image = _map_abox(box, mapping)
        if need_check(box):
            if not need_check(image):
                found[STRONGLY_FAITHFUL] = PropertyCounterexample(
                    STRONGLY_FAITHFUL,
                    _one_line(box),
                    f"unsat verdict lost under merge {_describe(mapping)}",
                )
            return
        answers = need_answer(box)
        if not answers or need_check(image):
            return
        merged = need_answer(image)
        missing = {t for t in answers if _map_tuple(t, mapping) not in merged}
        if missing:
            found[STRONGLY_FAITHFUL] = PropertyCounterexample(
                STRONGLY_FAITHFUL,
                _one_line(box),
                f"answers {sorted(missing)} not preserved under merge {_describe(mapping)}",
            )

    checks = {
        SOUND: check_sound,
        MONOTONIC: check_monotonic,
        WEAKLY_FAITHFUL: check_weak,
        STRONGLY_FAITHFUL: check_strong,
    }
    for _ in range(trials):
        box = ABox(random_atoms(rng.randint(1, 4)))
        cut = False
        for name in PROPERTIES:
            if name in found:
                continue
            try:
                checks[name](box)
            except (_Cut, BudgetExceeded):
                cut = True
        if cut:
            inconclusive_trials += 1
        if len(found) == len(PROPERTIES):
            break
    ordered = tuple(found[p] for p in PROPERTIES if p in found)
    return PropertyReport(handle.name, trials, PROPERTIES, ordered, inconclusive_trials)
