"""Budgeted disjunctive restricted chase: the complete reference reasoner.

saturate runs breadth-first rounds over a set of branches.  A rule fires on
a branch only when no head disjunct's existential closure already maps into
the branch (the restricted-chase condition); disjunctive heads split the
branch, falsum closes it.  The result is Unsat exactly when every branch
closes.  Everything is deterministic: rules apply in program order, matches
in sorted order, fresh individuals are named _f0, _f1, ... in creation
order (skipping names already present in the input).

Budgets cap fresh individuals, live branches, and rounds; exceeding one
raises BudgetExceeded, which callers surface as a distinct inconclusive
outcome rather than an answer.

Callers must include the eq/neq axiomatization in the program when those
predicates occur (see syntax.equality_axioms); saturate contributes the
reflexivity seeds eq(c,c) for every input and fresh individual, since
reflexivity is not expressible as a safe rule.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .model import (
    ABox,
    Atom,
    Const,
    Disjunct,
    EQ,
    FRESH_PREFIX,
    NEQ,
    Rewriting,
    Rule,
    UCQ,
    abox,
    all_constants,
)
from .syntax import equality_axioms, serialize_rule


@dataclass(frozen=True)
class ChaseBudget:
    """Caps on chase work; defaults suit the shipped fixtures."""

    max_fresh_individuals: int = 64
    max_branches: int = 256
    max_rounds: int = 1024

    def __post_init__(self) -> None:
        if min(self.max_fresh_individuals, self.max_branches, self.max_rounds) <= 0:
            raise ValueError("budgets must be positive")


DEFAULT_BUDGET = ChaseBudget()


class BudgetExceeded(Exception):
    """The chase hit a budget; the query outcome is inconclusive."""

    def __init__(self, resource: str, limit: int):
        self.resource = resource
        self.limit = limit
        super().__init__(f"chase exceeded {resource} budget ({limit})")


@dataclass(frozen=True)
class ModelSet:
    """Saturated branches; unsat means every branch closed under falsum."""

    branches: Tuple[FrozenSet[Atom], ...]
    unsat: bool
    fresh_created: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.unsat and self.branches:
            raise ValueError("an unsat result has no branches")


# ----------------------------------------------------------------------
# Homomorphism search
# ----------------------------------------------------------------------


def _match_into(
    atoms: Sequence[Atom],
    by_predicate: Dict[Tuple[str, int], List[Atom]],
    binding: Dict[str, str],
) -> Iterator[Dict[str, str]]:
    """All extensions of binding mapping the conjunction into the facts.

    Candidates are tried in sorted order (lowest first) for determinism.
    """
    if not atoms:
        yield dict(binding)
        return
    # Pick the atom with the fewest unbound variables first.
    best_i = min(
        range(len(atoms)),
        key=lambda i: (
            sum(1 for t in atoms[i].args if t.is_var and t.name not in binding),
            i,
        ),
    )
    atom = atoms[best_i]
    rest = list(atoms[:best_i]) + list(atoms[best_i + 1 :])
    for fact in by_predicate.get((atom.predicate, atom.arity), ()):
        extended = dict(binding)
        ok = True
        for pat, got in zip(atom.args, fact.args):
            if pat.is_const:
                if pat.name != got.name:
                    ok = False
                    break
            else:
                bound = extended.get(pat.name)
                if bound is None:
                    extended[pat.name] = got.name
                elif bound != got.name:
                    ok = False
                    break
        if ok:
            yield from _match_into(rest, by_predicate, extended)


def _index(facts: Iterable[Atom]) -> Dict[Tuple[str, int], List[Atom]]:
    by_predicate: Dict[Tuple[str, int], List[Atom]] = {}
    for fact in sorted(facts):
        by_predicate.setdefault((fact.predicate, fact.arity), []).append(fact)
    return by_predicate


def body_matches(
    body: Sequence[Atom], facts: FrozenSet[Atom], binding: Optional[Dict[str, str]] = None
) -> List[Dict[str, str]]:
    """Sorted list of all homomorphisms from the body into the facts."""
    index = _index(facts)
    found = list(_match_into(list(body), index, dict(binding or {})))
    found.sort(key=lambda b: tuple(sorted(b.items())))
    out: List[Dict[str, str]] = []
    for b in found:
        if not out or out[-1] != b:
            out.append(b)
    return out


def _disjunct_satisfied(
    d: Disjunct, binding: Dict[str, str], facts: FrozenSet[Atom], index=None
) -> bool:
    """Does some extension over the existential variables land in facts?"""
    frontier_binding = {v: c for v, c in binding.items() if v not in d.exists}
    if index is None:
        index = _index(facts)
    for _ in _match_into(list(d.atoms), index, frontier_binding):
        return True
    return False


# ----------------------------------------------------------------------
# Saturation
# ----------------------------------------------------------------------


class _FreshNames:
    """Deterministic _f0, _f1, ... skipping names present in the input."""

    def __init__(self, taken: Iterable[str], limit: int):
        self.taken = set(taken)
        self.limit = limit
        self.counter = 0
        self.created: List[str] = []

    def next(self) -> str:
        while True:
            name = f"{FRESH_PREFIX}{self.counter}"
            self.counter += 1
            if name not in self.taken:
                break
        if len(self.created) >= self.limit:
            raise BudgetExceeded("fresh individual", self.limit)
        self.taken.add(name)
        self.created.append(name)
        return name


def _ground_atom(a: Atom, binding: Dict[str, str]) -> Atom:
    return Atom(
        a.predicate,
        tuple(t if t.is_const else Const(binding[t.name]) for t in a.args),
    )


def _uses_equality(rules: Sequence[Rule], box: ABox) -> bool:
    for a in box.atoms:
        if a.predicate in (EQ, NEQ):
            return True
    for r in rules:
        if any(p in (EQ, NEQ) for p, _ in r.predicates()):
            return True
    return False


def with_equality_axioms(program: Sequence[Rule], box: ABox) -> Tuple[Rule, ...]:
    """The program plus eq/neq axioms when those predicates occur."""
    rules = tuple(program)
    if not _uses_equality(rules, box):
        return rules
    signature: Set[Tuple[str, int]] = set(box.predicates())
    for r in rules:
        signature |= set(r.predicates())
    existing = set(rules)
    extra = tuple(r for r in equality_axioms(signature) if r not in existing)
    return rules + extra


def saturate(program: Sequence[Rule], box: ABox, budget: ChaseBudget = DEFAULT_BUDGET) -> ModelSet:
    rules = list(program)
    use_eq = _uses_equality(rules, box)
    input_names = sorted(all_constants(tuple(rules), box))
    facts: Set[Atom] = set(box.atoms)
    if use_eq:
        for c in input_names:
            facts.add(Atom(EQ, (Const(c), Const(c))))
    fresh = _FreshNames(input_names, budget.max_fresh_individuals)

    def instantiate(d: Disjunct, binding: Dict[str, str]) -> FrozenSet[Atom]:
        extended = dict(binding)
        for v in sorted(d.exists):
            name = fresh.next()
            extended[v] = name
        new = {_ground_atom(a, extended) for a in d.atoms}
        if use_eq:
            for v in sorted(d.exists):
                c = extended[v]
                new.add(Atom(EQ, (Const(c), Const(c))))
        return frozenset(new)

    open_branches: List[FrozenSet[Atom]] = [frozenset(facts)]
    done: List[FrozenSet[Atom]] = []
    rounds = 0
    while open_branches:
        if rounds >= budget.max_rounds:
            raise BudgetExceeded("round", budget.max_rounds)
        rounds += 1
        next_open: List[FrozenSet[Atom]] = []
        for branch in open_branches:
            triggers: List[Tuple[int, Dict[str, str]]] = []
            for idx, rule in enumerate(rules):
                for binding in body_matches(rule.body, branch):
                    triggers.append((idx, binding))
            survivors, changed = _run_round(
                rules, branch, triggers, instantiate, budget.max_branches
            )
            if not changed:
                done.append(branch)
            else:
                next_open.extend(survivors)
        # Deduplicate identical branches, preserving first-seen order.
        seen: Set[FrozenSet[Atom]] = set(done)
        deduped: List[FrozenSet[Atom]] = []
        for b in next_open:
            if b not in seen:
                seen.add(b)
                deduped.append(b)
        open_branches = deduped
        if len(done) + len(open_branches) > budget.max_branches:
            raise BudgetExceeded("branch", budget.max_branches)
    if not done:
        return ModelSet((), True, tuple(fresh.created))
    return ModelSet(tuple(done), False, tuple(fresh.created))


def _run_round(
    rules: Sequence[Rule],
    branch: FrozenSet[Atom],
    triggers: Sequence[Tuple[int, Dict[str, str]]],
    instantiate,
    branch_limit: int,
) -> Tuple[List[FrozenSet[Atom]], bool]:
    """Apply the round's triggers to the branch; returns survivors and
    whether anything fired (a closed branch counts as a change)."""
    changed = False
    survivors: List[FrozenSet[Atom]] = []
    stack: List[Tuple[FrozenSet[Atom], int]] = [(branch, 0)]
    while stack:
        if len(stack) + len(survivors) > branch_limit:
            raise BudgetExceeded("branch", branch_limit)
        facts, start = stack.pop()
        ti = start
        closed = False
        while ti < len(triggers):
            idx, binding = triggers[ti]
            ti += 1
            rule = rules[idx]
            if rule.is_falsum:
                changed = True
                closed = True
                break
            index = _index(facts)
            if any(_disjunct_satisfied(d, binding, facts, index) for d in rule.head):
                continue
            changed = True
            if len(rule.head) == 1:
                facts = facts | instantiate(rule.head[0], binding)
            else:
                for d in reversed(rule.head):
                    stack.append((facts | instantiate(d, binding), ti))
                closed = True  # parent replaced by children
                break
        if not closed:
            survivors.append(facts)
    return survivors, changed


def is_unsatisfiable(
    program: Sequence[Rule], box: ABox, budget: ChaseBudget = DEFAULT_BUDGET
) -> bool:
    return saturate(program, box, budget).unsat


# ----------------------------------------------------------------------
# Certain answers
# ----------------------------------------------------------------------


def certain_answers(
    query: UCQ,
    program: Sequence[Rule],
    box: ABox,
    budget: ChaseBudget = DEFAULT_BUDGET,
) -> FrozenSet[Tuple[str, ...]]:
    """Tuples over input constants answered in every branch.

    On an unsatisfiable input every tuple holds vacuously; callers that care
    must check is_unsatisfiable separately.
    """
    result = saturate(program, box, budget)
    allowed = sorted(all_constants(tuple(program), box, query))
    if result.unsat:
        return frozenset(itertools.product(allowed, repeat=query.arity))
    allowed_set = set(allowed)
    answer: Optional[Set[Tuple[str, ...]]] = None
    for branch in result.branches:
        found: Set[Tuple[str, ...]] = set()
        for r in query.rules:
            head = r.head[0].atoms[0]
            for binding in body_matches(r.body, branch):
                tup = tuple(
                    t.name if t.is_const else binding[t.name] for t in head.args
                )
                if all(c in allowed_set for c in tup):
                    found.add(tup)
        answer = found if answer is None else (answer & found)
        if not answer:
            return frozenset()
    return frozenset(answer or set())


# ----------------------------------------------------------------------
# Rule entailment
# ----------------------------------------------------------------------


def entails_rule(
    theory: Sequence[Rule], rule: Rule, budget: ChaseBudget = DEFAULT_BUDGET
) -> bool:
    """Does the theory entail the rule?

    Freezes the rule's body variables to distinct fresh constants, saturates
    the theory with the frozen body, and checks that every surviving branch
    satisfies the frozen head disjunction.  Unsatisfiability entails
    anything.
    """
    taken = set(all_constants(tuple(theory))) | set(rule.constants())
    names = _FreshNames(taken, limit=len(rule.body_variables()) + 1)
    binding: Dict[str, str] = {}
    for v in sorted(rule.body_variables()):
        binding[v] = names.next()
    facts = frozenset(_ground_atom(a, binding) for a in rule.body)
    result = saturate(theory, abox(facts), budget)
    if result.unsat:
        return True
    for branch in result.branches:
        index = _index(branch)
        if not any(_disjunct_satisfied(d, binding, branch, index) for d in rule.head):
            return False
    return True


# ----------------------------------------------------------------------
# Rewriting verification
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking a rewriting against a rule TBox.

    Only the soundness direction is checked (the rewriting's rules must be
    entailed); that the rewriting captures every certain answer over every
    ABox is not decidable in general, so soundness_only is always True.
    """

    structural_notes: Tuple[str, ...]
    entailed: Tuple[Rule, ...]
    failed: Tuple[Rule, ...]
    inconclusive: Tuple[Rule, ...]
    soundness_only: bool = True

    @property
    def ok(self) -> bool:
        return not self.structural_notes and not self.failed and not self.inconclusive


def verify_rewriting(
    rewriting: Rewriting,
    tbox_rules: Sequence[Rule],
    budget: ChaseBudget = DEFAULT_BUDGET,
) -> VerificationReport:
    notes: List[str] = []
    qpred = rewriting.query.predicate
    for r in rewriting.data_rules:
        if r.is_falsum:
            notes.append(f"data rule has a falsum head: {serialize_rule(r)}")
        for d in r.head:
            for a in d.atoms:
                if a.predicate == qpred:
                    notes.append(
                        f"data rule derives the query predicate: {serialize_rule(r)}"
                    )
    for r in rewriting.bottom_rules:
        if not r.is_falsum:
            notes.append(f"bottom rule lacks a falsum head: {serialize_rule(r)}")
    entailed: List[Rule] = []
    failed: List[Rule] = []
    inconclusive: List[Rule] = []
    theory = tuple(tbox_rules)
    for r in rewriting.data_rules + rewriting.bottom_rules:
        try:
            if entails_rule(theory, r, budget):
                entailed.append(r)
            else:
                failed.append(r)
        except BudgetExceeded:
            inconclusive.append(r)
    return VerificationReport(
        tuple(notes), tuple(entailed), tuple(failed), tuple(inconclusive)
    )
