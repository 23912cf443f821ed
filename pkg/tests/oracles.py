"""Independent brute-force oracles used to freeze expected test values.

Nothing here shares algorithmic code with the package: the fixpoint oracle
does its own pattern matching, the model enumerator decides entailment by
trying every Herbrand interpretation, and the isomorphism oracle tries every
bijection.  These are deliberately slow and obviously correct; tests compare
package output against them, and frozen expected values in the test files
were produced by running these functions.
"""

from __future__ import annotations

import itertools
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from certkit.model import (
    ABox,
    Atom,
    Const,
    Rule,
    Term,
    UCQ,
    Var,
)


# ----------------------------------------------------------------------
# Matching helpers (self-contained, no package imports beyond data types)
# ----------------------------------------------------------------------


def _match_atom(pattern: Atom, fact: Atom, binding: Dict[str, str]) -> Optional[Dict[str, str]]:
    """Extend binding so pattern maps onto fact, or return None."""
    if pattern.predicate != fact.predicate or pattern.arity != fact.arity:
        return None
    out = dict(binding)
    for p, f in zip(pattern.args, fact.args):
        if p.is_const:
            if p.name != f.name:
                return None
        else:
            if p.name in out:
                if out[p.name] != f.name:
                    return None
            else:
                out[p.name] = f.name
    return out


def _match_body(
    atoms: Sequence[Atom], facts: FrozenSet[Atom], binding: Dict[str, str]
) -> Iterator[Dict[str, str]]:
    """All ways to map a conjunction of atoms into a fact set."""
    if not atoms:
        yield dict(binding)
        return
    first, rest = atoms[0], atoms[1:]
    for fact in sorted(facts):
        extended = _match_atom(first, fact, binding)
        if extended is not None:
            yield from _match_body(rest, facts, extended)


def _ground(atom: Atom, binding: Dict[str, str]) -> Atom:
    args = tuple(
        t if t.is_const else Const(binding[t.name]) for t in atom.args
    )
    return Atom(atom.predicate, args)


# ----------------------------------------------------------------------
# Naive fixpoint for plain datalog
# ----------------------------------------------------------------------


def naive_fixpoint(rules: Sequence[Rule], facts: Iterable[Atom]) -> FrozenSet[Atom]:
    """Least model of a plain datalog program: iterate rules until no change.

    Only accepts rules whose heads are a single plain atom (no falsum, no
    disjunction, no existentials).
    """
    for r in rules:
        if r.is_falsum or len(r.head) != 1 or r.head[0].exists or len(r.head[0].atoms) != 1:
            raise ValueError("naive_fixpoint handles plain single-atom heads only")
    current: Set[Atom] = set(facts)
    changed = True
    while changed:
        changed = False
        snapshot = frozenset(current)
        for r in rules:
            head = r.head[0].atoms[0]
            for binding in _match_body(list(r.body), snapshot, {}):
                derived = _ground(head, binding)
                if derived not in current:
                    current.add(derived)
                    changed = True
    return frozenset(current)


# ----------------------------------------------------------------------
# Herbrand model enumeration for existential-free programs
# ----------------------------------------------------------------------


def _herbrand_base(predicates: Set[Tuple[str, int]], domain: Sequence[str]) -> List[Atom]:
    base: List[Atom] = []
    for pred, arity in sorted(predicates):
        for combo in itertools.product(domain, repeat=arity):
            base.append(Atom(pred, tuple(Const(c) for c in combo)))
    return base


def _rule_satisfied(rule: Rule, interp: FrozenSet[Atom], domain: Sequence[str]) -> bool:
    for binding in _match_body(list(rule.body), interp, {}):
        if rule.is_falsum:
            return False
        ok = False
        for d in rule.head:
            for combo in itertools.product(domain, repeat=len(d.exists)):
                inner = dict(binding)
                inner.update(dict(zip(sorted(d.exists), combo)))
                if all(_ground(a, inner) in interp for a in d.atoms):
                    ok = True
                    break
            if ok:
                break
        if not ok:
            return False
    return True


def herbrand_models(
    rules: Sequence[Rule], facts: Iterable[Atom], extra_elements: int = 0
) -> Iterator[FrozenSet[Atom]]:
    """Every Herbrand model of rules + facts over the mentioned constants.

    Rule heads may be disjunctive or falsum; existential variables in heads
    are evaluated over the same finite domain, so this enumeration decides
    entailment only for existential-free rule sets (where it is sound and
    complete for positive existential conclusions).  extra_elements pads the
    domain with unused individuals.
    """
    fact_set = frozenset(facts)
    constants: Set[str] = set()
    predicates: Set[Tuple[str, int]] = set()
    for a in fact_set:
        constants |= {t.name for t in a.args}
        predicates.add((a.predicate, a.arity))
    for r in rules:
        constants |= r.constants()
        predicates |= {(p, n) for p, n in r.predicates()}
    for i in range(extra_elements):
        constants.add(f"_extra{i}")
    domain = sorted(constants) if constants else ["_extra0"]
    base = [a for a in _herbrand_base(predicates, domain) if a not in fact_set]
    for bits in itertools.product((False, True), repeat=len(base)):
        interp = fact_set | frozenset(a for a, b in zip(base, bits) if b)
        if all(_rule_satisfied(r, interp, domain) for r in rules):
            yield interp


def _cq_answers(rule: Rule, interp: FrozenSet[Atom]) -> Set[Tuple[str, ...]]:
    head = rule.head[0].atoms[0]
    out: Set[Tuple[str, ...]] = set()
    for binding in _match_body(list(rule.body), interp, {}):
        out.add(tuple(t.name if t.is_const else binding[t.name] for t in head.args))
    return out


def oracle_certain_answers(
    rules: Sequence[Rule], box: ABox, query: UCQ
) -> Optional[Set[Tuple[str, ...]]]:
    """Tuples answering the query in every Herbrand model; None if no model.

    None signals unsatisfiability, where every tuple is vacuously certain.
    """
    result: Optional[Set[Tuple[str, ...]]] = None
    for interp in herbrand_models(rules, box.atoms):
        answers: Set[Tuple[str, ...]] = set()
        for r in query.rules:
            answers |= _cq_answers(r, interp)
        result = answers if result is None else (result & answers)
        if result is not None and not result:
            return set()
    return result


def oracle_unsatisfiable(rules: Sequence[Rule], box: ABox) -> bool:
    for _ in herbrand_models(rules, box.atoms):
        return False
    return True


def oracle_entails_rule(theory: Sequence[Rule], rule: Rule) -> bool:
    """Does the theory entail the rule, by instantiate-body-and-check.

    Free variables of the rule are frozen to distinct new constants; the
    theory must be existential-free for the model enumeration to be a
    decision procedure.
    """
    for t in theory:
        for d in t.head:
            if d.exists:
                raise ValueError("oracle_entails_rule needs an existential-free theory")
    taken = set(rule.constants())
    for t in theory:
        taken |= t.constants()
    binding: Dict[str, str] = {}
    n = 0
    for v in sorted(rule.body_variables()):
        while f"_sk{n}" in taken:
            n += 1
        binding[v] = f"_sk{n}"
        n += 1
    facts = frozenset(_ground(a, binding) for a in rule.body)
    domain_pad = max((len(d.exists) for d in rule.head), default=0)
    for interp in herbrand_models(theory, facts, extra_elements=domain_pad):
        constants = sorted({t.name for a in interp for t in a.args} | set(binding.values()))
        satisfied = False
        for d in rule.head:
            frontier_binding = {v: binding[v] for v in d.frontier() if v in binding}
            for combo in itertools.product(constants, repeat=len(d.exists)):
                inner = dict(frontier_binding)
                inner.update(dict(zip(sorted(d.exists), combo)))
                if all(_ground(a, inner) in interp for a in d.atoms):
                    satisfied = True
                    break
            if satisfied:
                break
        if not satisfied:
            return False
    return True


# ----------------------------------------------------------------------
# Brute-force ABox isomorphism
# ----------------------------------------------------------------------


def brute_force_isomorphism(
    left: ABox, right: ABox, fixed: FrozenSet[str] = frozenset()
) -> Optional[Dict[str, str]]:
    """Try every bijection between the constant sets."""
    lc = sorted(left.constants())
    rc = sorted(right.constants())
    if len(lc) != len(rc):
        return None
    for perm in itertools.permutations(rc):
        mapping = dict(zip(lc, perm))
        if any((l in fixed or m in fixed) and l != m for l, m in mapping.items()):
            continue
        renamed = frozenset(
            Atom(a.predicate, tuple(Const(mapping[t.name]) for t in a.args))
            for a in left.atoms
        )
        if renamed == right.atoms:
            return mapping
    return None


# ----------------------------------------------------------------------
# Brute-force subsumption
# ----------------------------------------------------------------------


def brute_force_subsumes(general: Rule, specific: Rule) -> bool:
    """Is there a substitution mapping general's head and body into specific's?

    Checks every assignment of general's variables to specific's terms.
    Both rules must be plain or both falsum.
    """
    if general.is_falsum != specific.is_falsum:
        return False
    gen_vars = sorted(var for var in _rule_vars(general))
    targets: List[Term] = sorted(
        {t for a in specific.body for t in a.args}
        | {t for d in specific.head for a in d.atoms for t in a.args}
    )
    spec_body = set(specific.body)
    for combo in itertools.product(targets, repeat=len(gen_vars)):
        sigma = dict(zip(gen_vars, combo))
        mapped_body = {_apply(a, sigma) for a in general.body}
        if not mapped_body <= spec_body:
            continue
        if general.is_falsum:
            return True
        g_head = general.head[0].atoms[0]
        s_head = specific.head[0].atoms[0]
        if _apply(g_head, sigma) == s_head:
            return True
    return False


def _rule_vars(rule: Rule) -> Set[str]:
    out: Set[str] = set(rule.body_variables())
    for d in rule.head:
        out |= d.variables()
    return out


def _apply(atom: Atom, sigma: Dict[str, Term]) -> Atom:
    return Atom(
        atom.predicate,
        tuple(sigma[t.name] if t.is_var and t.name in sigma else t for t in atom.args),
    )
