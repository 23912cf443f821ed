"""Shrinking rewritings and test suites.

Three independent reductions, each preserving certain answers:
  - condense collapses redundant body atoms of a single rule,
  - rule subsumption deletes rules made redundant by another rule,
  - isomorphic-ABox deduplication keeps one test per renaming class.
"""

from __future__ import annotations

import itertools
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .model import (
    ABox,
    Atom,
    Rewriting,
    Rule,
    Substitution,
    Term,
    TestSuite,
    UCQ,
    Var,
    abox_isomorphic,
    apply_substitution,
    head_atom,
    is_plain,
    substitute_atom,
    substitute_term,
)
from .syntax import serialize_abox


# ----------------------------------------------------------------------
# Subsumption
# ----------------------------------------------------------------------


def _check_cq_shape(rule: Rule) -> None:
    if not rule.is_falsum and not is_plain(rule):
        raise ValueError("subsumption and condensation need CQ-shaped rules")


def _match_atom(pattern: Atom, target: Atom, binding: Dict[str, Term]) -> Optional[Dict[str, Term]]:
    """Extend binding so the pattern atom becomes the target atom.

    Pattern variables bind to target terms; target variables are treated as
    inert (this is one-way matching, not unification).
    """
    if pattern.predicate != target.predicate or pattern.arity != target.arity:
        return None
    out = dict(binding)
    for p, t in zip(pattern.args, target.args):
        if p.is_const:
            if p != t:
                return None
        else:
            bound = out.get(p.name)
            if bound is None:
                out[p.name] = t
            elif bound != t:
                return None
    return out


def _cover_body(
    atoms: Sequence[Atom],
    buckets: Dict[Tuple[str, int], List[Atom]],
    binding: Dict[str, Term],
) -> Optional[Dict[str, Term]]:
    if not atoms:
        return dict(binding)
    # Match the atom with the fewest candidate targets first; on chain-shaped
    # bodies this keeps the search close to linear instead of exploring every
    # interleaving of same-predicate atoms.
    best_index = 0
    best_matches: Optional[List[Dict[str, Term]]] = None
    for i, atom in enumerate(atoms):
        matches = []
        for target in buckets.get((atom.predicate, atom.arity), ()):
            extended = _match_atom(atom, target, binding)
            if extended is not None:
                matches.append(extended)
        if not matches:
            return None
        if best_matches is None or len(matches) < len(best_matches):
            best_index, best_matches = i, matches
            if len(matches) == 1:
                break
    assert best_matches is not None
    rest = list(atoms[:best_index]) + list(atoms[best_index + 1 :])
    for extended in best_matches:
        result = _cover_body(rest, buckets, extended)
        if result is not None:
            return result
    return None


def subsumes(general: Rule, specific: Rule) -> Optional[Substitution]:
    """A substitution mapping general onto (a part of) specific.

    Returns sigma with sigma(head(general)) = head(specific) and
    sigma(body(general)) a subset of specific's body, or None.  When it
    exists, specific is redundant next to general: every certain answer it
    produces, general produces too.
    """
    _check_cq_shape(general)
    _check_cq_shape(specific)
    if general.is_falsum != specific.is_falsum:
        return None
    binding: Optional[Dict[str, Term]] = {}
    if not general.is_falsum:
        binding = _match_atom(head_atom(general), head_atom(specific), {})
        if binding is None:
            return None
    buckets: Dict[Tuple[str, int], List[Atom]] = {}
    for target in sorted(specific.body):
        buckets.setdefault((target.predicate, target.arity), []).append(target)
    result = _cover_body(list(general.body), buckets, binding)
    if result is None:
        return None
    # Ensure every variable of general is mapped (body-safe rules always are).
    for v in sorted(general.variables()):
        result.setdefault(v, Var(v))
    return result


# ----------------------------------------------------------------------
# Condensation
# ----------------------------------------------------------------------


def _walk(t: Term, subst: Dict[str, Term]) -> Term:
    while t.is_var and t.name in subst:
        t = subst[t.name]
    return t


def most_general_unifier(a: Atom, b: Atom) -> Optional[Dict[str, Term]]:
    """Most general unifier of two function-free atoms, or None."""
    if a.predicate != b.predicate or a.arity != b.arity:
        return None
    subst: Dict[str, Term] = {}
    for s, t in zip(a.args, b.args):
        s, t = _walk(s, subst), _walk(t, subst)
        if s == t:
            continue
        if s.is_var:
            subst[s.name] = t
        elif t.is_var:
            subst[t.name] = s
        else:
            return None
    return {v: _walk(Var(v), subst) for v in subst}


def condense(rule: Rule) -> Rule:
    """Collapse redundant body atoms while preserving equivalence.

    Repeatedly unifies a pair of body atoms and keeps the collapsed rule
    whenever it still subsumes the original (which guarantees logical
    equivalence, since the collapse itself witnesses the other direction).
    Pairs are tried in lexicographic order for determinism.
    """
    _check_cq_shape(rule)
    current = rule
    changed = True
    while changed:
        changed = False
        body = current.body  # canonically sorted by construction
        for i, j in itertools.combinations(range(len(body)), 2):
            mgu = most_general_unifier(body[i], body[j])
            if mgu is None:
                continue
            collapsed = apply_substitution(current, mgu)
            if len(collapsed.body) >= len(current.body):
                continue
            if subsumes(collapsed, current) is not None:
                current = collapsed
                changed = True
                break
    return current


# ----------------------------------------------------------------------
# Rule-set and rewriting minimization
# ----------------------------------------------------------------------


def minimize_rules(rules: Sequence[Rule]) -> Tuple[Rule, ...]:
    """Condense every rule, then drop rules subsumed by a remaining rule.

    Mutually subsuming (equivalent) rules keep the one earliest in input
    order; output preserves input order.
    """
    condensed = [condense(r) for r in rules]
    n = len(condensed)
    dropped = [False] * n
    for j in range(n):
        for i in range(n):
            if i == j or dropped[i] or dropped[j]:
                continue
            if subsumes(condensed[i], condensed[j]) is None:
                continue
            mutual = subsumes(condensed[j], condensed[i]) is not None
            if mutual and i > j:
                continue  # the earlier rule wins the tie
            dropped[j] = True
            break
    return tuple(r for r, gone in zip(condensed, dropped) if not gone)


def minimize_ucq(rewriting: Rewriting) -> Rewriting:
    """Minimize the bottom and query parts of a UCQ-shaped rewriting.

    Data rules pass through untouched; rewritings with data rules are
    accepted so the CLI can run on any input, but only the CQ-shaped parts
    shrink.
    """
    bottom = minimize_rules(rewriting.bottom_rules)
    query_rules = minimize_rules(rewriting.query.rules)
    return Rewriting(
        rewriting.data_rules,
        bottom,
        UCQ(rewriting.query.predicate, rewriting.query.arity, query_rules),
    )


# ----------------------------------------------------------------------
# Isomorphic test deduplication
# ----------------------------------------------------------------------


def dedup_isomorphic(suite: TestSuite, fixed: FrozenSet[str] = frozenset()) -> TestSuite:
    """Keep one test ABox per isomorphism class, fixing the given constants.

    Unsatisfiability tests and query tests never merge with each other, and
    query tests only merge when they carry the same query.  Each class is
    represented by its lexicographically least serialization; class order
    follows first appearance in the suite.
    """
    fixed = frozenset(fixed)

    def dedup_group(boxes: Sequence[ABox]) -> List[ABox]:
        classes: List[List[ABox]] = []
        for box in boxes:
            for cls in classes:
                if abox_isomorphic(cls[0], box, fixed) is not None:
                    cls.append(box)
                    break
            else:
                classes.append([box])
        return [min(cls, key=serialize_abox) for cls in classes]

    unsat = dedup_group(suite.unsat_tests)
    grouped: List[Tuple[UCQ, List[ABox]]] = []
    for box, q in suite.query_tests:
        for gq, members in grouped:
            if gq == q:
                members.append(box)
                break
        else:
            grouped.append((q, [box]))
    query_tests: List[Tuple[ABox, UCQ]] = []
    for gq, members in grouped:
        for rep in dedup_group(members):
            query_tests.append((rep, gq))
    return TestSuite(tuple(unsat), tuple(query_tests), suite.simple_for)
