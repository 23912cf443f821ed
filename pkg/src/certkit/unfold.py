"""Resolution-style unfolding of datalog data rules into CQ-shaped rules.

unfold_step resolves one body atom of a rule against the head of a plain
datalog rule.  exhaustive_unfold closes a query part under unfolding; when
the closure is reached the data rules have been compiled away and the
result is a UCQ with the same certain answers.  unfold_levels enumerates
unfoldings breadth-first without pruning, for fair counterexample search.
subset_closed_rewriting unions the closures of every axiom subset, which
keeps rules that plain minimization would discard but that are needed to
compare reasoners that silently use only part of the TBox.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .minimize import condense, most_general_unifier, subsumes
from .model import (
    Disjunct,
    Rewriting,
    Rule,
    UCQ,
    Var,
    apply_substitution,
    canonical_variable_form,
    head_atom,
    is_plain,
    substitute_atom,
)
from .syntax import serialize_rule


def _standardize_apart(rule: Rule, avoid: Set[str]) -> Rule:
    """Rename the rule's variables away from avoid, deterministically."""
    clash = sorted(v for v in rule.variables() if v in avoid)
    if not clash:
        return rule
    taken = set(avoid) | set(rule.variables())
    counter = 0
    sigma = {}
    for v in clash:
        while f"u{counter}" in taken:
            counter += 1
        name = f"u{counter}"
        counter += 1
        taken.add(name)
        sigma[v] = Var(name)
    return apply_substitution(rule, sigma)


def _is_plain_datalog(rule: Rule) -> bool:
    return is_plain(rule) and not rule.head[0].exists


def unfold_step(query_rule: Rule, data_rule: Rule) -> Tuple[Rule, ...]:
    """All single-step unfoldings of the rule against the data rule.

    For each body atom unifiable with the data rule's head, replaces the
    atom by the data rule's body under the most general unifier.  Results
    are condensed and canonically renamed; duplicates collapse.
    """
    if not _is_plain_datalog(data_rule):
        raise ValueError("unfolding needs a plain datalog data rule")
    if not query_rule.is_falsum and not is_plain(query_rule):
        raise ValueError("unfolding needs a CQ-shaped rule")
    fresh = _standardize_apart(data_rule, set(query_rule.variables()))
    fresh_head = head_atom(fresh)
    out: List[Rule] = []
    seen: Set[Rule] = set()
    for i, atom in enumerate(query_rule.body):
        mgu = most_general_unifier(atom, fresh_head)
        if mgu is None:
            continue
        new_body = tuple(
            substitute_atom(a, mgu)
            for a in (query_rule.body[:i] + query_rule.body[i + 1 :] + fresh.body)
        )
        head = []
        for d in query_rule.head:
            head.append(
                Disjunct(d.exists, tuple(substitute_atom(a, mgu) for a in d.atoms))
            )
        candidate = canonical_variable_form(condense(Rule(new_body, tuple(head))))
        if candidate not in seen:
            seen.add(candidate)
            out.append(candidate)
    return tuple(out)


def unfold_closure(
    data_rules: Sequence[Rule], seeds: Sequence[Rule], bound: int
) -> Tuple[Tuple[Rule, ...], bool]:
    """Close the seed rules under unfolding, keeping at most bound rules.

    Breadth-first by unfolding depth; a new rule is kept only when no kept
    rule subsumes it.  Returns (rules, closed); closed is False when the
    bound cut generation short.
    """
    for d in data_rules:
        if not _is_plain_datalog(d):
            raise ValueError(
                f"data rule is not plain datalog: {serialize_rule(d)}"
            )
    kept: List[Rule] = []
    for seed in seeds:
        candidate = canonical_variable_form(condense(seed))
        if candidate not in kept:
            kept.append(candidate)
    if len(kept) > bound:
        return tuple(kept[:bound]), False
    frontier = list(kept)
    while frontier:
        next_frontier: List[Rule] = []
        for rule in frontier:
            for data_rule in data_rules:
                for candidate in unfold_step(rule, data_rule):
                    if candidate in kept or candidate in next_frontier:
                        continue
                    if any(subsumes(k, candidate) is not None for k in kept):
                        continue
                    if len(kept) >= bound:
                        return tuple(kept), False
                    kept.append(candidate)
                    next_frontier.append(candidate)
        frontier = next_frontier
    return tuple(kept), True


def exhaustive_unfold(
    data_rules: Sequence[Rule], query: UCQ, bound: int
) -> Tuple[UCQ, bool]:
    """Unfold the query part against the data rules until nothing new
    appears or the rule-count bound is hit.

    When closed, the returned UCQ alone has the same certain answers as the
    data rules plus the query part.
    """
    rules, closed = unfold_closure(tuple(data_rules), query.rules, bound)
    return UCQ(query.predicate, query.arity, rules), closed


def unfold_levels(
    data_rules: Sequence[Rule], seeds: Sequence[Rule], max_depth: int
) -> Iterator[Tuple[int, Rule]]:
    """Yield (depth, rule) pairs breadth-first, without subsumption pruning.

    Depth 0 yields the seeds themselves; exact duplicates (up to variable
    renaming) are suppressed so recursion cannot loop on one rule.
    """
    seen: Set[Rule] = set()
    frontier: List[Rule] = []
    for seed in seeds:
        candidate = canonical_variable_form(condense(seed))
        if candidate not in seen:
            seen.add(candidate)
            frontier.append(candidate)
    for rule in frontier:
        yield 0, rule
    for depth in range(1, max_depth + 1):
        next_frontier: List[Rule] = []
        for rule in frontier:
            for data_rule in data_rules:
                for candidate in unfold_step(rule, data_rule):
                    if candidate not in seen:
                        seen.add(candidate)
                        next_frontier.append(candidate)
        for rule in next_frontier:
            yield depth, rule
        frontier = next_frontier


# ----------------------------------------------------------------------
# Subset-closed rewritings
# ----------------------------------------------------------------------


def subset_closed_rewriting(
    axiom_groups: Sequence[Sequence[Rule]],
    query: UCQ,
    bound: int = 256,
) -> Rewriting:
    """Union of UCQ rewritings of the query over every axiom subset.

    Each group holds the rules of one TBox axiom.  For every subset of the
    axioms, the subset's plain-datalog rules are unfolded to closure into
    the query part and into the subset's falsum rules; rules with
    existential or disjunctive heads contribute nothing to the closure.
    The union removes exact duplicates only -- rules subsumed by more
    general ones from other subsets must stay, because a reasoner using
    only part of the TBox is exactly what they detect.
    """
    groups = [tuple(g) for g in axiom_groups]
    query_rules: List[Rule] = []
    query_seen: Set[Rule] = set()
    bottom_rules: List[Rule] = []
    bottom_seen: Set[Rule] = set()
    for mask in range(2 ** len(groups)):
        chosen = [groups[i] for i in range(len(groups)) if mask & (1 << i)]
        rules = tuple(itertools.chain.from_iterable(chosen))
        datalog_part = tuple(r for r in rules if _is_plain_datalog(r))
        falsum_seeds = tuple(r for r in rules if r.is_falsum)
        closed_query, ok = unfold_closure(datalog_part, query.rules, bound)
        if not ok:
            raise ValueError(
                f"axiom subset {_subset_label(mask)} does not unfold to "
                f"closure within {bound} rules"
            )
        closed_bottom, ok = unfold_closure(datalog_part, falsum_seeds, bound)
        if not ok:
            raise ValueError(
                f"falsum rules of axiom subset {_subset_label(mask)} do not "
                f"unfold to closure within {bound} rules"
            )
        for r in closed_query:
            if r not in query_seen:
                query_seen.add(r)
                query_rules.append(r)
        for r in closed_bottom:
            if r not in bottom_seen:
                bottom_seen.add(r)
                bottom_rules.append(r)
    return Rewriting(
        (),
        tuple(bottom_rules),
        UCQ(query.predicate, query.arity, tuple(query_rules)),
    )


def _subset_label(mask: int) -> str:
    members = [str(i) for i in range(mask.bit_length()) if mask & (1 << i)]
    return "{" + ",".join(members) + "}"
