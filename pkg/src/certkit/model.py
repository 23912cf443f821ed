"""Core immutable values: terms, atoms, rules, ABoxes, queries, suites.

Rules are implications from a conjunction of body atoms to a disjunction of
existentially quantified conjunctions.  The empty disjunction is falsum, so a
constraint "body -> false" is a Rule whose head is the empty tuple.  A union
of conjunctive queries (UCQ) is a set of rules whose heads are single atoms
over a dedicated query predicate.

All values are frozen dataclasses with canonical internal ordering, so equal
values serialize identically and can be used as dict keys or set members.
Boolean query answers use the zero-length tuple: {()} means true, the empty
set means false.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Tuple

# Constants with this prefix are reserved for machine-generated fresh
# individuals; parsers reject them in user input.
FRESH_PREFIX = "_f"

# Reserved predicate names for equality and inequality.
EQ = "eq"
NEQ = "neq"

# Reserved nullary query predicate used by auxiliary head-entailment tests.
QPRIME = "Qprime"

# Reserved individual used to pad shorter answer tuples in ground queries.
NULL_INDIVIDUAL = "null"


# ======================================================================
# Terms and atoms
# ======================================================================


@dataclass(frozen=True, order=True)
class Term:
    """A variable or a constant; kind is 'var' or 'const'."""

    kind: str
    name: str

    def __post_init__(self) -> None:
        if self.kind not in ("var", "const"):
            raise ValueError(f"bad term kind: {self.kind!r}")

    @property
    def is_var(self) -> bool:
        return self.kind == "var"

    @property
    def is_const(self) -> bool:
        return self.kind == "const"


def Var(name: str) -> Term:
    return Term("var", name)


def Const(name: str) -> Term:
    return Term("const", name)


@dataclass(frozen=True, order=True)
class Atom:
    """A predicate applied to a tuple of terms."""

    predicate: str
    args: Tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_ground(self) -> bool:
        return all(t.is_const for t in self.args)

    def variables(self) -> FrozenSet[str]:
        return frozenset(t.name for t in self.args if t.is_var)

    def constants(self) -> FrozenSet[str]:
        return frozenset(t.name for t in self.args if t.is_const)


# ======================================================================
# Rules
# ======================================================================


@dataclass(frozen=True)
class Disjunct:
    """One existentially quantified conjunction in a rule head."""

    exists: FrozenSet[str]
    atoms: Tuple[Atom, ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ValueError("a head disjunct needs at least one atom")
        object.__setattr__(self, "atoms", tuple(sorted(set(self.atoms))))
        object.__setattr__(self, "exists", frozenset(self.exists))

    def __lt__(self, other: "Disjunct") -> bool:
        return (sorted(self.exists), self.atoms) < (sorted(other.exists), other.atoms)

    def variables(self) -> FrozenSet[str]:
        out: set = set()
        for a in self.atoms:
            out |= a.variables()
        return frozenset(out)

    def frontier(self) -> FrozenSet[str]:
        """Variables shared with the rule body (all non-existential ones)."""
        return self.variables() - self.exists


@dataclass(frozen=True)
class Rule:
    """body -> disjunct | ... | disjunct; the empty head is falsum."""

    body: Tuple[Atom, ...]
    head: Tuple[Disjunct, ...] = ()

    def __post_init__(self) -> None:
        if not self.body:
            raise ValueError("a rule needs at least one body atom")
        object.__setattr__(self, "body", tuple(sorted(set(self.body))))
        object.__setattr__(self, "head", tuple(sorted(set(self.head))))
        body_vars = self.body_variables()
        for d in self.head:
            if d.frontier() - body_vars:
                missing = ", ".join(sorted(d.frontier() - body_vars))
                raise ValueError(f"unsafe rule: head variables {missing} not in body")
            if d.exists & body_vars:
                shared = ", ".join(sorted(d.exists & body_vars))
                raise ValueError(f"existential variables {shared} also occur in body")

    @property
    def is_falsum(self) -> bool:
        return not self.head

    @property
    def sort_key(self):
        return (self.body, self.head)

    def __lt__(self, other: "Rule") -> bool:
        return self.sort_key < other.sort_key

    def body_variables(self) -> FrozenSet[str]:
        out: set = set()
        for a in self.body:
            out |= a.variables()
        return frozenset(out)

    def variables(self) -> FrozenSet[str]:
        out = set(self.body_variables())
        for d in self.head:
            out |= d.variables()
        return frozenset(out)

    def constants(self) -> FrozenSet[str]:
        out: set = set()
        for a in self.body:
            out |= a.constants()
        for d in self.head:
            for a in d.atoms:
                out |= a.constants()
        return frozenset(out)

    def predicates(self) -> FrozenSet[Tuple[str, int]]:
        out = {(a.predicate, a.arity) for a in self.body}
        for d in self.head:
            out |= {(a.predicate, a.arity) for a in d.atoms}
        return frozenset(out)


def plain_rule(body: Sequence[Atom], head_atom: Atom) -> Rule:
    """A non-disjunctive, non-existential rule body -> head_atom."""
    return Rule(tuple(body), (Disjunct(frozenset(), (head_atom,)),))


def falsum_rule(body: Sequence[Atom]) -> Rule:
    return Rule(tuple(body), ())


def is_plain(rule: Rule) -> bool:
    """True for rules with a single non-existential single-atom disjunct head."""
    return (
        len(rule.head) == 1
        and not rule.head[0].exists
        and len(rule.head[0].atoms) == 1
    )


def head_atom(rule: Rule) -> Atom:
    """The head atom of a plain rule."""
    if not is_plain(rule):
        raise ValueError("rule head is not a single plain atom")
    return rule.head[0].atoms[0]


# ======================================================================
# ABoxes, queries, rewritings, suites
# ======================================================================


@dataclass(frozen=True)
class ABox:
    """A finite set of ground atoms."""

    atoms: FrozenSet[Atom]

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", frozenset(self.atoms))
        for a in self.atoms:
            if not a.is_ground:
                raise ValueError(f"ABox atom is not ground: {a}")

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def constants(self) -> FrozenSet[str]:
        out: set = set()
        for a in self.atoms:
            out |= a.constants()
        return frozenset(out)

    def predicates(self) -> FrozenSet[Tuple[str, int]]:
        return frozenset((a.predicate, a.arity) for a in self.atoms)

    def sorted_atoms(self) -> Tuple[Atom, ...]:
        return tuple(sorted(self.atoms))


def abox(atoms: Iterable[Atom]) -> ABox:
    return ABox(frozenset(atoms))


@dataclass(frozen=True)
class UCQ:
    """A union of conjunctive queries over one query predicate.

    Each rule's head is a single atom Q(x1,...,xn) with distinct treatment
    left to consumers; a UCQ with no rules is a ground query shell (only its
    predicate identity matters, e.g. after instantiation produced ABox/query
    pairs).
    """

    predicate: str
    arity: int
    rules: Tuple[Rule, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", tuple(sorted(set(self.rules), key=lambda r: r.sort_key)))
        for r in self.rules:
            if not is_plain(r):
                raise ValueError("UCQ rules need single-atom plain heads")
            h = head_atom(r)
            if h.predicate != self.predicate or h.arity != self.arity:
                raise ValueError(
                    f"query head {h.predicate}/{h.arity} does not match "
                    f"declared {self.predicate}/{self.arity}"
                )

    def variables(self) -> FrozenSet[str]:
        out: set = set()
        for r in self.rules:
            out |= r.variables()
        return frozenset(out)

    def constants(self) -> FrozenSet[str]:
        out: set = set()
        for r in self.rules:
            out |= r.constants()
        return frozenset(out)


@dataclass(frozen=True)
class Rewriting:
    """Datalog rewriting of a query: data rules, bottom rules, query rules.

    data_rules derive ordinary facts, bottom_rules are falsum constraints,
    and query is a UCQ over the query predicate.  A UCQ-shaped rewriting has
    no data rules.
    """

    data_rules: Tuple[Rule, ...]
    bottom_rules: Tuple[Rule, ...]
    query: UCQ

    def __post_init__(self) -> None:
        object.__setattr__(self, "data_rules", tuple(self.data_rules))
        object.__setattr__(self, "bottom_rules", tuple(self.bottom_rules))
        for r in self.bottom_rules:
            if not r.is_falsum:
                raise ValueError("bottom rules must have falsum heads")
        for r in self.data_rules:
            if r.is_falsum:
                raise ValueError("data rules must not have falsum heads")
            for d in r.head:
                for a in d.atoms:
                    if a.predicate == self.query.predicate:
                        raise ValueError("data rules must not derive the query predicate")

    def all_rules(self) -> Tuple[Rule, ...]:
        return self.data_rules + self.bottom_rules + self.query.rules

    def variables(self) -> FrozenSet[str]:
        out: set = set()
        for r in self.all_rules():
            out |= r.variables()
        return frozenset(out)

    def constants(self) -> FrozenSet[str]:
        out: set = set()
        for r in self.all_rules():
            out |= r.constants()
        return frozenset(out)


@dataclass(frozen=True)
class TestSuite:
    """Unsatisfiability tests plus (ABox, query) tests.

    simple_for is set when every query test reuses one and the same query;
    such suites stay meaningful for reasoners that only ever see that query.
    """

    __test__ = False  # not a test class, despite the name

    unsat_tests: Tuple[ABox, ...]
    query_tests: Tuple[Tuple[ABox, UCQ], ...]
    simple_for: Optional[UCQ] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "unsat_tests", tuple(self.unsat_tests))
        object.__setattr__(self, "query_tests", tuple(self.query_tests))
        if self.simple_for is not None:
            for _, q in self.query_tests:
                if q != self.simple_for:
                    raise ValueError("simple_for set but query tests use several queries")


# ======================================================================
# Substitutions and renamings
# ======================================================================

# Substitutions map variable names to terms; renamings map constant names to
# constant names (not necessarily injectively).
Substitution = Mapping[str, Term]
Renaming = Mapping[str, str]


def substitute_term(t: Term, sigma: Substitution) -> Term:
    if t.is_var and t.name in sigma:
        return sigma[t.name]
    return t


def substitute_atom(a: Atom, sigma: Substitution) -> Atom:
    return Atom(a.predicate, tuple(substitute_term(t, sigma) for t in a.args))


def apply_substitution(rule: Rule, sigma: Substitution) -> Rule:
    """Apply sigma to a rule; existential variables are never substituted."""
    body = tuple(substitute_atom(a, sigma) for a in rule.body)
    head = []
    for d in rule.head:
        inner = {v: t for v, t in sigma.items() if v not in d.exists}
        head.append(Disjunct(d.exists, tuple(substitute_atom(a, inner) for a in d.atoms)))
    return Rule(body, tuple(head))


def compose_substitutions(first: Substitution, second: Substitution) -> Dict[str, Term]:
    """The substitution equivalent to applying first, then second."""
    out: Dict[str, Term] = {v: substitute_term(t, second) for v, t in first.items()}
    for v, t in second.items():
        if v not in out:
            out[v] = t
    return out


def rename_atom(a: Atom, mu: Renaming) -> Atom:
    args = tuple(
        Const(mu.get(t.name, t.name)) if t.is_const else t for t in a.args
    )
    return Atom(a.predicate, args)


def apply_renaming(box: ABox, mu: Renaming) -> ABox:
    """Apply an individual renaming to an ABox; may merge atoms."""
    return ABox(frozenset(rename_atom(a, mu) for a in box.atoms))


def rename_tuple(tup: Tuple[str, ...], mu: Renaming) -> Tuple[str, ...]:
    return tuple(mu.get(c, c) for c in tup)


# ======================================================================
# ABox isomorphism
# ======================================================================


def abox_isomorphic(
    left: ABox, right: ABox, fixed: FrozenSet[str] = frozenset()
) -> Optional[Dict[str, str]]:
    """A bijective renaming mapping left onto right, identity on fixed.

    Returns the witnessing renaming, or None.  Deterministic backtracking
    over the sorted atoms of left; cheap signature checks prune first.
    """
    if len(left) != len(right):
        return None
    left_sig = sorted((a.predicate, a.arity) for a in left.atoms)
    right_sig = sorted((a.predicate, a.arity) for a in right.atoms)
    if left_sig != right_sig:
        return None
    left_consts = left.constants()
    right_consts = right.constants()
    if len(left_consts) != len(right_consts):
        return None
    if left_consts & fixed != right_consts & fixed:
        return None

    # Most-constrained-first: try atoms with many distinct constants early.
    ordered = sorted(left.atoms, key=lambda a: (-len(a.constants()), a))
    right_atoms = sorted(right.atoms)

    def extend(mapping: Dict[str, str], used: FrozenSet[str], idx: int) -> Optional[Dict[str, str]]:
        if idx == len(ordered):
            return dict(mapping)
        atom = ordered[idx]
        for cand in right_atoms:
            if cand.predicate != atom.predicate or cand.arity != atom.arity:
                continue
            new_map = dict(mapping)
            new_used = set(used)
            ok = True
            for t, u in zip(atom.args, cand.args):
                src, dst = t.name, u.name
                if src in fixed and src != dst:
                    ok = False
                    break
                if dst in fixed and src != dst:
                    ok = False
                    break
                if src in new_map:
                    if new_map[src] != dst:
                        ok = False
                        break
                else:
                    if dst in new_used:
                        ok = False
                        break
                    new_map[src] = dst
                    new_used.add(dst)
            if not ok:
                continue
            result = extend(new_map, frozenset(new_used), idx + 1)
            if result is not None:
                return result
        return None

    mapping = extend({}, frozenset(), 0)
    if mapping is None:
        return None
    if apply_renaming(left, mapping) != right:
        return None
    return mapping


def query_isomorphic(left: UCQ, right: UCQ) -> bool:
    """Structural equality after canonical variable relabeling per rule."""
    if (left.predicate, left.arity) != (right.predicate, right.arity):
        return False
    if len(left.rules) != len(right.rules):
        return False
    return _canonical_rules(left) == _canonical_rules(right)


def _relabel_all_variables(rule: Rule, names: Mapping[str, str]) -> Rule:
    """Rename every variable, including existential ones, per names."""
    sigma = {v: Var(n) for v, n in names.items()}
    body = tuple(substitute_atom(a, sigma) for a in rule.body)
    head = []
    for d in rule.head:
        head.append(
            Disjunct(
                frozenset(names[v] for v in d.exists),
                tuple(substitute_atom(a, sigma) for a in d.atoms),
            )
        )
    return Rule(body, tuple(head))


def _refine_variable_colors(rule: Rule, colors: Dict[str, int]) -> Dict[str, int]:
    """One refinement round: variables are re-ranked by their old color plus
    the sorted multiset of their occurrences, where co-occurring terms are
    represented by their old colors (or constant names).  Ranks keep the
    color values small, so repeated rounds stay cheap."""
    occurrences: Dict[str, list] = {v: [] for v in colors}

    def visit(tag: str, atom: Atom) -> None:
        for i, t in enumerate(atom.args):
            if not t.is_var:
                continue
            context = tuple(
                (j, ("c", u.name) if u.is_const else ("v", colors[u.name]))
                for j, u in enumerate(atom.args)
                if j != i
            )
            occurrences[t.name].append((tag, atom.predicate, i, context))

    for atom in rule.body:
        visit("body", atom)
    for d in rule.head:
        for atom in d.atoms:
            visit("head", atom)
    keys = {v: (colors[v], tuple(sorted(occurrences[v]))) for v in colors}
    ranks = {key: i for i, key in enumerate(sorted(set(keys.values())))}
    return {v: ranks[keys[v]] for v in colors}


def canonical_variable_form(rule: Rule) -> Rule:
    """Relabel variables to v0, v1, ... so the result is a full alpha-invariant.

    Two rules differ only by a variable renaming exactly when their canonical
    forms are equal.  Variables are partitioned by iterated occurrence
    signatures (head positions of plain rules are pinned outright); only
    variables sharing a signature class need their label assignments tried
    exhaustively.  Should the class sizes make that search too large, a
    deterministic greedy labeling is used instead, which may distinguish
    some alpha-equivalent rules but never conflates inequivalent ones.
    """
    variables = sorted(rule.variables())
    if not variables:
        return rule
    # Head argument positions pin down head variables in any plain rule: an
    # alpha-renaming cannot move a variable between head positions.
    forced: Dict[str, str] = {}
    if is_plain(rule):
        for t in head_atom(rule).args:
            if t.is_var and t.name not in forced:
                forced[t.name] = f"v{len(forced)}"
    colors: Dict[str, int] = {
        v: int(forced[v][1:]) if v in forced else len(forced) for v in variables
    }
    for _ in range(len(variables)):
        refined = _refine_variable_colors(rule, colors)
        if len(set(refined.values())) == len(set(colors.values())):
            colors = refined
            break
        colors = refined
    classes: Dict[int, list] = {}
    for v in variables:
        if v not in forced:
            classes.setdefault(colors[v], []).append(v)
    ordered_classes = [sorted(classes[key]) for key in sorted(classes)]
    combinations = 1
    for cls in ordered_classes:
        for k in range(2, len(cls) + 1):
            combinations *= k
        if combinations > 5040:
            return _greedy_variable_form(rule)
    base = len(forced)
    offsets = []
    for cls in ordered_classes:
        offsets.append(base)
        base += len(cls)
    best: Optional[Rule] = None
    for perms in itertools.product(
        *(itertools.permutations(range(len(cls))) for cls in ordered_classes)
    ):
        names = dict(forced)
        for cls, offset, perm in zip(ordered_classes, offsets, perms):
            for v, k in zip(cls, perm):
                names[v] = f"v{offset + k}"
        candidate = _relabel_all_variables(rule, names)
        if best is None or candidate.sort_key < best.sort_key:
            best = candidate
    assert best is not None
    return best


def _greedy_variable_form(rule: Rule) -> Rule:
    order: Dict[str, str] = {}

    def visit(t: Term) -> None:
        if t.is_var and t.name not in order:
            order[t.name] = f"v{len(order):02d}"

    for d in rule.head:
        for a in d.atoms:
            for t in a.args:
                visit(t)
    for a in rule.body:
        for t in a.args:
            visit(t)
    return _relabel_all_variables(rule, order)


def _canonical_rules(q: UCQ) -> Tuple[Rule, ...]:
    return tuple(sorted((canonical_variable_form(r) for r in q.rules), key=lambda r: r.sort_key))


def all_constants(*pieces) -> FrozenSet[str]:
    """Union of constants over rules, ABoxes, queries, and rewritings."""
    out: set = set()
    for p in pieces:
        if p is None:
            continue
        if isinstance(p, (list, tuple, frozenset, set)):
            for item in p:
                out |= all_constants(item)
        else:
            out |= p.constants()
    return frozenset(out)
