"""Building completeness test suites from rewritings.

Four generators, all exhaustive for their target reasoner class:
  - full_instantiation grounds every rule body over the input individuals
    plus enough fresh ones, giving a suite whose passing guarantees
    completeness for arbitrary sound reasoners;
  - injective_instantiation_ucq grounds each rule once with pairwise
    distinct fresh individuals, enough for strongly faithful reasoners;
  - injective_instantiation_datalog additionally emits one auxiliary
    Boolean test per data rule, enough for fully faithful reasoners when
    the rewriting has data rules;
  - ground_instantiation covers all ground queries of a query-free
    rewriting.

validate_suite checks the defining suite invariants: unsatisfiability
tests really are inconsistent with the rule TBox and query-test ABoxes are
consistent.  save_suite/load_suite fix the on-disk layout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .chase import BudgetExceeded, ChaseBudget, DEFAULT_BUDGET, is_unsatisfiable
from .minimize import dedup_isomorphic
from .model import (
    ABox,
    Atom,
    Const,
    FRESH_PREFIX,
    QPRIME,
    Rewriting,
    Rule,
    Substitution,
    TestSuite,
    UCQ,
    abox,
    all_constants,
    plain_rule,
    substitute_atom,
)
from .syntax import parse_abox, parse_query, serialize_abox, serialize_query


@dataclass(frozen=True)
class InstantiationContext:
    """The individual pool an instantiation draws from."""

    fixed_individuals: Tuple[str, ...]
    fresh_pool: Tuple[str, ...]
    m: int

    def __post_init__(self) -> None:
        if set(self.fixed_individuals) & set(self.fresh_pool):
            raise ValueError("fresh pool overlaps the fixed individuals")

    @property
    def individuals(self) -> Tuple[str, ...]:
        return self.fixed_individuals + self.fresh_pool


def _fresh_names(count: int, taken: FrozenSet[str]) -> Tuple[str, ...]:
    out: List[str] = []
    counter = 0
    while len(out) < count:
        name = f"{FRESH_PREFIX}{counter}"
        counter += 1
        if name not in taken:
            out.append(name)
    return tuple(out)


def build_context(
    rewriting: Rewriting,
    tbox_rules: Sequence[Rule] = (),
    query: Optional[UCQ] = None,
) -> InstantiationContext:
    """Fixed individuals of rewriting, TBox, and query, plus m fresh ones,
    where m is the largest variable count of any rewriting rule."""
    fixed = sorted(all_constants(rewriting, tuple(tbox_rules), query))
    m = max((len(r.variables()) for r in rewriting.all_rules()), default=0)
    return InstantiationContext(tuple(fixed), _fresh_names(m, frozenset(fixed)), m)


def instantiation_abox(rule: Rule, sigma: Substitution) -> ABox:
    """The rule body under sigma, as a ground ABox."""
    for v in sorted(rule.body_variables()):
        if v not in sigma or not sigma[v].is_const:
            raise ValueError(f"instantiation leaves variable {v} unmapped")
    return abox(substitute_atom(a, sigma) for a in rule.body)


def _all_substitutions(rule: Rule, individuals: Sequence[str]):
    """Every assignment of the rule's variables to the individuals, in
    deterministic order (variables sorted, individuals as given)."""
    variables = sorted(rule.body_variables())
    for combo in itertools.product(individuals, repeat=len(variables)):
        yield {v: Const(c) for v, c in zip(variables, combo)}


def full_instantiation(
    rewriting: Rewriting,
    tbox_rules: Sequence[Rule] = (),
    budget: ChaseBudget = DEFAULT_BUDGET,
    query: Optional[UCQ] = None,
    dedup: bool = True,
) -> TestSuite:
    """Ground every rule body over all individuals; exhaustive for every
    sound reasoner.

    The suite pairs each test with `query` (the query the reasoner under
    test will be asked), defaulting to the rewriting's own query part.
    Isomorphic tests are deduplicated unless dedup is False.
    """
    if rewriting.data_rules:
        raise ValueError("full instantiation needs a rewriting without data rules")
    context = build_context(rewriting, tbox_rules, query)
    paired = query if query is not None else rewriting.query

    unsat_tests: List[ABox] = []
    seen_unsat: set = set()
    for rule in rewriting.bottom_rules:
        for sigma in _all_substitutions(rule, context.individuals):
            box = instantiation_abox(rule, sigma)
            if box not in seen_unsat:
                seen_unsat.add(box)
                unsat_tests.append(box)
    query_tests: List[Tuple[ABox, UCQ]] = []
    seen_query: set = set()
    for rule in rewriting.query.rules:
        for sigma in _all_substitutions(rule, context.individuals):
            box = instantiation_abox(rule, sigma)
            if box in seen_query:
                continue
            seen_query.add(box)
            if is_unsatisfiable(rewriting.bottom_rules, box, budget):
                continue
            query_tests.append((box, paired))
    suite = TestSuite(tuple(unsat_tests), tuple(query_tests), paired)
    if dedup:
        suite = dedup_isomorphic(suite, frozenset(context.fixed_individuals))
    return suite


def _injective_lambda(rule: Rule, counter: List[int], taken: FrozenSet[str]) -> Substitution:
    """Map the rule's body variables to globally distinct fresh constants,
    in first-occurrence order over the canonical body."""
    sigma: Dict = {}
    for atom in rule.body:
        for t in atom.args:
            if t.is_var and t.name not in sigma:
                while True:
                    name = f"{FRESH_PREFIX}{counter[0]}"
                    counter[0] += 1
                    if name not in taken:
                        break
                sigma[t.name] = Const(name)
    return sigma


def injective_instantiation_ucq(
    rewriting: Rewriting,
    budget: ChaseBudget = DEFAULT_BUDGET,
    query: Optional[UCQ] = None,
) -> TestSuite:
    """One test per rule, variables frozen to pairwise distinct fresh
    individuals; exhaustive for sound, strongly faithful reasoners."""
    if rewriting.data_rules:
        raise ValueError("injective UCQ instantiation needs a rewriting without data rules")
    paired = query if query is not None else rewriting.query
    taken = frozenset(all_constants(rewriting, paired))
    counter = [0]
    unsat_tests: List[ABox] = []
    for rule in rewriting.bottom_rules:
        unsat_tests.append(instantiation_abox(rule, _injective_lambda(rule, counter, taken)))
    query_tests: List[Tuple[ABox, UCQ]] = []
    for rule in rewriting.query.rules:
        box = instantiation_abox(rule, _injective_lambda(rule, counter, taken))
        if is_unsatisfiable(rewriting.bottom_rules, box, budget):
            continue
        query_tests.append((box, paired))
    return TestSuite(tuple(unsat_tests), tuple(query_tests), paired)


def _head_entailment_query(rule: Rule, sigma: Substitution) -> UCQ:
    """A Boolean query asking whether some head disjunct of the frozen rule
    holds: one conjunct set per disjunct, existential variables left free."""
    rules = []
    for d in rule.head:
        inner = {v: t for v, t in sigma.items() if v not in d.exists}
        body = tuple(substitute_atom(a, inner) for a in d.atoms)
        rules.append(plain_rule(body, Atom(QPRIME, ())))
    return UCQ(QPRIME, 0, tuple(rules))


def injective_instantiation_datalog(
    rewriting: Rewriting,
    query: UCQ,
    budget: ChaseBudget = DEFAULT_BUDGET,
) -> TestSuite:
    """Injective instantiation of a rewriting with data rules.

    Bottom rules become unsatisfiability tests.  Query rules pair their
    frozen body with the original query.  Each data rule pairs its frozen
    body with a Boolean head-entailment query over the reserved nullary
    predicate; a reasoner passing those must reproduce every data-rule
    consequence.  Query and data tests are dropped when the frozen body is
    already inconsistent with the data and bottom rules.
    """
    taken = frozenset(all_constants(rewriting, query))
    counter = [0]
    consistency_rules = rewriting.data_rules + rewriting.bottom_rules
    unsat_tests: List[ABox] = []
    for rule in rewriting.bottom_rules:
        unsat_tests.append(instantiation_abox(rule, _injective_lambda(rule, counter, taken)))
    query_tests: List[Tuple[ABox, UCQ]] = []
    for rule in rewriting.query.rules:
        box = instantiation_abox(rule, _injective_lambda(rule, counter, taken))
        if is_unsatisfiable(consistency_rules, box, budget):
            continue
        query_tests.append((box, query))
    plain_only = not rewriting.data_rules
    for rule in rewriting.data_rules:
        sigma = _injective_lambda(rule, counter, taken)
        box = instantiation_abox(rule, sigma)
        if is_unsatisfiable(consistency_rules, box, budget):
            continue
        query_tests.append((box, _head_entailment_query(rule, sigma)))
    simple_for = query if plain_only else None
    return TestSuite(tuple(unsat_tests), tuple(query_tests), simple_for)


def ground_instantiation(
    rewriting: Rewriting, budget: ChaseBudget = DEFAULT_BUDGET
) -> TestSuite:
    """Suite for a query-free rewriting; covers every ground query.

    Requires an empty query part and existential-free data rules, so every
    generated head-entailment query is ground.
    """
    if rewriting.query.rules:
        raise ValueError("ground instantiation needs an empty query part")
    for rule in rewriting.data_rules:
        for d in rule.head:
            if d.exists:
                raise ValueError(
                    "ground instantiation needs existential-free data rule heads"
                )
    empty_query = UCQ(rewriting.query.predicate, rewriting.query.arity, ())
    return injective_instantiation_datalog(rewriting, empty_query, budget)


# ----------------------------------------------------------------------
# Suite validation
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    """Which tests violate the suite invariants.

    sat_unsat_tests lists indices of unsatisfiability tests whose ABox is
    consistent with the TBox; unsat_query_tests lists indices of query
    tests whose ABox is inconsistent; inconclusive lists (kind, index)
    pairs where the check exceeded its budget.
    """

    sat_unsat_tests: Tuple[int, ...]
    unsat_query_tests: Tuple[int, ...]
    inconclusive: Tuple[Tuple[str, int], ...]

    @property
    def ok(self) -> bool:
        return not self.sat_unsat_tests and not self.unsat_query_tests and not self.inconclusive


def validate_suite(
    suite: TestSuite,
    tbox_rules: Sequence[Rule],
    budget: ChaseBudget = DEFAULT_BUDGET,
) -> ValidationReport:
    rules = tuple(tbox_rules)
    sat_unsat: List[int] = []
    unsat_query: List[int] = []
    inconclusive: List[Tuple[str, int]] = []
    for i, box in enumerate(suite.unsat_tests):
        try:
            if not is_unsatisfiable(rules, box, budget):
                sat_unsat.append(i)
        except BudgetExceeded:
            inconclusive.append(("unsat", i))
    for i, (box, _) in enumerate(suite.query_tests):
        try:
            if is_unsatisfiable(rules, box, budget):
                unsat_query.append(i)
        except BudgetExceeded:
            inconclusive.append(("test", i))
    return ValidationReport(tuple(sat_unsat), tuple(unsat_query), tuple(inconclusive))


# ----------------------------------------------------------------------
# Suite directory layout
# ----------------------------------------------------------------------


def save_suite(suite: TestSuite, directory: Path) -> None:
    """Write the suite as a directory: manifest.txt, .abox and .q files.

    Layout is bit-exact for a given suite: a Q-simple suite shares one
    query.q, other suites write one query file per test.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lines: List[str] = []
    if suite.simple_for is not None:
        (directory / "query.q").write_text(serialize_query(suite.simple_for))
        lines.append("simple_for query.q")
    else:
        lines.append("simple_for none")
    for i, box in enumerate(suite.unsat_tests):
        name = f"unsat_{i:03d}.abox"
        (directory / name).write_text(serialize_abox(box))
        lines.append(f"unsat {name}")
    for i, (box, q) in enumerate(suite.query_tests):
        abox_name = f"test_{i:03d}.abox"
        (directory / abox_name).write_text(serialize_abox(box))
        if suite.simple_for is not None:
            query_name = "query.q"
        else:
            query_name = f"test_{i:03d}.q"
            (directory / query_name).write_text(serialize_query(q))
        lines.append(f"test {abox_name} {query_name}")
    (directory / "manifest.txt").write_text("".join(line + "\n" for line in lines))


def load_suite(directory: Path) -> TestSuite:
    directory = Path(directory)
    manifest = directory / "manifest.txt"
    if not manifest.is_file():
        raise FileNotFoundError(f"no manifest.txt in {directory}")
    lines = manifest.read_text().splitlines()
    if not lines or not lines[0].startswith("simple_for "):
        raise ValueError("manifest must start with a simple_for line")
    simple_name = lines[0][len("simple_for ") :].strip()
    queries: Dict[str, UCQ] = {}

    def query_of(name: str) -> UCQ:
        if name not in queries:
            queries[name] = parse_query((directory / name).read_text(), allow_fresh=True)
        return queries[name]

    simple_for = None if simple_name == "none" else query_of(simple_name)
    unsat_tests: List[ABox] = []
    query_tests: List[Tuple[ABox, UCQ]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "unsat" and len(parts) == 2:
            unsat_tests.append(parse_abox((directory / parts[1]).read_text(), allow_fresh=True))
        elif parts[0] == "test" and len(parts) == 3:
            box = parse_abox((directory / parts[1]).read_text(), allow_fresh=True)
            query_tests.append((box, query_of(parts[2])))
        else:
            raise ValueError(f"manifest.txt line {lineno}: cannot parse {line!r}")
    return TestSuite(tuple(unsat_tests), tuple(query_tests), simple_for)
