"""Completeness test suites for ontology query reasoners.

Build datalog rewritings of a query and TBox into exhaustive test suites,
run the suites against pluggable reasoners to certify or refute
completeness, search unfoldings for concrete incompleteness witnesses, and
compare incomplete reasoners over representative ABox sets.
"""

from .chase import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    ChaseBudget,
    ModelSet,
    VerificationReport,
    body_matches,
    certain_answers,
    entails_rule,
    is_unsatisfiable,
    saturate,
    verify_rewriting,
    with_equality_axioms,
)
from .compare import AboxComparison, CompareReport, compare_on, representative_set
from .harness import (
    EXIT_CODES,
    GUARANTEED_COMPLETE,
    INCONCLUSIVE_VERDICT,
    NOT_COMPLETE,
    NOT_GUARANTEED,
    CounterexampleWitness,
    SuiteReport,
    TestOutcome,
    ground_verdict,
    incompleteness_search,
    run_suite,
)
from .instantiate import (
    full_instantiation,
    ground_instantiation,
    injective_instantiation_datalog,
    injective_instantiation_ucq,
    load_suite,
    save_suite,
    validate_suite,
)
from .minimize import condense, dedup_isomorphic, minimize_rules, minimize_ucq, subsumes
from .model import (
    EQ,
    NEQ,
    QPRIME,
    ABox,
    Atom,
    Const,
    Disjunct,
    Rewriting,
    Rule,
    TestSuite,
    UCQ,
    Var,
    abox,
    abox_isomorphic,
    all_constants,
    canonical_variable_form,
    falsum_rule,
    plain_rule,
)
from .reasoners import (
    BUILTIN_NAMES,
    COMPACT,
    FO_REPRODUCIBLE,
    INCONCLUSIVE,
    MONOTONIC,
    PROPERTIES,
    SOUND,
    STRONGLY_FAITHFUL,
    WEAKLY_FAITHFUL,
    ExternalReasonerError,
    PropertyCounterexample,
    PropertyReport,
    ReasonerHandle,
    atomic_subsumptions,
    builtin,
    classify_reasoner,
    external,
    peval_reasoner,
    program_reasoner,
    property_spotcheck,
    rdf_reasoner,
    rdfs_reasoner,
    rl_neq_reasoner,
    rl_reasoner,
    trivial_reasoner,
)
from .syntax import (
    SyntaxProblem,
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
from .unfold import (
    exhaustive_unfold,
    subset_closed_rewriting,
    unfold_closure,
    unfold_levels,
    unfold_step,
)

__version__ = "0.1.0"

__all__ = [
    "ABox",
    "AboxComparison",
    "Atom",
    "BUILTIN_NAMES",
    "BudgetExceeded",
    "COMPACT",
    "ChaseBudget",
    "CompareReport",
    "Const",
    "CounterexampleWitness",
    "DEFAULT_BUDGET",
    "Disjunct",
    "EQ",
    "EXIT_CODES",
    "ExternalReasonerError",
    "FO_REPRODUCIBLE",
    "GUARANTEED_COMPLETE",
    "INCONCLUSIVE",
    "INCONCLUSIVE_VERDICT",
    "MONOTONIC",
    "ModelSet",
    "NEQ",
    "NOT_COMPLETE",
    "NOT_GUARANTEED",
    "PROPERTIES",
    "PropertyCounterexample",
    "PropertyReport",
    "QPRIME",
    "ReasonerHandle",
    "Rewriting",
    "Rule",
    "SOUND",
    "STRONGLY_FAITHFUL",
    "SuiteReport",
    "SyntaxProblem",
    "TestOutcome",
    "TestSuite",
    "UCQ",
    "Var",
    "VerificationReport",
    "WEAKLY_FAITHFUL",
    "abox",
    "abox_isomorphic",
    "all_constants",
    "atomic_subsumptions",
    "body_matches",
    "builtin",
    "canonical_variable_form",
    "certain_answers",
    "classify_reasoner",
    "compare_on",
    "condense",
    "dedup_isomorphic",
    "entails_rule",
    "exhaustive_unfold",
    "external",
    "falsum_rule",
    "flatten_translation",
    "full_instantiation",
    "ground_instantiation",
    "ground_verdict",
    "incompleteness_search",
    "injective_instantiation_datalog",
    "injective_instantiation_ucq",
    "is_unsatisfiable",
    "load_suite",
    "minimize_rules",
    "minimize_ucq",
    "parse_abox",
    "parse_dl",
    "parse_query",
    "parse_rewriting",
    "parse_rules",
    "peval_reasoner",
    "plain_rule",
    "program_reasoner",
    "property_spotcheck",
    "rdf_reasoner",
    "rdfs_reasoner",
    "representative_set",
    "rl_neq_reasoner",
    "rl_reasoner",
    "run_suite",
    "saturate",
    "save_suite",
    "serialize_abox",
    "serialize_query",
    "serialize_rewriting",
    "serialize_rule",
    "serialize_rules",
    "subset_closed_rewriting",
    "subsumes",
    "translate_dl",
    "trivial_reasoner",
    "unfold_closure",
    "unfold_levels",
    "unfold_step",
    "validate_suite",
    "verify_rewriting",
    "with_equality_axioms",
]
