"""Command-line interface tying the toolkit pipeline together.

Subcommands cover ontology translation (.dl to .rules), reference
certain-answer queries, rewriting verification, test-suite instantiation,
rewriting minimization, unfolding, suite execution against a reasoner,
bounded incompleteness search, reasoner comparison over ABox sets, and
randomized property spot-checks.

Common flags (chase budgets, seed, output directory, format) can also be
set in a certkit.toml file in the working directory; command-line values
win over the file and the file wins over built-in defaults.  All output
is deterministic for fixed inputs and seed.
"""

from __future__ import annotations

import argparse
import os
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib  # type: ignore[no-redef]
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .chase import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    ChaseBudget,
    certain_answers,
    entails_rule,
    is_unsatisfiable,
    verify_rewriting,
    with_equality_axioms,
)
from .compare import compare_on, representative_set
from .harness import (
    EXIT_CODES,
    INCONCLUSIVE_VERDICT,
    NOT_COMPLETE,
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
)
from .minimize import minimize_ucq
from .model import ABox, Atom, Rewriting, Rule, UCQ, Var, plain_rule
from .reasoners import (
    COMPACT,
    STRONGLY_FAITHFUL,
    ExternalReasonerError,
    PropertyReport,
    ReasonerHandle,
    builtin,
    external,
    property_spotcheck,
)
from .syntax import (
    SyntaxProblem,
    flatten_translation,
    parse_abox,
    parse_dl,
    parse_query,
    parse_rewriting,
    parse_rules,
    serialize_rewriting,
    serialize_rule,
    serialize_rules,
    translate_dl,
)
from .unfold import exhaustive_unfold, subset_closed_rewriting, unfold_closure

# ----------------------------------------------------------------------
# Exit codes and settings
# ----------------------------------------------------------------------

EXIT_USAGE = 64
EXIT_DATA = 65

_DEFAULTS: Dict[str, object] = {
    "budget_fresh": DEFAULT_BUDGET.max_fresh_individuals,
    "budget_branches": DEFAULT_BUDGET.max_branches,
    "budget_rounds": DEFAULT_BUDGET.max_rounds,
    "seed": 0,
    "format": "text",
    "jobs": os.cpu_count() or 1,
    "timeout": 60.0,
}


class UsageError(Exception):
    """A problem with how the command was invoked; exits with code 64."""


@dataclass(frozen=True)
class _Settings:
    """Resolved common options for one invocation."""

    budget: ChaseBudget
    seed: int
    format: str
    jobs: int
    timeout: float
    out: Optional[Path]


def _load_config(path: Optional[Path]) -> Dict[str, object]:
    """certkit.toml contents, {} when absent; unknown keys are errors."""
    candidate = path if path is not None else Path("certkit.toml")
    if not candidate.is_file():
        if path is not None:
            raise UsageError(f"config file not found: {path}")
        return {}
    try:
        data = tomllib.loads(candidate.read_text())
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"bad config file {candidate}: {exc}") from exc
    out: Dict[str, object] = {}
    for key, value in data.items():
        name = key.replace("-", "_")
        if name not in _DEFAULTS:
            raise UsageError(f"unknown config key {key!r} in {candidate}")
        out[name] = value
    return out


def _resolve_settings(args: argparse.Namespace, config: Dict[str, object]) -> _Settings:
    def pick(name: str) -> object:
        value = getattr(args, name, None)
        if value is None:
            value = config.get(name, _DEFAULTS[name])
        return value

    def pick_int(name: str) -> int:
        value = pick(name)
        if isinstance(value, bool) or not isinstance(value, int):
            raise UsageError(f"{name.replace('_', '-')} must be an integer")
        return value

    fmt = pick("format")
    if fmt not in ("text", "tsv"):
        raise UsageError("format must be 'text' or 'tsv'")
    timeout = pick("timeout")
    if not isinstance(timeout, (int, float)) or isinstance(timeout, bool) or timeout <= 0:
        raise UsageError("timeout must be a positive number of seconds")
    jobs = pick_int("jobs")
    if jobs <= 0:
        raise UsageError("jobs must be positive")
    try:
        budget = ChaseBudget(
            max_fresh_individuals=pick_int("budget_fresh"),
            max_branches=pick_int("budget_branches"),
            max_rounds=pick_int("budget_rounds"),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = getattr(args, "out", None)
    return _Settings(
        budget=budget,
        seed=pick_int("seed"),
        format=str(fmt),
        jobs=jobs,
        timeout=float(timeout),
        out=Path(out) if out is not None else None,
    )


# ----------------------------------------------------------------------
# Small helpers
# ----------------------------------------------------------------------


def _read(path: Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise SyntaxProblem(f"cannot read {path}: {exc.strerror or exc}") from exc


def _artifact(settings: _Settings, name: str, text: str) -> None:
    """Write an output file under --out, creating the directory if needed."""
    if settings.out is None:
        return
    settings.out.mkdir(parents=True, exist_ok=True)
    (settings.out / name).write_text(text)


def _tuple_line(t: Tuple[str, ...]) -> str:
    return ("()" if not t else ",".join(t)) + "\n"


def reasoner_from_spec(spec: str, budget: ChaseBudget, timeout: float) -> ReasonerHandle:
    """A reasoner handle from builtin:<name>[:<params>], program:<file>,
    or exec:<command template>."""
    kind, sep, rest = spec.partition(":")
    if not sep or not rest:
        raise UsageError(
            f"bad reasoner spec {spec!r}; expected builtin:<name>[:<params>], "
            "program:<file>, or exec:<command>"
        )
    if kind == "builtin":
        parts = rest.split(":")
        try:
            return builtin(parts[0], tuple(parts[1:]), budget=budget)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if kind == "program":
        try:
            return builtin("program", (rest,), budget=budget)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if kind == "exec":
        return external(rest, timeout=timeout)
    raise UsageError(f"unknown reasoner kind {kind!r}; expected builtin, program, or exec")


# ----------------------------------------------------------------------
# Subcommand handlers
# ----------------------------------------------------------------------


def _cmd_translate(args: argparse.Namespace, settings: _Settings) -> int:
    groups = translate_dl(parse_dl(_read(args.dl)))
    text = serialize_rules(flatten_translation(groups))
    sys.stdout.write(text)
    _artifact(settings, "translated.rules", text)
    return 0


def _cmd_cert(args: argparse.Namespace, settings: _Settings) -> int:
    program = parse_rules(_read(args.program), allow_fresh=True)
    box = parse_abox(_read(args.abox), allow_fresh=True)
    query = parse_query(_read(args.query), allow_fresh=True)
    # The program may define the query predicate itself (a rewriting does),
    # so probe for its facts under program plus query rules.
    head = Atom(query.predicate, tuple(Var(f"x{i}") for i in range(query.arity)))
    probe = UCQ(query.predicate, query.arity, (plain_rule((head,), head),))
    rules = with_equality_axioms(program + query.rules, box)
    if is_unsatisfiable(rules, box, settings.budget):
        text = "unsat\n"
    else:
        answers = certain_answers(probe, rules, box, settings.budget)
        text = "".join(_tuple_line(t) for t in sorted(answers))
    sys.stdout.write(text)
    _artifact(settings, "answers.txt", text)
    return 0


def _cmd_verify_rewriting(args: argparse.Namespace, settings: _Settings) -> int:
    rewriting = parse_rewriting(_read(args.rewriting), allow_fresh=True)
    tbox = parse_rules(_read(args.tbox), allow_fresh=True)
    report = verify_rewriting(rewriting, tbox, settings.budget)
    entailed = list(report.entailed)
    failed = list(report.failed)
    inconclusive = list(report.inconclusive)
    if args.query is not None:
        theory = tbox + parse_query(_read(args.query), allow_fresh=True).rules
        for rule in rewriting.query.rules:
            try:
                if entails_rule(theory, rule, settings.budget):
                    entailed.append(rule)
                else:
                    failed.append(rule)
            except BudgetExceeded:
                inconclusive.append(rule)
    sep = "\t" if settings.format == "tsv" else " "
    lines: List[str] = []
    for note in report.structural_notes:
        lines.append(f"note{sep}{note}")
    for label, rules in (
        ("entailed", entailed),
        ("failed", failed),
        ("inconclusive", inconclusive),
    ):
        for rule in rules:
            lines.append(f"{label}{sep}{serialize_rule(rule)}")
    if failed or report.structural_notes:
        verdict, code = "failed", 1
    elif inconclusive:
        verdict, code = "inconclusive", EXIT_CODES[INCONCLUSIVE_VERDICT]
    else:
        verdict, code = "ok", 0
    lines.append(f"verdict{sep}{verdict}")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    _artifact(settings, "verification.txt", text)
    return code


def _cmd_instantiate(args: argparse.Namespace, settings: _Settings) -> int:
    if settings.out is None:
        raise UsageError("instantiate writes a suite directory; --out DIR is required")
    rewriting = parse_rewriting(_read(args.rewriting), allow_fresh=True)
    query = parse_query(_read(args.query), allow_fresh=True) if args.query else None
    tbox = parse_rules(_read(args.tbox), allow_fresh=True) if args.tbox else ()
    if args.mode == "full":
        suite = full_instantiation(
            rewriting, tbox, settings.budget, query=query, dedup=not args.no_dedup
        )
    elif args.mode == "injective":
        suite = injective_instantiation_ucq(rewriting, settings.budget, query=query)
    elif args.mode == "datalog":
        if query is None:
            raise UsageError("--mode datalog requires --query for the paired tests")
        suite = injective_instantiation_datalog(rewriting, query, settings.budget)
    else:
        suite = ground_instantiation(rewriting, settings.budget)
    save_suite(suite, settings.out)
    sys.stdout.write(
        f"{len(suite.unsat_tests)} unsatisfiability tests, "
        f"{len(suite.query_tests)} query tests -> {settings.out}\n"
    )
    return 0


def _cmd_minimize(args: argparse.Namespace, settings: _Settings) -> int:
    rewriting = parse_rewriting(_read(args.rewriting), allow_fresh=True)
    text = serialize_rewriting(minimize_ucq(rewriting))
    sys.stdout.write(text)
    _artifact(settings, "minimized.rules", text)
    return 0


def _cmd_unfold(args: argparse.Namespace, settings: _Settings) -> int:
    bound = args.bound if args.bound is not None else 256
    if args.subset_closed:
        if args.query is None:
            raise UsageError("--subset-closed requires --query")
        if args.dl is not None:
            groups: List[Sequence[Rule]] = [
                g.rules for g in translate_dl(parse_dl(_read(args.dl)))
            ]
        elif args.tbox is not None:
            groups = [(r,) for r in parse_rules(_read(args.tbox))]
        else:
            raise UsageError("--subset-closed requires --dl or --tbox for the axioms")
        query = parse_query(_read(args.query), allow_fresh=True)
        result = subset_closed_rewriting(groups, query, bound=bound)
        closed = True
    else:
        if args.rewriting is None:
            raise UsageError("unfold requires --rewriting (or --subset-closed inputs)")
        rewriting = parse_rewriting(_read(args.rewriting), allow_fresh=True)
        query, q_closed = exhaustive_unfold(rewriting.data_rules, rewriting.query, bound)
        bottoms, b_closed = unfold_closure(
            rewriting.data_rules, rewriting.bottom_rules, bound
        )
        result = Rewriting((), tuple(bottoms), query)
        closed = q_closed and b_closed
    text = serialize_rewriting(result)
    sys.stdout.write(text)
    _artifact(settings, "unfolded.rules", text)
    if not closed:
        print(
            f"unfolding truncated at {bound} rules; the output is incomplete",
            file=sys.stderr,
        )
        return 1
    return 0


def _basis_rules(args: argparse.Namespace) -> Tuple[Tuple[Rule, ...], str]:
    """The certain-answer basis from --tbox or --rewriting, with its label."""
    if getattr(args, "tbox", None) is not None:
        return parse_rules(_read(args.tbox), allow_fresh=True), Path(args.tbox).name
    if getattr(args, "rewriting", None) is not None:
        rewriting = parse_rewriting(_read(args.rewriting), allow_fresh=True)
        return rewriting.all_rules(), Path(args.rewriting).name
    raise UsageError("either --tbox or --rewriting is required")


def _cmd_run(args: argparse.Namespace, settings: _Settings) -> int:
    suite = load_suite(args.suite)
    handle = reasoner_from_spec(args.reasoner, settings.budget, settings.timeout)
    basis, basis_name = _basis_rules(args)
    runner = ground_verdict if args.ground else run_suite
    report = runner(handle, basis, suite, budget=settings.budget, cert_basis=basis_name)
    text = report.to_text() if settings.format == "text" else report.to_tsv()
    sys.stdout.write(text)
    _artifact(settings, "report.tsv", report.to_tsv())
    return report.exit_code


def _cmd_search(args: argparse.Namespace, settings: _Settings) -> int:
    handle = reasoner_from_spec(args.reasoner, settings.budget, settings.timeout)
    rewriting = parse_rewriting(_read(args.rewriting), allow_fresh=True)
    if args.tbox is not None:
        basis = parse_rules(_read(args.tbox), allow_fresh=True)
    else:
        basis = rewriting.all_rules()
    witness = incompleteness_search(
        handle,
        rewriting.data_rules,
        rewriting.query,
        basis,
        max_depth=args.max_depth,
        budget=settings.budget,
    )
    if witness is None:
        text = f"no counterexample found up to unfolding depth {args.max_depth}\n"
        sys.stdout.write(text)
        _artifact(settings, "witness.txt", text)
        return EXIT_CODES[INCONCLUSIVE_VERDICT]
    text = witness.describe() + "\n"
    sys.stdout.write(text)
    _artifact(settings, "witness.txt", text)
    return EXIT_CODES[NOT_COMPLETE]


def _cmd_compare(args: argparse.Namespace, settings: _Settings) -> int:
    first = reasoner_from_spec(args.first, settings.budget, settings.timeout)
    second = reasoner_from_spec(args.second, settings.budget, settings.timeout)
    query = parse_query(_read(args.query), allow_fresh=True)
    tbox = parse_rules(_read(args.tbox), allow_fresh=True)
    if args.aboxes is not None:
        paths = sorted(Path(args.aboxes).glob("*.abox"))
        if not paths:
            raise SyntaxProblem(f"no .abox files in {args.aboxes}")
        boxes: Sequence[ABox] = [parse_abox(_read(p), allow_fresh=True) for p in paths]
        scope = "conclusions hold for the supplied ABox set"
    elif args.rewriting is not None:
        rewriting = parse_rewriting(_read(args.rewriting), allow_fresh=True)
        boxes = representative_set(rewriting, query, tbox, budget=settings.budget)
        strong = all(
            COMPACT in h.claims and STRONGLY_FAITHFUL in h.claims
            for h in (first, second)
        )
        scope = (
            "representative set: conclusions extend to every ABox"
            if strong
            else "representative set; conclusions extend to every ABox only for "
            "compact, strongly faithful reasoners"
        )
    else:
        raise UsageError("either --aboxes DIR or --rewriting FILE is required")
    report = compare_on(
        boxes, query, tbox, first, second, budget=settings.budget, scope_note=scope
    )
    text = report.to_text() if settings.format == "text" else report.to_tsv()
    sys.stdout.write(text)
    _artifact(settings, "compare.tsv", report.to_tsv())
    return 0 if report.leq is not None else EXIT_CODES[INCONCLUSIVE_VERDICT]


def _spotcheck_lines(report: PropertyReport, sep: str) -> List[str]:
    lines = [
        f"reasoner{sep}{report.reasoner}",
        f"trials{sep}{report.trials} ({report.inconclusive_trials} inconclusive)",
    ]
    found = {c.property: c for c in report.counterexamples}
    for prop in report.checked:
        if prop in found:
            c = found[prop]
            lines.append(f"{prop}{sep}violated{sep}{c.abox}{sep}{c.detail}")
        else:
            lines.append(f"{prop}{sep}ok")
    lines.append(f"verdict{sep}{'ok' if report.ok else 'violations found'}")
    return lines


def _cmd_spotcheck(args: argparse.Namespace, settings: _Settings) -> int:
    handle = reasoner_from_spec(args.reasoner, settings.budget, settings.timeout)
    query = parse_query(_read(args.query), allow_fresh=True)
    tbox = parse_rules(_read(args.tbox), allow_fresh=True)
    report = property_spotcheck(
        handle,
        query,
        tbox,
        trials=args.trials,
        seed=settings.seed,
        budget=settings.budget,
    )
    sep = "\t" if settings.format == "tsv" else ": "
    text = "\n".join(_spotcheck_lines(report, sep)) + "\n"
    sys.stdout.write(text)
    _artifact(settings, "spotcheck.txt", text)
    return 0 if report.ok else 1


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """argparse with BSD-style usage exit code."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("common options")
    g.add_argument("--budget-fresh", type=int, metavar="N",
                   help="cap on fresh individuals per chase run (default 64)")
    g.add_argument("--budget-branches", type=int, metavar="N",
                   help="cap on disjunctive chase branches (default 256)")
    g.add_argument("--budget-rounds", type=int, metavar="N",
                   help="cap on chase rounds (default 1024)")
    g.add_argument("--seed", type=int, metavar="N",
                   help="seed for randomized commands (default 0)")
    g.add_argument("--out", type=Path, metavar="DIR",
                   help="directory for output artifacts (default: stdout only)")
    g.add_argument("--format", choices=("text", "tsv"),
                   help="report format on stdout (default text)")
    g.add_argument("--jobs", type=int, metavar="N",
                   help="worker pool size; accepted for compatibility, "
                        "execution is sequential")
    g.add_argument("--timeout", type=float, metavar="SECONDS",
                   help="external reasoner call timeout (default 60)")
    g.add_argument("--config", type=Path, metavar="FILE",
                   help="settings file (default ./certkit.toml when present)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _Parser(
        prog="certkit",
        description="Completeness test suites for ontology query reasoners.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    p = sub.add_parser("translate", parents=[common],
                       help="translate .dl axioms to .rules")
    p.add_argument("--dl", type=Path, required=True, metavar="FILE")

    p = sub.add_parser("cert", parents=[common],
                       help="certain answers under the reference engine")
    p.add_argument("--program", type=Path, required=True, metavar="FILE")
    p.add_argument("--abox", type=Path, required=True, metavar="FILE")
    p.add_argument("--query", type=Path, required=True, metavar="FILE")

    p = sub.add_parser("verify-rewriting", parents=[common],
                       help="check a rewriting's rules against a rule TBox")
    p.add_argument("--rewriting", type=Path, required=True, metavar="FILE")
    p.add_argument("--tbox", type=Path, required=True, metavar="FILE")
    p.add_argument("--query", type=Path, metavar="FILE",
                   help="also check query rules against TBox plus original query")

    p = sub.add_parser("instantiate", parents=[common],
                       help="build a test suite from a rewriting")
    p.add_argument("--mode", required=True,
                   choices=("full", "injective", "datalog", "ground"))
    p.add_argument("--rewriting", type=Path, required=True, metavar="FILE")
    p.add_argument("--query", type=Path, metavar="FILE",
                   help="original query to pair with the generated ABoxes")
    p.add_argument("--tbox", type=Path, metavar="FILE",
                   help="TBox whose constants join the grounding pool (full mode)")
    p.add_argument("--no-dedup", action="store_true",
                   help="keep isomorphic duplicates in full mode")

    p = sub.add_parser("minimize", parents=[common],
                       help="drop subsumed CQs from a rewriting")
    p.add_argument("--rewriting", type=Path, required=True, metavar="FILE")

    p = sub.add_parser("unfold", parents=[common],
                       help="unfold data rules away, or build a subset-closed rewriting")
    p.add_argument("--rewriting", type=Path, metavar="FILE")
    p.add_argument("--bound", type=int, metavar="N",
                   help="rule-count bound for the closure (default 256)")
    p.add_argument("--subset-closed", action="store_true",
                   help="union of rewritings over every axiom subset")
    p.add_argument("--dl", type=Path, metavar="FILE",
                   help="axioms for --subset-closed, grouped per axiom")
    p.add_argument("--tbox", type=Path, metavar="FILE",
                   help="rules for --subset-closed, one group per rule")
    p.add_argument("--query", type=Path, metavar="FILE")

    p = sub.add_parser("run", parents=[common],
                       help="run a suite against a reasoner and report a verdict")
    p.add_argument("--suite", type=Path, required=True, metavar="DIR")
    p.add_argument("--reasoner", required=True, metavar="SPEC",
                   help="builtin:<name>[:<params>], program:<file>, or exec:<command>")
    p.add_argument("--tbox", type=Path, metavar="FILE")
    p.add_argument("--rewriting", type=Path, metavar="FILE")
    p.add_argument("--ground", action="store_true",
                   help="suite covers ground queries; failures are conclusive")

    p = sub.add_parser("search", parents=[common],
                       help="search unfoldings for an incompleteness witness")
    p.add_argument("--reasoner", required=True, metavar="SPEC")
    p.add_argument("--rewriting", type=Path, required=True, metavar="FILE")
    p.add_argument("--tbox", type=Path, metavar="FILE",
                   help="certain-answer basis (default: the rewriting itself)")
    p.add_argument("--max-depth", type=int, required=True, metavar="N")

    p = sub.add_parser("compare", parents=[common],
                       help="compare two reasoners over an ABox set")
    p.add_argument("--first", required=True, metavar="SPEC")
    p.add_argument("--second", required=True, metavar="SPEC")
    p.add_argument("--query", type=Path, required=True, metavar="FILE")
    p.add_argument("--tbox", type=Path, required=True, metavar="FILE")
    p.add_argument("--aboxes", type=Path, metavar="DIR",
                   help="directory of .abox files to compare on")
    p.add_argument("--rewriting", type=Path, metavar="FILE",
                   help="UCQ rewriting whose representative set to compare on")

    p = sub.add_parser("spotcheck", parents=[common],
                       help="randomized probes of a reasoner's claimed properties")
    p.add_argument("--reasoner", required=True, metavar="SPEC")
    p.add_argument("--query", type=Path, required=True, metavar="FILE")
    p.add_argument("--tbox", type=Path, required=True, metavar="FILE")
    p.add_argument("--trials", type=int, default=200, metavar="N")

    return parser


_HANDLERS: Dict[str, Callable[[argparse.Namespace, _Settings], int]] = {
    "translate": _cmd_translate,
    "cert": _cmd_cert,
    "verify-rewriting": _cmd_verify_rewriting,
    "instantiate": _cmd_instantiate,
    "minimize": _cmd_minimize,
    "unfold": _cmd_unfold,
    "run": _cmd_run,
    "search": _cmd_search,
    "compare": _cmd_compare,
    "spotcheck": _cmd_spotcheck,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _load_config(args.config)
        settings = _resolve_settings(args, config)
        return _HANDLERS[args.command](args, settings)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CODES[INCONCLUSIVE_VERDICT]
    except (SyntaxProblem, ExternalReasonerError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
