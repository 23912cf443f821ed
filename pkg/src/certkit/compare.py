"""Pairwise reasoner comparison over a fixed set of ABoxes.

The order tested here: the first reasoner is below the second when, on every
ABox in the set, (1) whenever the input is certainly unsatisfiable and the
first reasoner reports it, so does the second, and (2) when both report
satisfiable, every certain answer the first returns is also returned by the
second.  The order is strict when additionally some ABox shows the second
doing strictly better: reporting an actual unsatisfiability the first misses
(condition 3) or returning a certain answer the first misses while covering
all of the first's (condition 4).

Ratios are micro-averaged proportions of certain answers returned; ABoxes
without certain answers contribute nothing to either side of the fraction,
and unsatisfiable ABoxes are excluded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Set, Tuple

from .chase import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    ChaseBudget,
    certain_answers,
    is_unsatisfiable,
    with_equality_axioms,
)
from .model import ABox, Rewriting, Rule, UCQ, all_constants
from .instantiate import injective_instantiation_ucq
from .reasoners import INCONCLUSIVE, ReasonerHandle
from .syntax import serialize_abox

# ----------------------------------------------------------------------
# Report
# ----------------------------------------------------------------------


def _one_line(box: ABox) -> str:
    return serialize_abox(box).replace("\n", " ").strip()


def _tuple_text(tup: Tuple[str, ...]) -> str:
    return ",".join(tup) if tup else "()"


@dataclass(frozen=True)
class AboxComparison:
    """Per-ABox evaluation row."""

    abox_id: str
    box: ABox
    outcome: str  # "ok" | "violation" | "witness-3" | "witness-4" | "inconclusive"
    cert_size: Optional[int]  # None when the input is unsatisfiable
    first_hits: Optional[int]
    second_hits: Optional[int]
    note: str


@dataclass(frozen=True)
class CompareReport:
    """Comparison outcome; leq/strict are None when budgets got in the way."""

    first: str
    second: str
    leq: Optional[bool]
    strict: Optional[bool]
    violation_box: Optional[ABox]
    violation_note: str
    condition3_box: Optional[ABox]
    condition4_box: Optional[ABox]
    condition4_tuple: Optional[Tuple[str, ...]]
    first_ratio: Optional[float]
    second_ratio: Optional[float]
    entries: Tuple[AboxComparison, ...]
    inconclusive_count: int
    scope_note: str

    def to_tsv(self) -> str:
        lines = ["abox-id\toutcome\tcert\tfirst\tsecond\tnote"]
        for e in self.entries:
            cert = "unsat" if e.cert_size is None else str(e.cert_size)
            first = "" if e.first_hits is None else str(e.first_hits)
            second = "" if e.second_hits is None else str(e.second_hits)
            note = e.note.replace("\t", " ").replace("\n", " ")
            lines.append(f"{e.abox_id}\t{e.outcome}\t{cert}\t{first}\t{second}\t{note}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        def tri(v: Optional[bool]) -> str:
            return "unknown" if v is None else ("yes" if v else "no")

        def ratio(v: Optional[float]) -> str:
            return "n/a" if v is None else f"{v:.3f}"

        lines = [
            f"comparing {self.first} against {self.second} on {len(self.entries)} ABoxes",
            f"{self.first} below {self.second}: {tri(self.leq)}",
            f"strictly below: {tri(self.strict)}",
            f"certain-answer ratio: {self.first} {ratio(self.first_ratio)}, "
            f"{self.second} {ratio(self.second_ratio)}",
        ]
        if self.violation_box is not None:
            lines.append(f"violation: {self.violation_note} on {_one_line(self.violation_box)}")
        if self.condition3_box is not None:
            lines.append(
                f"strictness witness: {self.second} reports the unsatisfiability of "
                f"{_one_line(self.condition3_box)}, {self.first} does not"
            )
        if self.condition4_box is not None and self.condition4_tuple is not None:
            lines.append(
                f"strictness witness: on {_one_line(self.condition4_box)} only "
                f"{self.second} returns the certain answer {_tuple_text(self.condition4_tuple)}"
            )
        if self.inconclusive_count:
            lines.append(f"inconclusive ABoxes: {self.inconclusive_count}")
        lines.append(self.scope_note)
        return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# Comparison
# ----------------------------------------------------------------------


def compare_on(
    boxes: Sequence[ABox],
    query: UCQ,
    tbox_rules: Sequence[Rule],
    first: ReasonerHandle,
    second: ReasonerHandle,
    budget: ChaseBudget = DEFAULT_BUDGET,
    scope_note: str = "conclusions hold for the supplied ABox set",
) -> CompareReport:
    """Evaluate the completeness order between two reasoners on an ABox set.

    Certain answers and unsatisfiability are decided by the reference chase
    over tbox_rules.  ABoxes where any call is cut short by a budget are
    skipped and counted; a violation found elsewhere still decides leq=False,
    but leq=True is downgraded to unknown when entries were skipped.
    """
    tbox_rules = tuple(tbox_rules)
    entries: List[AboxComparison] = []
    violation: Optional[Tuple[ABox, str]] = None
    cond3: Optional[ABox] = None
    cond4: Optional[Tuple[ABox, Tuple[str, ...]]] = None
    numerators = [0, 0]
    denominator = 0
    inconclusive = 0

    for i, box in enumerate(boxes):
        abox_id = f"abox_{i:03d}"

        def skip(note: str) -> None:
            entries.append(
                AboxComparison(abox_id, box, "inconclusive", None, None, None, note)
            )

        try:
            program = with_equality_axioms(tbox_rules, box)
            cert_unsat = is_unsatisfiable(program, box, budget)
            cert = (
                frozenset()
                if cert_unsat
                else certain_answers(query, program, box, budget)
            )
        except BudgetExceeded as e:
            inconclusive += 1
            skip(f"reference chase: {e}")
            continue
        c1 = first.check_unsat(tbox_rules, box)
        c2 = second.check_unsat(tbox_rules, box)
        if c1 is INCONCLUSIVE or c2 is INCONCLUSIVE:
            inconclusive += 1
            skip("reasoner inconclusive")
            continue
        a1: FrozenSet[Tuple[str, ...]] = frozenset()
        a2: FrozenSet[Tuple[str, ...]] = frozenset()
        if not c1:
            result = first.answer(query, tbox_rules, box)
            if result is INCONCLUSIVE:
                inconclusive += 1
                skip("reasoner inconclusive")
                continue
            a1 = result  # type: ignore[assignment]
        if not c2:
            result = second.answer(query, tbox_rules, box)
            if result is INCONCLUSIVE:
                inconclusive += 1
                skip("reasoner inconclusive")
                continue
            a2 = result  # type: ignore[assignment]

        if cert_unsat:
            outcome, note = "ok", "certainly unsatisfiable"
            if c1 and not c2:
                outcome = "violation"
                note = f"{first.name} reports unsat, {second.name} does not"
                if violation is None:
                    violation = (box, note)
            elif not c1 and c2 and cond3 is None:
                outcome = "witness-3"
                note = f"only {second.name} reports the unsatisfiability"
                cond3 = box
            entries.append(AboxComparison(abox_id, box, outcome, None, None, None, note))
            continue

        hits1 = a1 & cert if not c1 else frozenset()
        hits2 = a2 & cert if not c2 else frozenset()
        denominator += len(cert)
        numerators[0] += len(hits1)
        numerators[1] += len(hits2)
        outcome, note = "ok", ""
        if not c1 and not c2:
            lost = sorted(hits1 - hits2)
            if lost:
                outcome = "violation"
                note = (
                    f"{second.name} misses the certain answer "
                    f"{_tuple_text(lost[0])} that {first.name} returns"
                )
                if violation is None:
                    violation = (box, note)
            elif cond4 is None:
                gained = sorted(hits2 - hits1)
                if gained:
                    outcome = "witness-4"
                    note = f"only {second.name} returns {_tuple_text(gained[0])}"
                    cond4 = (box, gained[0])
        entries.append(
            AboxComparison(abox_id, box, outcome, len(cert), len(hits1), len(hits2), note)
        )

    if violation is not None:
        leq: Optional[bool] = False
        strict: Optional[bool] = False
    elif inconclusive:
        # A strictness witness without settled leq stays unknown too.
        leq = None
        strict = None
    else:
        leq = True
        strict = (cond3 is not None) or (cond4 is not None)
    ratio1 = numerators[0] / denominator if denominator else None
    ratio2 = numerators[1] / denominator if denominator else None
    return CompareReport(
        first=first.name,
        second=second.name,
        leq=leq,
        strict=strict,
        violation_box=violation[0] if violation else None,
        violation_note=violation[1] if violation else "",
        condition3_box=cond3,
        condition4_box=cond4[0] if cond4 else None,
        condition4_tuple=cond4[1] if cond4 else None,
        first_ratio=ratio1,
        second_ratio=ratio2,
        entries=tuple(entries),
        inconclusive_count=inconclusive,
        scope_note=scope_note,
    )


# ----------------------------------------------------------------------
# Representative ABox sets
# ----------------------------------------------------------------------


def representative_set(
    rewriting: Rewriting,
    query: UCQ,
    tbox_rules: Sequence[Rule] = (),
    budget: ChaseBudget = DEFAULT_BUDGET,
) -> Tuple[ABox, ...]:
    """ABoxes covering every rule of a subset-closed rewriting.

    Injectively instantiates each bottom rule (unconditionally) and each
    query rule (kept only when satisfiable with the bottom rules); together
    these cover the behavior of compact reasoners on arbitrary data.  All
    instantiation constants are fresh, which is checked against the rule-set
    constants before returning.
    """
    if rewriting.data_rules:
        raise ValueError("representative sets need a UCQ-form rewriting (no data rules)")
    suite = injective_instantiation_ucq(rewriting, budget=budget, query=query)
    boxes = list(suite.unsat_tests) + [box for box, _ in suite.query_tests]
    reserved = set(all_constants(tuple(tbox_rules))) | set(
        all_constants(tuple(query.rules))
    )
    for box in boxes:
        clash = sorted(set(all_constants(box)) & reserved)
        if clash:
            raise ValueError(
                f"instantiation reused non-fresh individuals: {', '.join(clash)}"
            )
    return tuple(boxes)
