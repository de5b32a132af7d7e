"""Deterministic English realization of explanation plans.

Slot-filling templates, one per plan case. Realization is a pure function of
the plan: the same plan always yields byte-identical text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import InternalConsistencyError
from .expectations import ExpectedDirection, RealizedDirection
from .indicators import PercentChange, SupportKind, sign_of
from .planner import (
    AnyPlan,
    CompetitorSlot,
    CompoundPlan,
    ExplanationPlan,
    PlanCase,
)


@dataclass(frozen=True)
class RealizedExplanation:
    text: str
    paragraphs: tuple[str, ...]
    slots: dict[str, str]


def render_percent(p: Union[PercentChange, float]) -> str:
    """"10%" for near-exact integer percents, "over N%" otherwise (N rounded
    down), "from a negligible level" for changes off a zero base."""
    value = p.percent if isinstance(p, PercentChange) else float(p)
    if math.isinf(value):
        return "from a negligible level"
    magnitude = abs(value)
    nearest = round(magnitude)
    if abs(magnitude - nearest) <= 0.005:
        return f"{int(nearest)}%"
    return f"over {int(math.floor(magnitude))}%"


def _join_labels(labels) -> str:
    labels = list(labels)
    if not labels:
        return ""
    if len(labels) == 1:
        return labels[0]
    return ", ".join(labels[:-1]) + " and " + labels[-1]


def _change_phrase(p: PercentChange) -> str:
    """Present-perfect phrase for a realized support change: "has increased by 10%"."""
    if p.infinite:
        if p.percent > 0:
            return "has increased from a negligible level"
        return "has decreased to a negligible level"
    if p.percent == 0.0:
        return "has not changed"
    verb = "increased" if p.percent > 0 else "decreased"
    return f"has {verb} by {render_percent(p)}"


def _delta_noun(p: PercentChange, support_word: str, labels: str) -> str:
    s = sign_of(p.new - p.old)
    if s > 0:
        return f"the increase in the {support_word} support for {labels}"
    if s < 0:
        return f"the decrease in the {support_word} support for {labels}"
    return f"the stability of the {support_word} support for {labels}"


def _conclusion_clause(realized: RealizedDirection) -> str:
    if realized is RealizedDirection.ROSE:
        return "has increased"
    if realized is RealizedDirection.FELL:
        return "has decreased"
    return "remains fixed"


def _dominant_in(plan: ExplanationPlan) -> CompetitorSlot:
    members = [plan.competitor(i) for i in plan.partition.in_set]
    return max(members, key=lambda m: (abs(m.weight * m.term.value), -m.index))


def _comparative_clause(plan: ExplanationPlan, hypothetical: bool) -> str:
    """Why the In set pushes the belief the way it went, phrased from the
    dominant In member's condition class."""
    sw = plan.kind.value
    focal = plan.focal_state
    in_labels = _join_labels(plan.in_states())
    condition = _dominant_in(plan).term.condition.value
    if hypothetical:
        forms = {
            "down_c1": f"the {sw} support for {in_labels} increases while the support for {focal} decreases",
            "down_c2": f"the {sw} support for {in_labels} increases by a larger percentage than for {focal}",
            "down_c3": f"the {sw} support for {focal} decreases by a larger percentage than for {in_labels}",
            "up_c1": f"the {sw} support for {in_labels} decreases while the support for {focal} increases",
            "up_c2": f"the {sw} support for {focal} increases by a larger percentage than for {in_labels}",
            "up_c3": f"the {sw} support for {in_labels} decreases by a larger percentage than for {focal}",
        }
    else:
        forms = {
            "down_c1": f"the {sw} support for {in_labels} has increased while the support for {focal} has decreased",
            "down_c2": f"the {sw} support for {in_labels} has increased by a greater percentage than that of {focal}",
            "down_c3": f"the {sw} support for {focal} has decreased by a greater percentage than that of {in_labels}",
            "up_c1": f"the {sw} support for {in_labels} has decreased while the support for {focal} has increased",
            "up_c2": f"the {sw} support for {focal} has increased by a greater percentage than that of {in_labels}",
            "up_c3": f"the {sw} support for {in_labels} has decreased by a greater percentage than that of {focal}",
        }
    return forms[condition]


def _ruling_side(kind: SupportKind) -> str:
    return "the evidence" if kind is SupportKind.CAUSAL else "the causal support"


def _weight_side_word(kind: SupportKind) -> str:
    # The support side the elimination threshold cuts on.
    return "evidential" if kind is SupportKind.CAUSAL else "causal"


def _basic_paragraphs(plan: ExplanationPlan) -> list[str]:
    sw = plan.kind.value
    focal = plan.focal_state
    direction = plan.expectation.direction
    if direction is ExpectedDirection.RISE:
        return [
            f"The belief in {focal} has increased due to an increase in its {sw} support."
        ]
    if direction is ExpectedDirection.FALL:
        return [
            f"The belief in {focal} has decreased due to a decrease in its {sw} support."
        ]
    return [
        f"The belief in {focal} has not changed because its {sw} support did not change."
    ]


def _reduce_to_binary_paragraphs(plan: ExplanationPlan) -> list[str]:
    sw = plan.kind.value
    focal = plan.focal_state
    in_member = _dominant_in(plan)
    out_labels = _join_labels(plan.out_states())
    if plan.kind is SupportKind.CAUSAL:
        elimination = f"there is overwhelming evidence against {out_labels}"
    else:
        elimination = f"the causal support for {out_labels} is negligible"
    if plan.outcome.realized is RealizedDirection.FELL:
        conclusion = "must decrease"
    elif plan.outcome.realized is RealizedDirection.ROSE:
        conclusion = "must increase"
    else:
        conclusion = "must remain fixed"
    return [
        f"The {sw} support for {focal} {_change_phrase(plan.focal_percent)}, "
        f"and the support for {in_member.state} {_change_phrase(in_member.percent)}. "
        f"Now, since {elimination}, {in_member.state} and {focal} remain the only "
        f"two alternatives, thus they compete against each other. "
        f"As a result, the overall belief in {focal} {conclusion}."
    ]


def _eliminate_reinstate_paragraphs(plan: ExplanationPlan) -> list[str]:
    focal = plan.focal_state
    kind = plan.kind
    ws = _weight_side_word(kind)
    ruler = _ruling_side(kind)
    in_labels = _join_labels(plan.in_states())
    out_labels = _join_labels(plan.out_states())
    out_members = [plan.competitor(i) for i in plan.partition.out_set]
    is_are = "are" if len(out_members) > 1 else "is"
    effect = "reduced" if plan.violation_sign < 0 else "raised"

    if plan.case is PlanCase.ELIMINATE_AND_REINSTATE:
        opener = (
            f"Since the {ws} support for {out_labels} is lower than for {in_labels}, "
        )
    else:
        opener = f"Since the {ws} support for {out_labels} is relatively low, "
    first = (
        opener
        + f"let us assume for a moment that {ruler} rules out {out_labels}, "
        f"thereby bringing {in_labels} into closer competition with {focal}."
    )
    second = (
        f"If {out_labels} {is_are} ruled out, the fact that "
        f"{_comparative_clause(plan, hypothetical=True)} leads to the belief in "
        f"{focal} being {effect}."
    )
    out_deltas = {sign_of(m.percent.new - m.percent.old) for m in out_members}
    if len(out_deltas) == 1:
        noun = _delta_noun(out_members[0].percent, plan.kind.value, out_labels)
    else:
        noun = f"the change in the {plan.kind.value} support for {out_labels}"
    third = (
        f"Now, {noun} has the opposite effect on the belief in {focal}. "
        f"Hence, since {ruler} does not completely rule out {out_labels}, it "
        f"actually diminishes the effect of {in_labels}. This explains why the "
        f"belief in {focal} {_conclusion_clause(plan.outcome.realized)}."
    )
    return [first, second, third]


def _general_low_paragraphs(plan: ExplanationPlan) -> list[str]:
    focal = plan.focal_state
    ruler = _ruling_side(plan.kind)
    in_labels = _join_labels(plan.in_states())
    out_labels = _join_labels(plan.out_states())
    return [
        f"{ruler.capitalize()} is ruling out {out_labels}, bringing {focal} into "
        f"closer competition with {in_labels}. Since "
        f"{_comparative_clause(plan, hypothetical=False)}, the belief in {focal} "
        f"{_conclusion_clause(plan.outcome.realized)}."
    ]


def _plan_paragraphs(plan: ExplanationPlan) -> list[str]:
    if plan.case is PlanCase.BASIC:
        return _basic_paragraphs(plan)
    if plan.case is PlanCase.REDUCE_TO_BINARY:
        return _reduce_to_binary_paragraphs(plan)
    if plan.case in (PlanCase.ELIMINATE_AND_REINSTATE, PlanCase.GENERAL_MODERATED):
        return _eliminate_reinstate_paragraphs(plan)
    if plan.case is PlanCase.GENERAL_LOW_ET:
        return _general_low_paragraphs(plan)
    raise InternalConsistencyError(f"unknown plan case {plan.case!r}")


def _plan_slots(plan: ExplanationPlan, prefix: str = "") -> dict[str, str]:
    slots = {
        f"{prefix}focal": plan.focal_state,
        f"{prefix}support": plan.kind.value,
        f"{prefix}case": plan.case.value,
        f"{prefix}expected": plan.expectation.direction.value,
        f"{prefix}realized": plan.outcome.realized.value,
        f"{prefix}focal_percent": render_percent(plan.focal_percent),
    }
    if plan.basic_kind is not None:
        slots[f"{prefix}basic_kind"] = plan.basic_kind.value
    if plan.partition is not None:
        slots[f"{prefix}in"] = _join_labels(plan.in_states())
        slots[f"{prefix}out"] = _join_labels(plan.out_states())
        slots[f"{prefix}et"] = repr(plan.et.value)
        slots[f"{prefix}regime"] = plan.et.regime.value
        for i in plan.partition.in_set:
            slots[f"{prefix}percent[{plan.states[i]}]"] = render_percent(
                plan.competitor(i).percent
            )
    return slots


def realize(plan: AnyPlan) -> RealizedExplanation:
    """Turn a plan (or compound plan) into deterministic English text."""
    if isinstance(plan, CompoundPlan):
        part_pi, part_lam = plan.parts
        paragraphs = [
            f"Both the causal and the evidential support for {plan.focal_state} "
            f"changed over this window. The causal change is explained first, "
            f"holding the evidential support at its old value; the evidential "
            f"change follows, with the causal support at its new value.",
            f"Causal change: {' '.join(_plan_paragraphs(part_pi))}",
            f"Evidential change: {' '.join(_plan_paragraphs(part_lam))}",
        ]
        slots = {"focal": plan.focal_state, "case": "compound"}
        slots.update(_plan_slots(part_pi, "causal_step."))
        slots.update(_plan_slots(part_lam, "evidential_step."))
        return RealizedExplanation(
            text="\n\n".join(paragraphs), paragraphs=tuple(paragraphs), slots=slots
        )
    if not isinstance(plan, ExplanationPlan):
        raise InternalConsistencyError(f"cannot realize {type(plan).__name__}")
    paragraphs = _plan_paragraphs(plan)
    return RealizedExplanation(
        text="\n\n".join(paragraphs),
        paragraphs=tuple(paragraphs),
        slots=_plan_slots(plan),
    )
