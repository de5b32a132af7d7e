import re

import pytest

from belex import (
    PlanCase,
    SupportKind,
    inject_snapshots,
    percent_change,
    plan_explanation,
    realize,
    render_percent,
)
from belex.propagation import InjectedNode


class TestRenderPercent:
    def test_exact_multiple(self):
        assert render_percent(percent_change(0.30, 0.33)) == "10%"

    def test_rounded_down_with_over(self):
        assert render_percent(percent_change(0.38, 0.46)) == "over 21%"

    def test_zero(self):
        assert render_percent(percent_change(0.3, 0.3)) == "0%"

    def test_near_integer_snaps(self):
        assert render_percent(9.996) == "10%"
        assert render_percent(10.006) == "over 10%"

    def test_magnitude_used_for_decreases(self):
        assert render_percent(-25.0) == "25%"
        assert render_percent(-34.375) == "over 34%"

    def test_infinite(self):
        assert render_percent(percent_change(0.0, 0.4)) == "from a negligible level"


@pytest.fixture(scope="module")
def opposing_history():
    lam = (0.5, 0.6, 0.7)
    return inject_snapshots(
        InjectedNode(
            node="X", timesteps=(((0.3, 0.4, 0.3), lam), ((0.4, 0.35, 0.25), lam))
        )
    )


class TestBasicTemplates:
    def test_rise_met(self, opposing_history):
        plan = plan_explanation(opposing_history, "X", 0, 0, 1, SupportKind.CAUSAL)
        assert plan.case is PlanCase.BASIC
        text = realize(plan).text
        assert text == (
            "The belief in x_1 has increased due to an increase in its causal support."
        )

    def test_fall_met(self, injected_history):
        plan = plan_explanation(injected_history, "B", 2, 1, 2, SupportKind.CAUSAL)
        text = realize(plan).text
        assert text == (
            "The belief in b_3 has decreased due to a decrease in its causal support."
        )

    def test_evidential_wording(self, injected_history):
        plan = plan_explanation(injected_history, "B", 0, 0, 1, SupportKind.EVIDENTIAL)
        text = realize(plan).text
        assert "evidential support" in text
        assert text.startswith("The belief in b_1 has increased")


class TestViolationTemplates:
    def test_reduce_to_binary_golden(self, injected_history):
        plan = plan_explanation(injected_history, "B", 0, 1, 2, SupportKind.CAUSAL)
        realized = realize(plan)
        assert realized.text == (
            "The causal support for b_1 has increased by 10%, and the support for "
            "b_2 has increased by over 21%. Now, since there is overwhelming "
            "evidence against b_3, b_2 and b_1 remain the only two alternatives, "
            "thus they compete against each other. As a result, the overall belief "
            "in b_1 must decrease."
        )
        assert "10%" in realized.text
        assert "b_3" in realized.text
        assert "overwhelming evidence against" in realized.text

    def test_eliminate_and_reinstate_golden(self, balanced_history):
        plan = plan_explanation(balanced_history, "B", 0, 1, 2, SupportKind.CAUSAL)
        realized = realize(plan)
        assert len(realized.paragraphs) == 3
        assume, extreme, moderate = realized.paragraphs
        assert "rules out b_3" in assume
        assert "closer competition with b_1" in assume
        assert "being reduced" in extreme
        assert "increases by a larger percentage than for b_1" in extreme
        assert "diminishes the effect of b_2" in moderate
        assert moderate.endswith("the belief in b_1 remains fixed.")

    def test_general_low_template(self):
        pi_old = (0.30, 0.25, 0.20, 0.15, 0.10)
        pi_new = (0.31, 0.35, 0.14, 0.11, 0.09)
        lam = (0.5, 0.9, 0.02, 0.03, 0.04)
        history = inject_snapshots(
            InjectedNode(node="X", timesteps=((pi_old, lam), (pi_new, lam)))
        )
        plan = plan_explanation(history, "X", 0, 0, 1, SupportKind.CAUSAL)
        assert plan.case is PlanCase.GENERAL_LOW_ET
        text = realize(plan).text
        assert "The evidence is ruling out x_3, x_4 and x_5" in text
        assert "closer competition with x_2" in text
        assert text.endswith("the belief in x_1 has decreased.")

    def test_evidential_violation_uses_mirrored_vocabulary(self):
        # pi fixed, lambda moves: the weight side narrated is causal support.
        pi = (0.2, 0.5, 0.3)
        history = inject_snapshots(
            InjectedNode(
                node="X",
                timesteps=((pi, (1.0, 1.0, 1.0)), (pi, (0.5, 0.9, 0.02))),
            )
        )
        plan = plan_explanation(history, "X", 0, 0, 1, SupportKind.EVIDENTIAL)
        assert plan.case is PlanCase.ELIMINATE_AND_REINSTATE
        assert plan.in_states() == ("x_2",)
        assert plan.out_states() == ("x_3",)
        text = realize(plan).text
        assert "Since the causal support for x_3 is lower than for x_2" in text
        assert "the causal support rules out x_3" in text
        assert "the evidential support for x_2 increases by a larger percentage" in text
        assert text.endswith("the belief in x_1 has decreased.")

    def test_general_moderated_template(self):
        pi_old = (0.30, 0.25, 0.20, 0.15, 0.10)
        pi_new = (0.31, 0.35, 0.14, 0.11, 0.09)
        lam = (0.5, 0.9, 0.2, 0.25, 0.3)
        history = inject_snapshots(
            InjectedNode(node="X", timesteps=((pi_old, lam), (pi_new, lam)))
        )
        plan = plan_explanation(history, "X", 0, 0, 1, SupportKind.CAUSAL)
        assert plan.case is PlanCase.GENERAL_MODERATED
        realized = realize(plan)
        assert len(realized.paragraphs) == 3
        assert "relatively low" in realized.paragraphs[0]
        assert "are ruled out" in realized.paragraphs[1]

    def test_no_unfilled_slots_anywhere(self, injected_history, balanced_history):
        for history, f, window in (
            (injected_history, 0, (1, 2)),
            (injected_history, 2, (1, 2)),
            (injected_history, 0, (0, 2)),
            (balanced_history, 0, (1, 2)),
        ):
            realized = realize(plan_explanation(history, "B", f, *window, "auto"))
            assert "{" not in realized.text and "}" not in realized.text
            assert realized.text == "\n\n".join(realized.paragraphs)

    def test_only_plan_labels_are_mentioned(self, injected_history, balanced_history):
        for history in (injected_history, balanced_history):
            plan = plan_explanation(history, "B", 0, 1, 2, "auto")
            allowed = {plan.focal_state} | set(plan.in_states()) | set(plan.out_states())
            mentioned = set(re.findall(r"b_\d", realize(plan).text))
            assert mentioned <= allowed


class TestDeterminism:
    def test_same_plan_same_bytes(self, injected_history):
        plan = plan_explanation(injected_history, "B", 0, 1, 2, "auto")
        assert realize(plan).text == realize(plan).text
        replanned = plan_explanation(injected_history, "B", 0, 1, 2, "auto")
        assert realize(replanned).text == realize(plan).text

    def test_slots_describe_the_plan(self, injected_history):
        realized = realize(plan_explanation(injected_history, "B", 0, 1, 2, "auto"))
        assert realized.slots["focal"] == "b_1"
        assert realized.slots["case"] == "reduce_to_binary"
        assert realized.slots["focal_percent"] == "10%"
        assert realized.slots["in"] == "b_2"
        assert realized.slots["out"] == "b_3"
        assert realized.slots["percent[b_2]"] == "over 21%"

    def test_numeric_slots_round_trip_from_history(self, injected_history):
        # Every percentage in the text must equal the value recomputed from
        # the underlying snapshots.
        plan = plan_explanation(injected_history, "B", 0, 1, 2, "causal")
        realized = realize(plan)
        pi_old = injected_history.node_state("B", 1).pi
        pi_new = injected_history.node_state("B", 2).pi
        focal = render_percent(percent_change(pi_old[0], pi_new[0]))
        assert realized.slots["focal_percent"] == focal
        assert focal in realized.text
        in_index = plan.partition.in_set[0]
        competitor = render_percent(percent_change(pi_old[in_index], pi_new[in_index]))
        assert realized.slots[f"percent[{plan.states[in_index]}]"] == competitor
        assert competitor in realized.text


class TestCompoundRealization:
    def test_lead_ins_and_both_parts(self, injected_history):
        realized = realize(plan_explanation(injected_history, "B", 0, 0, 2, "auto"))
        assert "Causal change:" in realized.text
        assert "Evidential change:" in realized.text
        assert realized.slots["case"] == "compound"
        assert "causal_step.case" in realized.slots
        assert "evidential_step.case" in realized.slots
