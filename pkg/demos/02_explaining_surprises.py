"""Why did the belief in b_1 fall although its causal support rose?

After the second grounding, b_1's causal support increases by 10%, yet its
belief drops. The planner detects the violated expectation, rules out the
hypothesis with negligible evidential support, and narrates the remaining
binary competition. A met expectation, by contrast, gets a one-liner.
"""

from pathlib import Path

from belex import SupportKind, load_network, plan_explanation, realize, run_scenario

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def explain(history, node, focal_index, from_t, to_t, kind):
    plan = plan_explanation(history, node, focal_index, from_t, to_t, kind)
    label = history.network.node(node).states[focal_index]
    print(f"\n--- {node}={label}, t{from_t} -> t{to_t} ({plan.case.value}) ---")
    print(f"expected: {plan.expectation.direction.value}", end="")
    print(f", realized: {plan.outcome.realized.value}, met: {plan.outcome.met}")
    if plan.partition is not None:
        print(f"In = {plan.in_states()}, Out = {plan.out_states()}, "
              f"threshold = {plan.et.value:.4g} ({plan.et.regime.value})")
    print()
    print(realize(plan).text)


def main():
    network = load_network((FIXTURES / "sample_network.json").read_text())
    history = run_scenario(network, [("C", "c_1"), ("D", "d_1")])

    b = history.node_state("B", 1), history.node_state("B", 2)
    print("Node B between t1 and t2:")
    print(f"  pi : {tuple(round(v, 4) for v in b[0].pi)} -> "
          f"{tuple(round(v, 4) for v in b[1].pi)}")
    print(f"  bel: {tuple(round(v, 4) for v in b[0].bel)} -> "
          f"{tuple(round(v, 4) for v in b[1].bel)}")

    # The surprise: support for b_1 rose, belief fell.
    explain(history, "B", 0, 1, 2, SupportKind.CAUSAL)

    # No surprise for b_3: support fell, belief fell.
    explain(history, "B", 2, 1, 2, SupportKind.CAUSAL)

    # A window where both sides moved decomposes into two virtual steps.
    plan = plan_explanation(history, "B", 0, 0, 2, "auto")
    print("\n--- B=b_1, t0 -> t2 (compound window) ---\n")
    print(realize(plan).text)


if __name__ == "__main__":
    main()
