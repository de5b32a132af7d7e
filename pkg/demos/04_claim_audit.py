"""Randomized audit of every mathematical claim the explanations rely on.

Sign rules, condition-class equivalence, basic-case soundness, binary
impossibility, and the In/Out threshold guarantee are each hammered with
seeded random instances. Implementation failures would fail the audit;
genuine counterexamples to the (unproven) general non-emptiness guarantee
are captured as reproducible instances and summarized.
"""

import json

from belex import check_claims


def main():
    report = check_claims(seed=2024, trials=2000)
    print(report.summary_text())

    if report.counterexamples:
        by_n = {}
        for record in report.counterexamples:
            by_n[record.dump["n"]] = by_n.get(record.dump["n"], 0) + 1
        print(
            "\nThe In/Out guarantee is provable for 3 hypotheses but fails for "
            "larger nodes when every agreeing competitor has more evidential "
            "support than the weakest contradicting one."
        )
        print(f"counterexamples by node size: {by_n}")
        first = report.counterexamples[0]
        print("\nfirst captured instance (reproducible):")
        print(json.dumps(first.dump, indent=2))


if __name__ == "__main__":
    main()
