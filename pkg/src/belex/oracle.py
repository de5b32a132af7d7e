"""Independent brute-force verification machinery.

Two independent routes through the math are kept deliberately separate from
the production code they check: exact joint-distribution enumeration (against
message-passing propagation) and randomized scenario generation for every
claim the explanation layer relies on. Failures are data, not exceptions, and
carry enough state to become regression fixtures.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import ContradictoryEvidenceError, EngineError, SizeBoundError
from .expectations import (
    DEFAULT_EPS_BEL,
    ExpectedDirection,
    RealizedDirection,
    detect_basic_case_from_vectors,
    expectation_from_delta,
    outcome_from_beliefs,
)
from .indicators import (
    SupportKind,
    normalize_lambda,
    pair_term,
    shift_from_vectors,
    sign_of,
)
from .network import Network, Node
from .planner import (
    DEFAULT_RHO,
    choose_elimination_threshold,
    partition_in_out,
    violation_sign,
)
from .propagation import fuse_belief

SIZE_BOUND = 10**6
SUPPORT_FLOOR = 1e-6


@dataclass(frozen=True)
class JointTable:
    """Every full state assignment with its probability."""

    nodes: tuple[str, ...]
    assignments: dict[tuple[str, ...], float]

    @property
    def size(self) -> int:
        return len(self.assignments)


def joint_distribution(network: Network) -> JointTable:
    """Exact joint by multiplying prior/CPT factors over all assignments."""
    node_ids = network.node_ids
    sizes = [network.node(nid).n_states for nid in node_ids]
    total = 1
    for s in sizes:
        total *= s
    if total > SIZE_BOUND:
        raise SizeBoundError(
            f"joint table would have {total} rows (bound {SIZE_BOUND})"
        )
    assignments: dict[tuple[str, ...], float] = {}
    for combo in itertools.product(*[range(s) for s in sizes]):
        index_of = dict(zip(node_ids, combo))
        prob = 1.0
        for nid, state_ix in zip(node_ids, combo):
            node = network.node(nid)
            if node.is_root:
                prob *= node.prior[state_ix]
            else:
                prob *= node.cpt[index_of[node.parent]][state_ix]
        labels = tuple(
            network.node(nid).states[ix] for nid, ix in zip(node_ids, combo)
        )
        assignments[labels] = prob
    return JointTable(nodes=node_ids, assignments=assignments)


def oracle_beliefs(
    network: Network, evidence: dict[str, str] | Iterable[tuple[str, str]]
) -> dict[str, tuple[float, ...]]:
    """Exact conditional marginals by summation over the joint table."""
    evidence = dict(evidence)
    for nid, state in evidence.items():
        network.state_index(nid, state)
    table = joint_distribution(network)
    node_ids = table.nodes
    position = {nid: k for k, nid in enumerate(node_ids)}
    state_ix = {
        nid: {s: j for j, s in enumerate(network.node(nid).states)}
        for nid in node_ids
    }
    required = [(position[nid], state) for nid, state in evidence.items()]
    mass: dict[str, np.ndarray] = {
        nid: np.zeros(network.node(nid).n_states) for nid in node_ids
    }
    total = 0.0
    for labels, prob in table.assignments.items():
        if any(labels[pos] != state for pos, state in required):
            continue
        total += prob
        for nid, label in zip(node_ids, labels):
            mass[nid][state_ix[nid][label]] += prob
    if total <= 0.0:
        raise ContradictoryEvidenceError("evidence has zero probability mass")
    return {nid: tuple(mass[nid] / total) for nid in node_ids}


# ---------------------------------------------------------------------------
# Random instance generation


def random_simplex(rng: np.random.Generator, n: int, floor: float = SUPPORT_FLOOR):
    while True:
        v = rng.dirichlet(np.ones(n))
        if v.min() >= floor:
            return v


def random_support(rng: np.random.Generator, n: int, floor: float = SUPPORT_FLOOR):
    while True:
        v = rng.uniform(0.0, 1.0, size=n)
        if v.min() >= floor:
            return v


def random_forest(
    rng: np.random.Generator, max_nodes: int = 6, max_states: int = 4
) -> Network:
    n_nodes = int(rng.integers(1, max_nodes + 1))
    nodes = []
    for k in range(n_nodes):
        n_states = int(rng.integers(2, max_states + 1))
        states = tuple(f"n{k}_s{j}" for j in range(n_states))
        parent_ix: Optional[int] = None
        if k > 0 and rng.uniform() > 0.25:
            parent_ix = int(rng.integers(0, k))
        if parent_ix is None:
            nodes.append(
                Node(id=f"n{k}", states=states, prior=tuple(rng.dirichlet(np.ones(n_states))))
            )
        else:
            parent_states = len(nodes[parent_ix].states)
            cpt = tuple(
                tuple(rng.dirichlet(np.ones(n_states))) for _ in range(parent_states)
            )
            nodes.append(
                Node(id=f"n{k}", states=states, parent=f"n{parent_ix}", cpt=cpt)
            )
    return Network(nodes)


def random_consistent_evidence(
    rng: np.random.Generator, network: Network
) -> dict[str, str]:
    """Reveal a random subset of a joint sample, so the evidence always has mass."""
    table = joint_distribution(network)
    labels = list(table.assignments)
    probs = np.array([table.assignments[a] for a in labels])
    drawn = labels[int(rng.choice(len(labels), p=probs / probs.sum()))]
    k = int(rng.integers(0, len(network.node_ids) + 1))
    chosen = rng.choice(len(network.node_ids), size=k, replace=False)
    return {
        network.node_ids[i]: drawn[i] for i in sorted(int(c) for c in chosen)
    }


# ---------------------------------------------------------------------------
# Claim checking

CLAIM_IDS = (
    "sign_causal",
    "sign_evidential",
    "condition_equivalence",
    "non_emptiness",
    "basic_implies_met",
    "binary_always_met",
)


@dataclass(frozen=True)
class OracleConfig:
    claims: tuple[str, ...] = CLAIM_IDS
    min_states: int = 2
    max_states: int = 6
    eps_bel: float = DEFAULT_EPS_BEL
    rho: float = DEFAULT_RHO
    max_resample: int = 1000


@dataclass(frozen=True)
class ClaimFailure:
    claim: str
    trial: int
    dump: dict[str, Any]


@dataclass(frozen=True)
class OracleReport:
    """Outcome of a claim run.

    ``failures`` are implementation errors and must be empty for a pass.
    ``counterexamples`` are instances where a conjectured guarantee itself
    fails (independently verified by exhaustive search);
    they are reported as reproducible fixtures, not as failures.
    """

    seed: int
    trials: int
    claims: tuple[str, ...]
    failures: tuple[ClaimFailure, ...]
    counterexamples: tuple[ClaimFailure, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "claims": list(self.claims),
            "failures": [
                {"claim": f.claim, "trial": f.trial, "dump": f.dump}
                for f in self.failures
            ],
            "counterexamples": [
                {"claim": f.claim, "trial": f.trial, "dump": f.dump}
                for f in self.counterexamples
            ],
            "passed": self.passed,
        }

    def summary_text(self) -> str:
        fail_count = {c: 0 for c in self.claims}
        for f in self.failures:
            fail_count[f.claim] += 1
        cx_count = {c: 0 for c in self.claims}
        for f in self.counterexamples:
            cx_count[f.claim] += 1
        width = max(len(c) for c in self.claims)
        lines = [f"{'claim'.ljust(width)}  trials  failures  counterexamples"]
        for c in self.claims:
            lines.append(
                f"{c.ljust(width)}  {self.trials:6d}  {fail_count[c]:8d}  "
                f"{cx_count[c]:15d}"
            )
        lines.append("result: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def _dump_vec(v) -> list[float]:
    return [float(x) for x in v]


def _check_sign(rng, config, kind: SupportKind) -> Optional[tuple[str, dict]]:
    n = int(rng.integers(max(config.min_states, 2), config.max_states + 1))
    f = int(rng.integers(0, n))
    if kind is SupportKind.CAUSAL:
        pi_old = random_simplex(rng, n)
        pi_new = random_simplex(rng, n)
        lam = random_support(rng, n)
        indicator = shift_from_vectors(pi_old, pi_new, lam, f, kind)
        bel_old = fuse_belief(pi_old, lam).values[f]
        bel_new = fuse_belief(pi_new, lam).values[f]
        state = {
            "pi_old": _dump_vec(pi_old),
            "pi_new": _dump_vec(pi_new),
            "lambda": _dump_vec(lam),
        }
    else:
        pi = random_simplex(rng, n)
        lam_old = random_support(rng, n)
        lam_new = random_support(rng, n)
        indicator = shift_from_vectors(
            normalize_lambda(lam_old), normalize_lambda(lam_new), pi, f, kind
        )
        bel_old = fuse_belief(pi, lam_old).values[f]
        bel_new = fuse_belief(pi, lam_new).values[f]
        state = {
            "pi": _dump_vec(pi),
            "lambda_old": _dump_vec(lam_old),
            "lambda_new": _dump_vec(lam_new),
        }
    s_ind = sign_of(indicator.value)
    s_bel = sign_of(bel_new - bel_old)
    if s_ind != s_bel:
        state.update(
            focal=f,
            indicator=indicator.value,
            delta_bel=bel_new - bel_old,
        )
        return ("failure", state)
    return None


_STRICT_TAGS = {
    (-1, 1): "down_c1",
    (1, -1): "up_c1",
}


def _delta_route_family(old, new, i, f) -> int:
    # Growth-ratio comparison, written the way a reader would check C1-C3:
    # percent changes relative to the old values.
    pct_f = (new[f] - old[f]) / old[f]
    pct_i = (new[i] - old[i]) / old[i]
    return sign_of(pct_f - pct_i)


def _check_condition_equivalence(rng, config) -> Optional[tuple[str, dict]]:
    n = int(rng.integers(max(config.min_states, 2), config.max_states + 1))
    f = int(rng.integers(0, n))
    i = int(rng.integers(0, n - 1))
    if i >= f:
        i += 1
    old = random_simplex(rng, n)
    new = random_simplex(rng, n)
    term = pair_term(old, new, i, f, SupportKind.CAUSAL)
    family_value = sign_of(term.value)
    family_cond = term.condition.family
    family_delta = _delta_route_family(old, new, i, f)
    ok = family_cond == family_value == family_delta
    # For strictly opposite movements the exact tag is pinned by the rules.
    df = sign_of(new[f] - old[f])
    di = sign_of(new[i] - old[i])
    expected_tag = _STRICT_TAGS.get((df, di))
    if ok and expected_tag is not None:
        ok = term.condition.value == expected_tag
    if not ok:
        return (
            "failure",
            {
                "old": _dump_vec(old),
                "new": _dump_vec(new),
                "i": i,
                "f": f,
                "value": term.value,
                "condition": term.condition.value,
                "delta_route_family": family_delta,
            },
        )
    return None


def _violation_in_regime(expectation, outcome) -> bool:
    """A genuine violation, not one manufactured by the materiality band.

    An instance where the belief moved in the expected direction but too
    little to narrate is outside the regime the guarantees speak about.
    """
    if outcome.met:
        return False
    direction = expectation.direction
    s_bel = sign_of(outcome.delta_bel)
    if direction is ExpectedDirection.RISE and s_bel > 0:
        return False
    if direction is ExpectedDirection.FALL and s_bel < 0:
        return False
    return True


def valid_threshold_exists(
    lambdas: Sequence[float], term_signs: Sequence[int], delta_bel_sign: int
) -> bool:
    """Exhaustive independent check: does any threshold satisfy the rules?

    A threshold must leave no realized-direction competitor strictly below
    it while both narrated sets stay non-empty. Membership only changes at
    the support values, so sweeping values, midpoints, and the outer
    boundaries covers every equivalence class of candidate thresholds.
    """
    values = sorted(set(lambdas))
    candidates = list(values)
    candidates += [(a + b) / 2.0 for a, b in zip(values, values[1:])]
    candidates.append(values[0] / 2.0)
    candidates.append(math.nextafter(values[-1], math.inf))
    indices = range(len(lambdas))
    for c in candidates:
        if c <= 0.0:
            continue
        if any(lambdas[k] < c for k in indices if term_signs[k] == delta_bel_sign):
            continue
        if not any(lambdas[k] > c for k in indices if term_signs[k] == delta_bel_sign):
            continue
        if not any(lambdas[k] < c for k in indices if term_signs[k] == -delta_bel_sign):
            continue
        return True
    return False


def _check_non_emptiness(rng, config) -> Optional[tuple[str, dict]]:
    for _ in range(config.max_resample):
        n = int(rng.integers(max(config.min_states, 3), config.max_states + 1))
        f = int(rng.integers(0, n))
        pi_old = random_simplex(rng, n)
        pi_new = random_simplex(rng, n)
        lam = random_support(rng, n)
        expectation = expectation_from_delta(pi_new[f] - pi_old[f], SupportKind.CAUSAL)
        bel_old = fuse_belief(pi_old, lam).values[f]
        bel_new = fuse_belief(pi_new, lam).values[f]
        outcome = outcome_from_beliefs(expectation, bel_old, bel_new, config.eps_bel)
        if not _violation_in_regime(expectation, outcome):
            continue
        state = {
            "n": n,
            "pi_old": _dump_vec(pi_old),
            "pi_new": _dump_vec(pi_new),
            "lambda": _dump_vec(lam),
            "focal": f,
            "delta_bel": outcome.delta_bel,
            "expected": expectation.direction.value,
        }
        s = violation_sign(outcome)
        indicator = shift_from_vectors(pi_old, pi_new, lam, f, SupportKind.CAUSAL)
        term_signs = [sign_of(t.value) for t in indicator.terms]
        state["weights"] = _dump_vec(indicator.weights)
        state["term_signs"] = term_signs
        state["violation_sign"] = s
        solvable = valid_threshold_exists(indicator.weights, term_signs, s)
        try:
            et = choose_elimination_threshold(
                indicator.weights, term_signs, s, config.rho
            )
            partition = partition_in_out(indicator.weights, indicator.terms, s, et)
        except EngineError as exc:
            if solvable:
                # A valid threshold exists but the chooser missed it.
                state["error"] = str(exc)
                return ("failure", state)
            if n == 3:
                # For three hypotheses the ordering lemma is provable; a
                # counterexample here means the harness itself is wrong.
                state["error"] = str(exc)
                return ("failure", state)
            state["min_contradictor"] = min(
                w for w, ts in zip(indicator.weights, term_signs) if ts == s
            )
            state["min_supporter"] = min(
                w for w, ts in zip(indicator.weights, term_signs) if ts == -s
            )
            return ("counterexample", state)
        if not partition.in_set or not partition.out_set:
            state["partition"] = {
                "in": list(partition.in_set),
                "out": list(partition.out_set),
            }
            return ("failure", state)
        contradictors_below = [
            t.competitor
            for w, t in zip(indicator.weights, indicator.terms)
            if sign_of(t.value) == s and w < et.value
        ]
        if contradictors_below:
            state["invalid_threshold"] = et.value
            return ("failure", state)
        return None
    return None  # no violated instance found in budget; vacuous trial


def _opposing_drift_pair(rng, n, f):
    """Old/new simplex pair where every competitor moves opposite the focal."""
    while True:
        old = random_simplex(rng, n, floor=1e-3)
        delta = rng.uniform(0.02, 0.25) * (1 if rng.uniform() < 0.5 else -1)
        new_f = old[f] + delta
        if not (1e-3 < new_f < 1 - 1e-3):
            continue
        scale = (1.0 - new_f) / (1.0 - old[f])
        new = old * scale
        new[f] = new_f
        return old, new


def _check_basic_implies_met(rng, config) -> Optional[tuple[str, dict]]:
    for _ in range(config.max_resample):
        mode = int(rng.integers(0, 3))
        kind = SupportKind.CAUSAL if rng.uniform() < 0.5 else SupportKind.EVIDENTIAL
        if mode == 0:  # binary node
            n = 2
            f = int(rng.integers(0, n))
            changed_old = random_simplex(rng, n)
            changed_new = random_simplex(rng, n)
            weights = random_support(rng, n)
        elif mode == 1:  # uniform competitor support on the fixed side
            n = int(rng.integers(3, config.max_states + 1))
            f = int(rng.integers(0, n))
            changed_old = random_simplex(rng, n)
            changed_new = random_simplex(rng, n)
            weights = np.full(n, rng.uniform(0.05, 1.0))
            weights[f] = rng.uniform(SUPPORT_FLOOR, 1.0)
        else:  # opposing drift on the changed side
            n = int(rng.integers(3, config.max_states + 1))
            f = int(rng.integers(0, n))
            changed_old, changed_new = _opposing_drift_pair(rng, n, f)
            weights = random_support(rng, n)
        if kind is SupportKind.CAUSAL:
            pi_old, pi_new = changed_old, changed_new
            lam_old = lam_new = weights
        else:
            pi_old = pi_new = np.asarray(weights) / np.sum(weights)
            scale_old, scale_new = rng.uniform(0.5, 2.0, size=2)
            lam_old = changed_old * scale_old
            lam_new = changed_new * scale_new
            changed_old = normalize_lambda(lam_old)
            changed_new = normalize_lambda(lam_new)

        basic = detect_basic_case_from_vectors(
            changed_old, changed_new, pi_old if kind is SupportKind.EVIDENTIAL else lam_old, f
        )
        if basic is None:
            continue
        expectation = expectation_from_delta(
            changed_new[f] - changed_old[f], kind
        )
        bel_old = fuse_belief(pi_old, lam_old).values[f]
        bel_new = fuse_belief(pi_new, lam_new).values[f]
        outcome = outcome_from_beliefs(expectation, bel_old, bel_new, config.eps_bel)
        if outcome.met:
            return None
        state = {
            "mode": ["binary", "uniform", "opposing"][mode],
            "kind": kind.value,
            "basic_case": basic.value,
            "pi_old": _dump_vec(pi_old),
            "pi_new": _dump_vec(pi_new),
            "lambda_old": _dump_vec(lam_old),
            "lambda_new": _dump_vec(lam_new),
            "focal": f,
            "expected": expectation.direction.value,
            "realized": outcome.realized.value,
            "delta_bel": outcome.delta_bel,
        }
        s_bel = sign_of(outcome.delta_bel)
        dir_sign = {
            ExpectedDirection.RISE: 1,
            ExpectedDirection.FALL: -1,
            ExpectedDirection.NO_CHANGE: 0,
        }[expectation.direction]
        if dir_sign != 0 and s_bel == -dir_sign:
            # Belief moved against the expectation: hard failure.
            return ("failure", state)
        if (
            outcome.realized is RealizedDirection.UNCHANGED
            and dir_sign != 0
            and s_bel in (0, dir_sign)
        ):
            continue  # immaterial agreeing move: outside the regime
        return ("failure", state)
    return None


def _check_binary_always_met(rng, config) -> Optional[tuple[str, dict]]:
    for _ in range(config.max_resample):
        f = int(rng.integers(0, 2))
        pi_old = random_simplex(rng, 2)
        pi_new = random_simplex(rng, 2)
        lam = random_support(rng, 2)
        expectation = expectation_from_delta(pi_new[f] - pi_old[f], SupportKind.CAUSAL)
        bel_old = fuse_belief(pi_old, lam).values[f]
        bel_new = fuse_belief(pi_new, lam).values[f]
        outcome = outcome_from_beliefs(expectation, bel_old, bel_new, config.eps_bel)
        if outcome.met:
            return None
        dir_sign = {
            ExpectedDirection.RISE: 1,
            ExpectedDirection.FALL: -1,
            ExpectedDirection.NO_CHANGE: 0,
        }[expectation.direction]
        s_bel = sign_of(outcome.delta_bel)
        if (
            outcome.realized is RealizedDirection.UNCHANGED
            and dir_sign != 0
            and s_bel in (0, dir_sign)
        ):
            continue  # outside the regime
        return (
            "failure",
            {
                "pi_old": _dump_vec(pi_old),
                "pi_new": _dump_vec(pi_new),
                "lambda": _dump_vec(lam),
                "focal": f,
                "expected": expectation.direction.value,
                "realized": outcome.realized.value,
                "delta_bel": outcome.delta_bel,
            },
        )
    return None


_CLAIM_FUNCS: dict[str, Callable] = {
    "sign_causal": lambda rng, cfg: _check_sign(rng, cfg, SupportKind.CAUSAL),
    "sign_evidential": lambda rng, cfg: _check_sign(rng, cfg, SupportKind.EVIDENTIAL),
    "condition_equivalence": _check_condition_equivalence,
    "non_emptiness": _check_non_emptiness,
    "basic_implies_met": _check_basic_implies_met,
    "binary_always_met": _check_binary_always_met,
}


def check_claims(
    seed: int, trials: int, config: Optional[OracleConfig] = None
) -> OracleReport:
    """Run every configured claim ``trials`` times with reproducible seeding."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    config = config or OracleConfig()
    unknown = set(config.claims) - set(CLAIM_IDS)
    if unknown:
        raise ValueError(f"unknown claim ids: {sorted(unknown)}")
    failures = []
    counterexamples = []
    for claim_ix, claim in enumerate(config.claims):
        func = _CLAIM_FUNCS[claim]
        for trial in range(trials):
            rng = np.random.default_rng([seed, claim_ix, trial])
            result = func(rng, config)
            if result is None:
                continue
            kind, dump = result
            record = ClaimFailure(claim=claim, trial=trial, dump=dump)
            if kind == "counterexample":
                counterexamples.append(record)
            else:
                failures.append(record)
    failures.sort(key=lambda f: (f.trial, f.claim))
    counterexamples.sort(key=lambda f: (f.trial, f.claim))
    return OracleReport(
        seed=seed,
        trials=trials,
        claims=tuple(config.claims),
        failures=tuple(failures),
        counterexamples=tuple(counterexamples),
    )
