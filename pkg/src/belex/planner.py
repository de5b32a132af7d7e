"""Explanation planning.

A met expectation yields a basic plan. A violated one is explained by
splitting the focal hypothesis's competitors at an elimination threshold on
the fixed-side support: the In set (high support, pushing the belief the way
it actually went) is kept, the Out set (low support, pushing the way the
reader expected) is narratively ruled out, and for a moderate threshold it is
reinstated afterwards to soften the extreme conclusion.

Windows where both support sides moved are decomposed into a causal step
(old lambda held fixed) followed by an evidential step (new pi held fixed);
the two virtual transitions compose exactly to the actual belief endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional, Sequence, Union

from .errors import (
    BadIndexError,
    InternalConsistencyError,
    InvalidThresholdError,
    InvalidWindowError,
    MixedChangeError,
    NothingToExplainError,
)
from .expectations import (
    DEFAULT_EPS_BEL,
    BasicCaseKind,
    Expectation,
    ExpectationOutcome,
    ExpectedDirection,
    RealizedDirection,
    detect_basic_case_from_vectors,
    expectation_from_delta,
    outcome_from_beliefs,
)
from .indicators import (
    PairTerm,
    PercentChange,
    SupportKind,
    normalize_lambda,
    percent_change,
    shift_from_vectors,
    sign_of,
    vectors_equal,
)
from .propagation import History, fuse_belief

DEFAULT_RHO = 0.1


@dataclass(frozen=True)
class ExplainSettings:
    """Narration knobs: regime ratio rho and materiality threshold eps_bel."""

    rho: float = DEFAULT_RHO
    eps_bel: float = DEFAULT_EPS_BEL


class ETRegime(str, Enum):
    LOW = "low"
    MODERATED = "moderated"


@dataclass(frozen=True)
class EliminationThreshold:
    value: float
    regime: ETRegime


@dataclass(frozen=True)
class Partition:
    in_set: tuple[int, ...]
    out_set: tuple[int, ...]
    residual: tuple[int, ...]


class PlanCase(str, Enum):
    BASIC = "basic"
    REDUCE_TO_BINARY = "reduce_to_binary"
    ELIMINATE_AND_REINSTATE = "eliminate_and_reinstate"
    GENERAL_LOW_ET = "general_low_et"
    GENERAL_MODERATED = "general_moderated"


@dataclass(frozen=True)
class CompetitorSlot:
    """Everything the realizer and the UI need about one competitor."""

    index: int
    state: str
    weight: float
    term: PairTerm
    percent: PercentChange


@dataclass(frozen=True)
class ExplanationPlan:
    node: str
    states: tuple[str, ...]
    focal: int
    focal_state: str
    from_t: int
    to_t: int
    kind: SupportKind
    case: PlanCase
    expectation: Expectation
    outcome: ExpectationOutcome
    basic_kind: Optional[BasicCaseKind]
    partition: Optional[Partition]
    et: Optional[EliminationThreshold]
    competitors: tuple[CompetitorSlot, ...]
    focal_percent: PercentChange
    residual_effect: float
    shift_value: float
    violation_sign: int
    settings: ExplainSettings

    def competitor(self, index: int) -> CompetitorSlot:
        for slot in self.competitors:
            if slot.index == index:
                return slot
        raise BadIndexError(f"no competitor with state index {index}")

    def in_states(self) -> tuple[str, ...]:
        if self.partition is None:
            return ()
        return tuple(self.states[i] for i in self.partition.in_set)

    def out_states(self) -> tuple[str, ...]:
        if self.partition is None:
            return ()
        return tuple(self.states[i] for i in self.partition.out_set)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "node": self.node,
            "focal": {"state": self.focal_state, "index": self.focal},
            "window": {"from": self.from_t, "to": self.to_t},
            "support": self.kind.value,
            "case": self.case.value,
            "basic_kind": self.basic_kind.value if self.basic_kind else None,
            "expectation": {
                "direction": self.expectation.direction.value,
                "basis": self.expectation.basis.value,
                "focal_delta": self.expectation.focal_delta,
            },
            "outcome": {
                "realized": self.outcome.realized.value,
                "met": self.outcome.met,
                "delta_bel": self.outcome.delta_bel,
                "bel_old": self.outcome.bel_old,
                "bel_new": self.outcome.bel_new,
            },
            "elimination_threshold": {
                "value": self.et.value,
                "regime": self.et.regime.value,
            }
            if self.et
            else None,
            "partition": {
                "in": list(self.in_states()),
                "out": list(self.out_states()),
                "residual": [self.states[i] for i in self.partition.residual],
            }
            if self.partition
            else None,
            "competitors": [
                {
                    "state": slot.state,
                    "index": slot.index,
                    "weight": slot.weight,
                    "term": slot.term.value,
                    "condition": slot.term.condition.value,
                    "percent": _percent_json(slot.percent),
                }
                for slot in self.competitors
            ],
            "focal_percent": _percent_json(self.focal_percent),
            "residual_effect": self.residual_effect,
            "shift_value": self.shift_value,
            "settings": {"rho": self.settings.rho, "eps_bel": self.settings.eps_bel},
        }


@dataclass(frozen=True)
class CompoundPlan:
    """Two-part plan for a window where both support sides moved: a causal
    step using the old lambda, then an evidential step using the new pi."""

    node: str
    states: tuple[str, ...]
    focal: int
    focal_state: str
    from_t: int
    to_t: int
    parts: tuple[ExplanationPlan, ExplanationPlan]
    settings: ExplainSettings

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "compound": True,
            "node": self.node,
            "focal": {"state": self.focal_state, "index": self.focal},
            "window": {"from": self.from_t, "to": self.to_t},
            "parts": [part.to_json_dict() for part in self.parts],
            "settings": {"rho": self.settings.rho, "eps_bel": self.settings.eps_bel},
        }


AnyPlan = Union[ExplanationPlan, CompoundPlan]


def _percent_json(p: PercentChange) -> dict[str, Any]:
    return {
        "old": p.old,
        "new": p.new,
        "percent": None if p.infinite else p.percent,
        "infinite": p.infinite,
    }


def violation_sign(outcome: ExpectationOutcome) -> int:
    """Direction the belief actually took, as the partition rules see it.

    For a materially realized change this is sign(delta Bel). When the
    violation is that the belief stayed fixed against a rise/fall
    expectation, the sign opposing the expectation is used, since a change
    too small to narrate has no meaningful numeric sign of its own.
    """
    if outcome.realized is RealizedDirection.ROSE:
        return 1
    if outcome.realized is RealizedDirection.FELL:
        return -1
    if outcome.expectation.direction is ExpectedDirection.RISE:
        return -1
    if outcome.expectation.direction is ExpectedDirection.FALL:
        return 1
    raise InternalConsistencyError("no violation direction for a met expectation")


def choose_elimination_threshold(
    lambdas: Sequence[float],
    term_signs: Sequence[int],
    delta_bel_sign: int,
    rho: float = DEFAULT_RHO,
) -> EliminationThreshold:
    """Largest candidate threshold that rules nobody out wrongly.

    Candidates are the midpoints between consecutive distinct competitor
    support values plus a value just above the maximum. A candidate is
    acceptable when no competitor whose term carries the realized direction
    sits below it, and both resulting sets are non-empty.
    """
    if len(lambdas) != len(term_signs):
        raise BadIndexError("lambdas and term_signs must align")
    if delta_bel_sign == 0:
        raise InternalConsistencyError(
            "violation direction is zero; nothing to partition",
            detail={"lambdas": list(lambdas), "term_signs": list(term_signs)},
        )
    contradictors = [k for k, s in enumerate(term_signs) if s == delta_bel_sign]
    supporters = [k for k, s in enumerate(term_signs) if s == -delta_bel_sign]

    distinct = sorted(set(lambdas))
    candidates = [(a + b) / 2.0 for a, b in zip(distinct, distinct[1:])]
    candidates.append(math.nextafter(distinct[-1], math.inf))
    max_all = max(lambdas)
    for value in sorted(candidates, reverse=True):
        if any(lambdas[k] < value for k in contradictors):
            continue
        if not any(lambdas[k] > value for k in contradictors):
            continue
        if not any(lambdas[k] < value for k in supporters):
            continue
        out_max = max(lambdas[k] for k in supporters if lambdas[k] < value)
        regime = ETRegime.LOW if out_max <= rho * max_all else ETRegime.MODERATED
        return EliminationThreshold(value=value, regime=regime)
    raise InternalConsistencyError(
        "no elimination threshold separates the competitors: the guarantee "
        "that In and Out are non-empty failed for this instance",
        detail={
            "lambdas": list(lambdas),
            "term_signs": list(term_signs),
            "delta_bel_sign": delta_bel_sign,
            "candidates": candidates,
        },
    )


def partition_in_out(
    lambdas: Sequence[float],
    pair_terms: Sequence[PairTerm],
    delta_bel_sign: int,
    et: EliminationThreshold,
) -> Partition:
    """Split competitors into In/Out/residual under a validated threshold."""
    if len(lambdas) != len(pair_terms):
        raise BadIndexError("lambdas and pair_terms must align")
    in_set, out_set, residual = [], [], []
    for weight, term in zip(lambdas, pair_terms):
        s = sign_of(term.value)
        if s == delta_bel_sign and weight < et.value:
            raise InvalidThresholdError(
                f"threshold {et.value} leaves contradicting hypothesis "
                f"(state index {term.competitor}, support {weight}) below it"
            )
        if s == delta_bel_sign and weight > et.value:
            in_set.append(term.competitor)
        elif s == -delta_bel_sign and weight < et.value:
            out_set.append(term.competitor)
        else:
            residual.append(term.competitor)
    return Partition(
        in_set=tuple(in_set), out_set=tuple(out_set), residual=tuple(residual)
    )


def classify_violation_case(
    n: int, partition: Partition, et: EliminationThreshold
) -> PlanCase:
    if n < 3:
        raise InternalConsistencyError(
            "a binary node cannot reach violation classification"
        )
    low = et.regime is ETRegime.LOW
    if n == 3:
        return PlanCase.REDUCE_TO_BINARY if low else PlanCase.ELIMINATE_AND_REINSTATE
    return PlanCase.GENERAL_LOW_ET if low else PlanCase.GENERAL_MODERATED


def _plan_transition(
    node: str,
    states: Sequence[str],
    f: int,
    from_t: int,
    to_t: int,
    pi_old: Sequence[float],
    pi_new: Sequence[float],
    lam_old: Sequence[float],
    lam_new: Sequence[float],
    kind: SupportKind,
    settings: ExplainSettings,
) -> ExplanationPlan:
    n = len(states)
    if not (0 <= f < n):
        raise BadIndexError(f"focal index {f} out of range for {n} states")
    if kind is SupportKind.CAUSAL:
        changed_old, changed_new = tuple(pi_old), tuple(pi_new)
        weights = tuple(lam_old)
    else:
        changed_old = normalize_lambda(lam_old)
        changed_new = normalize_lambda(lam_new)
        weights = tuple(pi_old)

    expectation = expectation_from_delta(changed_new[f] - changed_old[f], kind)
    bel_old = fuse_belief(pi_old, lam_old).values[f]
    bel_new = fuse_belief(pi_new, lam_new).values[f]
    outcome = outcome_from_beliefs(expectation, bel_old, bel_new, settings.eps_bel)
    shift = shift_from_vectors(changed_old, changed_new, weights, f, kind, from_t, to_t)
    competitors = tuple(
        CompetitorSlot(
            index=term.competitor,
            state=states[term.competitor],
            weight=weights[term.competitor],
            term=term,
            percent=percent_change(
                changed_old[term.competitor], changed_new[term.competitor]
            ),
        )
        for term in shift.terms
    )
    focal_percent = percent_change(changed_old[f], changed_new[f])

    if outcome.met:
        return ExplanationPlan(
            node=node,
            states=tuple(states),
            focal=f,
            focal_state=states[f],
            from_t=from_t,
            to_t=to_t,
            kind=kind,
            case=PlanCase.BASIC,
            expectation=expectation,
            outcome=outcome,
            basic_kind=detect_basic_case_from_vectors(
                changed_old, changed_new, weights, f
            ),
            partition=None,
            et=None,
            competitors=competitors,
            focal_percent=focal_percent,
            residual_effect=0.0,
            shift_value=shift.value,
            violation_sign=0,
            settings=settings,
        )

    s = violation_sign(outcome)
    term_signs = [sign_of(t.value) for t in shift.terms]
    et = choose_elimination_threshold(shift.weights, term_signs, s, settings.rho)
    partition = partition_in_out(shift.weights, shift.terms, s, et)
    case = classify_violation_case(n, partition, et)
    residual_ix = set(partition.residual)
    residual_effect = sum(
        w * t.value for w, t in zip(shift.weights, shift.terms) if t.competitor in residual_ix
    )
    return ExplanationPlan(
        node=node,
        states=tuple(states),
        focal=f,
        focal_state=states[f],
        from_t=from_t,
        to_t=to_t,
        kind=kind,
        case=case,
        expectation=expectation,
        outcome=outcome,
        basic_kind=None,
        partition=partition,
        et=et,
        competitors=competitors,
        focal_percent=focal_percent,
        residual_effect=residual_effect,
        shift_value=shift.value,
        violation_sign=s,
        settings=settings,
    )


def plan_explanation(
    history: History,
    node_id: str,
    f: int,
    from_t: int,
    to_t: int,
    kind: Union[SupportKind, str, None] = None,
    settings: ExplainSettings = ExplainSettings(),
) -> AnyPlan:
    """Plan the explanation of one node's belief change over a window.

    ``kind`` may be a support kind, "auto", or None (auto): windows where both
    sides moved are decomposed into the two-part compound plan; an explicitly
    requested kind on such a window is an error.
    """
    if not (0 <= from_t < to_t < len(history.snapshots)):
        raise InvalidWindowError(
            f"window ({from_t}, {to_t}) invalid for {len(history.snapshots)} snapshots"
        )
    old = history.node_state(node_id, from_t)
    new = history.node_state(node_id, to_t)
    states = history.network.node(node_id).states
    if not (0 <= f < len(states)):
        raise BadIndexError(
            f"focal index {f} out of range for node {node_id!r} "
            f"with {len(states)} states"
        )
    pi_changed = not vectors_equal(old.pi, new.pi)
    lam_changed = not vectors_equal(
        normalize_lambda(old.lam), normalize_lambda(new.lam)
    )

    if isinstance(kind, str) and kind != "auto":
        kind = SupportKind(kind)
    auto = kind is None or kind == "auto"

    if not pi_changed and not lam_changed:
        raise NothingToExplainError(
            f"neither support side of node {node_id!r} changed over "
            f"({from_t}, {to_t})"
        )
    if auto:
        if pi_changed and lam_changed:
            part_pi = _plan_transition(
                node_id, states, f, from_t, to_t,
                old.pi, new.pi, old.lam, old.lam,
                SupportKind.CAUSAL, settings,
            )
            part_lam = _plan_transition(
                node_id, states, f, from_t, to_t,
                new.pi, new.pi, old.lam, new.lam,
                SupportKind.EVIDENTIAL, settings,
            )
            return CompoundPlan(
                node=node_id,
                states=states,
                focal=f,
                focal_state=states[f],
                from_t=from_t,
                to_t=to_t,
                parts=(part_pi, part_lam),
                settings=settings,
            )
        kind = SupportKind.CAUSAL if pi_changed else SupportKind.EVIDENTIAL

    if kind is SupportKind.CAUSAL:
        if not pi_changed:
            raise NothingToExplainError(
                f"pi of node {node_id!r} did not change over ({from_t}, {to_t})"
            )
        if lam_changed:
            raise MixedChangeError(
                f"lambda of node {node_id!r} also changed over ({from_t}, {to_t}); "
                'use support "auto" to decompose the window'
            )
        return _plan_transition(
            node_id, states, f, from_t, to_t,
            old.pi, new.pi, old.lam, new.lam, kind, settings,
        )
    if not lam_changed:
        raise NothingToExplainError(
            f"lambda of node {node_id!r} did not change over ({from_t}, {to_t})"
        )
    if pi_changed:
        raise MixedChangeError(
            f"pi of node {node_id!r} also changed over ({from_t}, {to_t}); "
            'use support "auto" to decompose the window'
        )
    return _plan_transition(
        node_id, states, f, from_t, to_t,
        old.pi, new.pi, old.lam, new.lam, kind, settings,
    )
