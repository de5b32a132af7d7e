"""Reader expectations for a focal belief change, and whether they are met.

The default reader model: if the focal hypothesis's own support rises, the
reader expects its belief to rise; if it falls, to fall; if it is unchanged,
to stay put. A realized change counts as Unchanged when it is immaterial,
i.e. small relative to the belief's own scale (threshold ``eps_bel``).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .errors import InvalidWindowError
from .indicators import SupportKind, normalize_lambda, sign_of, vectors_equal

DEFAULT_EPS_BEL = 0.005


class ExpectedDirection(str, Enum):
    RISE = "rise"
    FALL = "fall"
    NO_CHANGE = "no_change"


class RealizedDirection(str, Enum):
    ROSE = "rose"
    FELL = "fell"
    UNCHANGED = "unchanged"


_MET = {
    (ExpectedDirection.RISE, RealizedDirection.ROSE),
    (ExpectedDirection.FALL, RealizedDirection.FELL),
    (ExpectedDirection.NO_CHANGE, RealizedDirection.UNCHANGED),
}


class BasicCaseKind(str, Enum):
    BINARY_NODE = "binary_node"
    UNIFORM_EVIDENCE = "uniform_evidence"
    OPPOSING_DRIFT = "opposing_drift"


@dataclass(frozen=True)
class Expectation:
    direction: ExpectedDirection
    basis: SupportKind
    focal_delta: float


@dataclass(frozen=True)
class ExpectationOutcome:
    expectation: Expectation
    realized: RealizedDirection
    met: bool
    delta_bel: float
    bel_old: float
    bel_new: float


def expectation_from_delta(focal_delta: float, kind: SupportKind) -> Expectation:
    s = sign_of(focal_delta)
    if s > 0:
        direction = ExpectedDirection.RISE
    elif s < 0:
        direction = ExpectedDirection.FALL
    else:
        direction = ExpectedDirection.NO_CHANGE
    return Expectation(direction=direction, basis=SupportKind(kind), focal_delta=focal_delta)


def realized_direction(
    bel_old: float, bel_new: float, eps_bel: float = DEFAULT_EPS_BEL
) -> RealizedDirection:
    """Classify a belief change, treating moves inside the materiality band
    (eps_bel relative to the larger endpoint) as no change."""
    band = eps_bel * max(bel_old, bel_new)
    delta = bel_new - bel_old
    if delta > band:
        return RealizedDirection.ROSE
    if delta < -band:
        return RealizedDirection.FELL
    return RealizedDirection.UNCHANGED


def _window_vectors(history, node_id, from_t, to_t, kind):
    kind = SupportKind(kind)
    if not (0 <= from_t < to_t < len(history.snapshots)):
        raise InvalidWindowError(
            f"window ({from_t}, {to_t}) invalid for {len(history.snapshots)} snapshots"
        )
    old = history.node_state(node_id, from_t)
    new = history.node_state(node_id, to_t)
    if kind is SupportKind.CAUSAL:
        return old, new, old.pi, new.pi, old.lam
    return old, new, normalize_lambda(old.lam), normalize_lambda(new.lam), old.pi


def derive_expectation(
    history, node_id: str, f: int, from_t: int, to_t: int, kind: SupportKind
) -> Expectation:
    """Expected direction of the focal belief from its own support change."""
    _, _, changed_old, changed_new, _ = _window_vectors(history, node_id, from_t, to_t, kind)
    return expectation_from_delta(changed_new[f] - changed_old[f], kind)


def check_expectation(
    expectation: Expectation,
    history,
    node_id: str,
    f: int,
    from_t: int,
    to_t: int,
    eps_bel: float = DEFAULT_EPS_BEL,
) -> ExpectationOutcome:
    if not (0 <= from_t < to_t < len(history.snapshots)):
        raise InvalidWindowError(
            f"window ({from_t}, {to_t}) invalid for {len(history.snapshots)} snapshots"
        )
    bel_old = history.node_state(node_id, from_t).bel[f]
    bel_new = history.node_state(node_id, to_t).bel[f]
    return outcome_from_beliefs(expectation, bel_old, bel_new, eps_bel)


def outcome_from_beliefs(
    expectation: Expectation,
    bel_old: float,
    bel_new: float,
    eps_bel: float = DEFAULT_EPS_BEL,
) -> ExpectationOutcome:
    realized = realized_direction(bel_old, bel_new, eps_bel)
    return ExpectationOutcome(
        expectation=expectation,
        realized=realized,
        met=(expectation.direction, realized) in _MET,
        delta_bel=bel_new - bel_old,
        bel_old=bel_old,
        bel_new=bel_new,
    )


def detect_basic_case_from_vectors(
    changed_old: Sequence[float],
    changed_new: Sequence[float],
    fixed_weights: Sequence[float],
    f: int,
) -> Optional[BasicCaseKind]:
    n = len(changed_old)
    if n == 2:
        return BasicCaseKind.BINARY_NODE
    competitor_weights = [fixed_weights[i] for i in range(n) if i != f]
    if vectors_equal(competitor_weights, [competitor_weights[0]] * len(competitor_weights)):
        return BasicCaseKind.UNIFORM_EVIDENCE
    delta_f = changed_new[f] - changed_old[f]
    sf = sign_of(delta_f)
    if sf != 0:
        opposing = all(
            sign_of(changed_new[i] - changed_old[i]) in (0, -sf)
            for i in range(n)
            if i != f
        )
        if opposing:
            return BasicCaseKind.OPPOSING_DRIFT
    return None


def detect_basic_case(
    history, node_id: str, f: int, from_t: int, to_t: int, kind: SupportKind
) -> Optional[BasicCaseKind]:
    """First matching guaranteed-met case, checked in order: binary node,
    uniform competitor support on the fixed side, opposing drift on the
    changed side. None when no case applies."""
    _, _, changed_old, changed_new, fixed = _window_vectors(
        history, node_id, from_t, to_t, kind
    )
    return detect_basic_case_from_vectors(changed_old, changed_new, fixed, f)
