"""Pairwise interaction terms and aggregate shift indicators.

For a focal hypothesis ``f``, the cross-product term

    term(i, f) = new[f] * old[i] - old[f] * new[i]

measures how the interaction with competitor ``i`` pushes the focal belief
when only one support side moved. Weighting each term by the *fixed* side's
support and summing over competitors gives an aggregate whose sign equals the
sign of the focal belief change:

    causal shift     = sum_i  lambda[i] * term_pi(i, f)    (lambda fixed)
    evidential shift = sum_i  pi[i]     * term_lam(i, f)   (pi fixed)

Evidential-side terms are computed on normalized lambda vectors; causal-side
weights use the raw lambda as recorded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import BadIndexError, InvalidWindowError, MixedChangeError, ZeroSupportError

SIGN_EPS = 1e-9


class SupportKind(str, Enum):
    CAUSAL = "causal"
    EVIDENTIAL = "evidential"


class Condition(str, Enum):
    """Down/up condition classes for a pairwise term (mirrored families).

    DOWN_C1: focal support fell while the competitor's rose.
    DOWN_C2: both rose, the competitor's by a greater percentage.
    DOWN_C3: both fell, the focal's by a greater percentage.
    UP_C1..UP_C3 are the mirror images; NEUTRAL means no interaction effect.
    """

    DOWN_C1 = "down_c1"
    DOWN_C2 = "down_c2"
    DOWN_C3 = "down_c3"
    UP_C1 = "up_c1"
    UP_C2 = "up_c2"
    UP_C3 = "up_c3"
    NEUTRAL = "neutral"

    @property
    def family(self) -> int:
        """-1 for Down*, +1 for Up*, 0 for Neutral."""
        if self in (Condition.DOWN_C1, Condition.DOWN_C2, Condition.DOWN_C3):
            return -1
        if self in (Condition.UP_C1, Condition.UP_C2, Condition.UP_C3):
            return 1
        return 0


@dataclass(frozen=True)
class PairTerm:
    competitor: int
    focal: int
    value: float
    kind: SupportKind
    condition: Condition


@dataclass(frozen=True)
class ShiftIndicator:
    kind: SupportKind
    value: float
    terms: tuple[PairTerm, ...]
    weights: tuple[float, ...]
    focal: int
    from_t: int
    to_t: int


@dataclass(frozen=True)
class PercentChange:
    old: float
    new: float
    percent: float

    @property
    def infinite(self) -> bool:
        return math.isinf(self.percent)


def sign_of(x: float, eps: float = SIGN_EPS) -> int:
    if x > eps:
        return 1
    if x < -eps:
        return -1
    return 0


def _classify(value: float, delta_f: float, delta_i: float) -> Condition:
    # Family is fixed by the sign of the cross-product; the sub-case is read
    # off the delta pattern (boundary zero-deltas fold into the nearest case).
    sv = sign_of(value)
    if sv == 0:
        return Condition.NEUTRAL
    sf = sign_of(delta_f)
    si = sign_of(delta_i)
    if sv < 0:
        if sf < 0 and si > 0:
            return Condition.DOWN_C1
        if si > 0:
            return Condition.DOWN_C2
        if sf < 0:
            return Condition.DOWN_C3
        return Condition.DOWN_C2
    if sf > 0 and si < 0:
        return Condition.UP_C1
    if sf > 0:
        return Condition.UP_C2
    if si < 0:
        return Condition.UP_C3
    return Condition.UP_C2


def pair_term(
    old_support: Sequence[float],
    new_support: Sequence[float],
    i: int,
    f: int,
    kind: SupportKind = SupportKind.CAUSAL,
) -> PairTerm:
    """Cross-product interaction term for competitor ``i`` against focal ``f``.

    For ``kind=EVIDENTIAL`` both vectors must already be normalized.
    """
    n = len(old_support)
    if len(new_support) != n:
        raise BadIndexError(
            f"support vectors differ in length: {n} vs {len(new_support)}"
        )
    if not (0 <= i < n) or not (0 <= f < n):
        raise BadIndexError(f"index out of range for {n} states: i={i}, f={f}")
    if i == f:
        raise BadIndexError("competitor index equals focal index")
    kind = SupportKind(kind)
    if kind is SupportKind.EVIDENTIAL:
        for name, vec in (("old", old_support), ("new", new_support)):
            total = sum(vec)
            if abs(total - 1.0) > 1e-6:
                raise ZeroSupportError(
                    f"evidential pair terms need normalized vectors; "
                    f"{name} sums to {total}"
                )
    value = new_support[f] * old_support[i] - old_support[f] * new_support[i]
    condition = _classify(
        value,
        new_support[f] - old_support[f],
        new_support[i] - old_support[i],
    )
    return PairTerm(competitor=i, focal=f, value=value, kind=kind, condition=condition)


def shift_from_vectors(
    old_support: Sequence[float],
    new_support: Sequence[float],
    weights: Sequence[float],
    f: int,
    kind: SupportKind,
    from_t: int = 0,
    to_t: int = 1,
) -> ShiftIndicator:
    """Aggregate the weighted pairwise terms for an already-extracted transition."""
    terms = tuple(
        pair_term(old_support, new_support, i, f, kind)
        for i in range(len(old_support))
        if i != f
    )
    competitor_weights = tuple(weights[t.competitor] for t in terms)
    value = sum(w * t.value for w, t in zip(competitor_weights, terms))
    return ShiftIndicator(
        kind=SupportKind(kind),
        value=value,
        terms=terms,
        weights=competitor_weights,
        focal=f,
        from_t=from_t,
        to_t=to_t,
    )


def normalize_lambda(values: Sequence[float]) -> tuple[float, ...]:
    """Scale a raw evidential-support vector to sum 1 (proportions preserved)."""
    vec = [float(v) for v in values]
    if any(v < 0 for v in vec):
        raise ZeroSupportError("support entries must be non-negative")
    total = sum(vec)
    if total <= 0.0:
        raise ZeroSupportError("cannot normalize an all-zero support vector")
    return tuple(v / total for v in vec)


def vectors_equal(a: Sequence[float], b: Sequence[float], tol: float = SIGN_EPS) -> bool:
    return len(a) == len(b) and all(abs(x - y) <= tol for x, y in zip(a, b))


def shift_indicator(
    history,
    node_id: str,
    f: int,
    from_t: int,
    to_t: int,
    kind: SupportKind,
) -> ShiftIndicator:
    """History-level shift indicator for one node over a snapshot window.

    The fixed side (lambda for causal, pi for evidential) must not have moved
    over the window, compared after normalization so that a pure rescaling of
    lambda does not count as a change.
    """
    kind = SupportKind(kind)
    if not (0 <= from_t < to_t < len(history.snapshots)):
        raise InvalidWindowError(
            f"window ({from_t}, {to_t}) invalid for {len(history.snapshots)} snapshots"
        )
    old = history.node_state(node_id, from_t)
    new = history.node_state(node_id, to_t)
    if kind is SupportKind.CAUSAL:
        if not vectors_equal(normalize_lambda(old.lam), normalize_lambda(new.lam)):
            raise MixedChangeError(
                f"lambda of node {node_id!r} changed over ({from_t}, {to_t}); "
                "decompose the window before a causal analysis"
            )
        return shift_from_vectors(old.pi, new.pi, old.lam, f, kind, from_t, to_t)
    if not vectors_equal(old.pi, new.pi):
        raise MixedChangeError(
            f"pi of node {node_id!r} changed over ({from_t}, {to_t}); "
            "decompose the window before an evidential analysis"
        )
    return shift_from_vectors(
        normalize_lambda(old.lam),
        normalize_lambda(new.lam),
        old.pi,
        f,
        kind,
        from_t,
        to_t,
    )


def percent_change(old: float, new: float) -> PercentChange:
    """Relative change in percent; old values at zero flag an infinite change."""
    if old < 0 or new < 0:
        raise ZeroSupportError("percent change is defined for non-negative values")
    if old > SIGN_EPS:
        percent = (new - old) / old * 100.0
    elif abs(new - old) <= SIGN_EPS:
        percent = 0.0
    else:
        percent = math.inf if new > old else -math.inf
    return PercentChange(old=old, new=new, percent=percent)
