"""Exception hierarchy.

Every engine error carries a stable machine-readable ``code`` so the CLI and
the HTTP service can map failures deterministically (one exception class, one
code).
"""

from __future__ import annotations

from typing import Any, Optional


class EngineError(Exception):
    """Base class for all errors raised by the engine."""

    code = "engine_error"

    def __init__(self, message: str, detail: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.detail = detail or {}

    @property
    def message(self) -> str:
        return str(self)


class InvalidNetworkError(EngineError):
    """Network document failed to parse or violates a structural invariant."""

    code = "invalid_network"


class UnknownNodeError(EngineError):
    code = "unknown_node"


class UnknownStateError(EngineError):
    code = "unknown_state"


class AlreadyGroundedError(EngineError):
    """A node can be grounded at most once; evidence is never retracted."""

    code = "already_grounded"


class ContradictoryEvidenceError(EngineError):
    """Evidence assigns zero posterior mass to every causally possible state."""

    code = "contradictory_evidence"


class ZeroSupportError(EngineError):
    """A support vector with no positive entry cannot be normalized."""

    code = "zero_support"


class BadIndexError(EngineError):
    code = "bad_index"


class InvalidWindowError(EngineError):
    """Timestep window is out of range or not increasing."""

    code = "invalid_window"


class MixedChangeError(EngineError):
    """Both support sides moved where one was required to stay fixed."""

    code = "mixed_change"


class NothingToExplainError(EngineError):
    """Neither support side changed over the window."""

    code = "nothing_to_explain"


class InvalidThresholdError(EngineError):
    """Supplied elimination threshold leaves a contradicting hypothesis below it."""

    code = "invalid_threshold"


class SizeBoundError(EngineError):
    code = "size_bound_exceeded"


class InjectionError(EngineError):
    """Snapshot-injection document is malformed or inconsistent."""

    code = "invalid_injection"


class UnknownSessionError(EngineError):
    code = "unknown_session"


class InvalidRequestError(EngineError):
    """Malformed request surface input (flag grammar, query params, bodies)."""

    code = "invalid_request"


class InternalConsistencyError(EngineError):
    """A guarantee the planner relies on failed empirically.

    The ``detail`` payload carries the full offending state so the case can be
    turned into a regression fixture.
    """

    code = "internal_inconsistency"
