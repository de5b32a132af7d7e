"""belex: inference and explanation for discrete tree-structured belief networks.

Load a network, ground evidence step by step, and ask why the belief in a
hypothesis rose, fell, or stayed fixed. Met expectations get one-line
explanations; violated ones are narrated by splitting the competitors at an
elimination threshold and ruling out the weakly supported ones.
"""

from .errors import (
    AlreadyGroundedError,
    BadIndexError,
    ContradictoryEvidenceError,
    EngineError,
    InjectionError,
    InternalConsistencyError,
    InvalidNetworkError,
    InvalidRequestError,
    InvalidThresholdError,
    InvalidWindowError,
    MixedChangeError,
    NothingToExplainError,
    SizeBoundError,
    UnknownNodeError,
    UnknownSessionError,
    UnknownStateError,
    ZeroSupportError,
)
from .expectations import (
    DEFAULT_EPS_BEL,
    BasicCaseKind,
    Expectation,
    ExpectationOutcome,
    ExpectedDirection,
    RealizedDirection,
    check_expectation,
    derive_expectation,
    detect_basic_case,
    realized_direction,
)
from .indicators import (
    SIGN_EPS,
    Condition,
    PairTerm,
    PercentChange,
    ShiftIndicator,
    SupportKind,
    normalize_lambda,
    pair_term,
    percent_change,
    shift_indicator,
)
from .network import Network, Node, load_network
from .oracle import (
    CLAIM_IDS,
    JointTable,
    OracleConfig,
    OracleReport,
    check_claims,
    joint_distribution,
    oracle_beliefs,
)
from .planner import (
    DEFAULT_RHO,
    CompoundPlan,
    EliminationThreshold,
    ETRegime,
    ExplainSettings,
    ExplanationPlan,
    Partition,
    PlanCase,
    choose_elimination_threshold,
    classify_violation_case,
    partition_in_out,
    plan_explanation,
)
from .propagation import (
    BeliefVector,
    History,
    InjectedNode,
    NodeState,
    Snapshot,
    fuse_belief,
    ground_evidence,
    history_to_json_dict,
    initial_history,
    inject_snapshots,
    load_injection,
    load_scenario,
    propagate,
    run_scenario,
    snapshot_to_json_dict,
)
from .realizer import RealizedExplanation, realize, render_percent

__version__ = "0.1.0"

__all__ = [
    "AlreadyGroundedError",
    "BadIndexError",
    "BasicCaseKind",
    "BeliefVector",
    "CLAIM_IDS",
    "CompoundPlan",
    "Condition",
    "ContradictoryEvidenceError",
    "DEFAULT_EPS_BEL",
    "DEFAULT_RHO",
    "ETRegime",
    "EliminationThreshold",
    "EngineError",
    "Expectation",
    "ExpectationOutcome",
    "ExpectedDirection",
    "ExplainSettings",
    "ExplanationPlan",
    "History",
    "InjectedNode",
    "InjectionError",
    "InternalConsistencyError",
    "InvalidNetworkError",
    "InvalidRequestError",
    "InvalidThresholdError",
    "InvalidWindowError",
    "JointTable",
    "MixedChangeError",
    "Network",
    "Node",
    "NodeState",
    "NothingToExplainError",
    "OracleConfig",
    "OracleReport",
    "PairTerm",
    "Partition",
    "PercentChange",
    "PlanCase",
    "RealizedDirection",
    "RealizedExplanation",
    "SIGN_EPS",
    "ShiftIndicator",
    "SizeBoundError",
    "Snapshot",
    "SupportKind",
    "UnknownNodeError",
    "UnknownSessionError",
    "UnknownStateError",
    "ZeroSupportError",
    "check_claims",
    "check_expectation",
    "choose_elimination_threshold",
    "classify_violation_case",
    "derive_expectation",
    "detect_basic_case",
    "fuse_belief",
    "ground_evidence",
    "history_to_json_dict",
    "initial_history",
    "inject_snapshots",
    "joint_distribution",
    "load_injection",
    "load_network",
    "load_scenario",
    "normalize_lambda",
    "oracle_beliefs",
    "pair_term",
    "partition_in_out",
    "percent_change",
    "plan_explanation",
    "propagate",
    "realize",
    "realized_direction",
    "render_percent",
    "run_scenario",
    "shift_indicator",
    "snapshot_to_json_dict",
]
