"""Message passing, belief fusion, and time-indexed snapshots.

Grounding a node fixes its evidential support to the indicator vector of the
observed state; messages are then repropagated through the forest. Causal
support (pi) is kept normalized at all times, evidential support (lambda) is
stored raw, and the belief of every node is the normalized elementwise product
of the two.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from .errors import (
    AlreadyGroundedError,
    ContradictoryEvidenceError,
    InjectionError,
    UnknownNodeError,
)
from .network import NORM_TOL, Network, Node


@dataclass(frozen=True)
class BeliefVector:
    """Normalized product of causal and evidential support (alpha applied)."""

    values: tuple[float, ...]
    alpha: float


@dataclass(frozen=True)
class NodeState:
    """One node's support and belief vectors at a single timestep."""

    pi: tuple[float, ...]
    lam: tuple[float, ...]
    bel: tuple[float, ...]
    alpha: float


@dataclass(frozen=True)
class Snapshot:
    t: int
    nodes: dict[str, NodeState]
    grounded: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class History:
    network: Network
    snapshots: tuple[Snapshot, ...] = field(default_factory=tuple)

    @property
    def network_id(self) -> str:
        return self.network.id

    def snapshot(self, t: int) -> Snapshot:
        return self.snapshots[t]

    def node_state(self, node_id: str, t: int) -> NodeState:
        snap = self.snapshots[t]
        if node_id not in snap.nodes:
            raise UnknownNodeError(f"unknown node {node_id!r}")
        return snap.nodes[node_id]

    def grounded_nodes(self) -> tuple[str, ...]:
        if not self.snapshots:
            return ()
        return tuple(node for node, _ in self.snapshots[-1].grounded)


def fuse_belief(pi: Sequence[float], lam: Sequence[float]) -> BeliefVector:
    """Normalized elementwise product; alpha is the constant actually applied."""
    p = np.asarray(pi, dtype=float)
    l = np.asarray(lam, dtype=float)
    if p.shape != l.shape or p.ndim != 1:
        raise ValueError(f"shape mismatch: {p.shape} vs {l.shape}")
    prod = p * l
    total = prod.sum()
    if total <= 0.0:
        raise ContradictoryEvidenceError(
            "evidence contradicts all causally possible states "
            "(every pi*lambda product is zero)"
        )
    alpha = float(1.0 / total)
    return BeliefVector(values=tuple(float(v) for v in prod / total), alpha=alpha)


def propagate(network: Network, evidence: dict[str, str]) -> dict[str, NodeState]:
    """Exact single-pass propagation over the forest for a fixed evidence set."""
    for node_id, state in evidence.items():
        network.state_index(node_id, state)

    lam_cache: dict[str, np.ndarray] = {}
    lam_msg_cache: dict[str, np.ndarray] = {}
    pi_cache: dict[str, np.ndarray] = {}

    def local_evidence(node: Node) -> Optional[np.ndarray]:
        if node.id not in evidence:
            return None
        vec = np.zeros(node.n_states)
        vec[network.state_index(node.id, evidence[node.id])] = 1.0
        return vec

    def lam(node_id: str) -> np.ndarray:
        if node_id in lam_cache:
            return lam_cache[node_id]
        node = network.node(node_id)
        vec = np.ones(node.n_states)
        local = local_evidence(node)
        if local is not None:
            vec = vec * local
        for child_id in network.children(node_id):
            vec = vec * lam_msg(child_id)
        lam_cache[node_id] = vec
        return vec

    def lam_msg(child_id: str) -> np.ndarray:
        # Message from child to its parent, over the parent's states.
        if child_id in lam_msg_cache:
            return lam_msg_cache[child_id]
        child = network.node(child_id)
        msg = np.asarray(child.cpt) @ lam(child_id)
        lam_msg_cache[child_id] = msg
        return msg

    def pi(node_id: str) -> np.ndarray:
        if node_id in pi_cache:
            return pi_cache[node_id]
        node = network.node(node_id)
        if node.is_root:
            vec = np.asarray(node.prior, dtype=float)
        else:
            vec = pi_msg(node.parent, node_id) @ np.asarray(node.cpt)
        pi_cache[node_id] = vec
        return vec

    def pi_msg(parent_id: str, child_id: str) -> np.ndarray:
        # Everything the parent knows except what came up from this child.
        parent = network.node(parent_id)
        vec = pi(parent_id).copy()
        local = local_evidence(parent)
        if local is not None:
            vec = vec * local
        for other_id in network.children(parent_id):
            if other_id != child_id:
                vec = vec * lam_msg(other_id)
        total = vec.sum()
        if total <= 0.0:
            raise ContradictoryEvidenceError(
                f"evidence leaves no mass on node {parent_id!r}"
            )
        return vec / total

    result: dict[str, NodeState] = {}
    for node_id in network.node_ids:
        pi_vec = pi(node_id)
        lam_vec = lam(node_id)
        bel = fuse_belief(pi_vec, lam_vec)
        result[node_id] = NodeState(
            pi=tuple(float(v) for v in pi_vec),
            lam=tuple(float(v) for v in lam_vec),
            bel=bel.values,
            alpha=bel.alpha,
        )
    return result


def initial_history(network: Network) -> History:
    """History holding the no-evidence snapshot at t=0."""
    snapshot = Snapshot(t=0, nodes=propagate(network, {}), grounded=())
    return History(network=network, snapshots=(snapshot,))


def ground_evidence(history: History, node_id: str, state: str) -> History:
    """Append the snapshot obtained by grounding ``node_id`` to ``state``."""
    network = history.network
    state = network.resolve_state(node_id, state)
    last = history.snapshots[-1]
    for grounded_node, grounded_state in last.grounded:
        if grounded_node == node_id:
            raise AlreadyGroundedError(
                f"node {node_id!r} already grounded to {grounded_state!r}"
            )
    idx = network.state_index(node_id, state)
    if last.nodes[node_id].bel[idx] <= 0.0:
        raise ContradictoryEvidenceError(
            f"state {state!r} of node {node_id!r} has zero posterior probability"
        )
    evidence = dict(last.grounded)
    evidence[node_id] = state
    snapshot = Snapshot(
        t=last.t + 1,
        nodes=propagate(network, evidence),
        grounded=last.grounded + ((node_id, state),),
    )
    return History(network=network, snapshots=history.snapshots + (snapshot,))


def run_scenario(network: Network, groundings: Iterable[tuple[str, str]]) -> History:
    history = initial_history(network)
    for node_id, state in groundings:
        history = ground_evidence(history, node_id, state)
    return history


def _validate_support(values: Sequence[float], what: str) -> tuple[float, ...]:
    vec = tuple(float(v) for v in values)
    if not vec:
        raise InjectionError(f"{what}: empty vector")
    if any(v < 0.0 for v in vec):
        raise InjectionError(f"{what}: negative entry")
    if all(v == 0.0 for v in vec):
        raise InjectionError(f"{what}: no positive entry")
    return vec


@dataclass(frozen=True)
class InjectedNode:
    """Per-timestep (pi, lambda) pairs for one node, as recorded externally."""

    node: str
    timesteps: tuple[tuple[tuple[float, ...], tuple[float, ...]], ...]
    states: Optional[tuple[str, ...]] = None


def inject_snapshots(
    injected: Sequence[InjectedNode] | InjectedNode,
    groundings: Optional[Sequence[tuple[str, str]]] = None,
) -> History:
    """Build a history directly from recorded support vectors.

    Beliefs are recomputed by fusion rather than trusted from the input. The
    backing network is a virtual one-root-per-node stub (priors set to each
    node's t=0 pi) that exists to carry ids and state labels; the snapshots
    hold the injected vectors verbatim.
    """
    if isinstance(injected, InjectedNode):
        injected = [injected]
    if not injected:
        raise InjectionError("no nodes to inject")
    n_steps = len(injected[0].timesteps)
    if n_steps == 0:
        raise InjectionError("at least one timestep required")

    nodes = []
    for spec in injected:
        if len(spec.timesteps) != n_steps:
            raise InjectionError(
                f"node {spec.node!r} has {len(spec.timesteps)} timesteps, "
                f"expected {n_steps}"
            )
        n = len(spec.timesteps[0][0])
        for t, (pi_vec, lam_vec) in enumerate(spec.timesteps):
            if len(pi_vec) != n or len(lam_vec) != n:
                raise InjectionError(
                    f"node {spec.node!r}: inconsistent state counts across timesteps"
                )
            _validate_support(pi_vec, f"node {spec.node!r} pi at t={t}")
            _validate_support(lam_vec, f"node {spec.node!r} lambda at t={t}")
            if abs(sum(pi_vec) - 1.0) > NORM_TOL:
                raise InjectionError(
                    f"node {spec.node!r} pi at t={t} sums to {sum(pi_vec)}"
                )
        states = spec.states or tuple(
            f"{spec.node.lower()}_{k + 1}" for k in range(n)
        )
        if len(states) != n:
            raise InjectionError(
                f"node {spec.node!r}: {len(states)} labels for {n} states"
            )
        nodes.append(Node(id=spec.node, states=tuple(states), prior=spec.timesteps[0][0]))
    network = Network(nodes)

    if groundings is None:
        groundings = [(f"evidence_{t}", "observed") for t in range(1, n_steps)]
    groundings = [tuple(g) for g in groundings]
    if len(groundings) != n_steps - 1:
        raise InjectionError(
            f"{len(groundings)} grounding labels for {n_steps} timesteps "
            f"(need {n_steps - 1})"
        )

    snapshots = []
    for t in range(n_steps):
        node_states = {}
        for spec in injected:
            pi_vec, lam_vec = spec.timesteps[t]
            bel = fuse_belief(pi_vec, lam_vec)
            node_states[spec.node] = NodeState(
                pi=tuple(pi_vec), lam=tuple(lam_vec), bel=bel.values, alpha=bel.alpha
            )
        snapshots.append(
            Snapshot(t=t, nodes=node_states, grounded=tuple(groundings[:t]))
        )
    return History(network=network, snapshots=tuple(snapshots))


def load_injection(source: str | bytes | dict) -> History:
    """Parse a snapshot-injection document.

    Schema: ``{"node": "...", "timesteps": [{"pi": [...], "lambda": [...]},
    ...]}`` plus optional ``"states"`` (labels) and ``"groundings"``
    (``[{"node": ..., "state": ...}]``, one per transition).
    """
    if isinstance(source, (str, bytes)):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise InjectionError(f"not valid JSON: {exc}") from None
    else:
        doc = source
    if not isinstance(doc, dict):
        raise InjectionError("top-level value must be an object")
    specs = doc.get("nodes", [doc])
    injected = []
    for raw in specs:
        try:
            node = raw["node"]
            steps = raw["timesteps"]
        except (KeyError, TypeError) as exc:
            raise InjectionError(f'missing key {exc} in injection document') from None
        timesteps = []
        for k, step in enumerate(steps):
            if "pi" not in step or "lambda" not in step:
                raise InjectionError(f'timestep {k}: needs "pi" and "lambda"')
            timesteps.append(
                (
                    tuple(float(v) for v in step["pi"]),
                    tuple(float(v) for v in step["lambda"]),
                )
            )
        states = raw.get("states")
        injected.append(
            InjectedNode(
                node=node,
                timesteps=tuple(timesteps),
                states=tuple(states) if states is not None else None,
            )
        )
    groundings = None
    if "groundings" in doc:
        groundings = [(g["node"], g["state"]) for g in doc["groundings"]]
    return inject_snapshots(injected, groundings=groundings)


def load_scenario(source: str | bytes | dict) -> list[tuple[str, str]]:
    """Parse a scenario document: ``{"groundings": [{"node", "state"}, ...]}``."""
    if isinstance(source, (str, bytes)):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise InjectionError(f"not valid JSON: {exc}") from None
    else:
        doc = source
    if not isinstance(doc, dict) or "groundings" not in doc:
        raise InjectionError('scenario document must have a "groundings" array')
    out = []
    for k, g in enumerate(doc["groundings"]):
        try:
            out.append((g["node"], g["state"]))
        except (KeyError, TypeError):
            raise InjectionError(
                f'groundings[{k}] must be an object with "node" and "state"'
            ) from None
    return out


def snapshot_to_json_dict(snapshot: Snapshot, network: Network) -> dict[str, Any]:
    return {
        "t": snapshot.t,
        "grounded": [{"node": n, "state": s} for n, s in snapshot.grounded],
        "nodes": {
            node_id: {
                "states": list(network.node(node_id).states),
                "pi": list(ns.pi),
                "lambda": list(ns.lam),
                "bel": list(ns.bel),
                "alpha": ns.alpha,
            }
            for node_id, ns in snapshot.nodes.items()
        },
    }


def history_to_json_dict(history: History) -> dict[str, Any]:
    return {
        "network_id": history.network_id,
        "snapshots": [
            snapshot_to_json_dict(s, history.network) for s in history.snapshots
        ],
    }
