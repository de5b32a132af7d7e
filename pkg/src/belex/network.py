"""Discrete tree-structured belief networks.

A network is a directed forest: every node has at most one parent. Roots carry
a prior over their states; non-roots carry a conditional probability table
whose row ``j`` is the distribution over the child's states given parent
state ``j``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Any, Iterable, Optional

from .errors import InvalidNetworkError, UnknownNodeError, UnknownStateError

NORM_TOL = 1e-9


@dataclass(frozen=True)
class Node:
    id: str
    states: tuple[str, ...]
    prior: Optional[tuple[float, ...]] = None
    parent: Optional[str] = None
    cpt: Optional[tuple[tuple[float, ...], ...]] = None

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def is_root(self) -> bool:
        return self.parent is None


def _check_distribution(values: Iterable[float], what: str) -> tuple[float, ...]:
    row = tuple(float(v) for v in values)
    for v in row:
        if not (0.0 <= v <= 1.0):
            raise InvalidNetworkError(f"{what}: entry {v} outside [0, 1]")
    total = sum(row)
    if abs(total - 1.0) > NORM_TOL:
        raise InvalidNetworkError(f"{what}: sums to {total}, expected 1")
    return row


class Network:
    """Validated, immutable forest of discrete nodes."""

    def __init__(self, nodes: Iterable[Node]):
        node_list = list(nodes)
        self._nodes: dict[str, Node] = {}
        for node in node_list:
            if node.id in self._nodes:
                raise InvalidNetworkError(f"duplicate node id {node.id!r}")
            self._nodes[node.id] = node
        self._validate()
        children: dict[str, list[str]] = {nid: [] for nid in self._nodes}
        for node in node_list:
            if node.parent is not None:
                children[node.parent].append(node.id)
        self._children = {nid: tuple(ids) for nid, ids in children.items()}
        self.id = self._content_hash()

    def _validate(self) -> None:
        for node in self._nodes.values():
            if node.n_states < 2:
                raise InvalidNetworkError(
                    f"node {node.id!r}: fewer than 2 states"
                )
            if len(set(node.states)) != node.n_states:
                raise InvalidNetworkError(f"node {node.id!r}: duplicate state labels")
            has_prior = node.prior is not None
            has_cpt = node.parent is not None or node.cpt is not None
            if has_prior == has_cpt:
                raise InvalidNetworkError(
                    f"node {node.id!r}: exactly one of prior or parent+cpt required"
                )
            if has_prior:
                if len(node.prior) != node.n_states:
                    raise InvalidNetworkError(
                        f"node {node.id!r}: prior length {len(node.prior)} != "
                        f"{node.n_states} states"
                    )
                _check_distribution(node.prior, f"node {node.id!r} prior")
            else:
                if node.parent is None or node.cpt is None:
                    raise InvalidNetworkError(
                        f"node {node.id!r}: parent and cpt must be given together"
                    )
                parent = self._nodes.get(node.parent)
                if parent is None:
                    raise InvalidNetworkError(
                        f"node {node.id!r}: unknown parent {node.parent!r}"
                    )
                if len(node.cpt) != parent.n_states:
                    raise InvalidNetworkError(
                        f"node {node.id!r}: cpt has {len(node.cpt)} rows, parent "
                        f"{parent.id!r} has {parent.n_states} states"
                    )
                for j, row in enumerate(node.cpt):
                    if len(row) != node.n_states:
                        raise InvalidNetworkError(
                            f"node {node.id!r}: cpt row {j} has {len(row)} entries, "
                            f"expected {node.n_states}"
                        )
                    _check_distribution(row, f"node {node.id!r} cpt row {j}")
        # Parent chains must terminate (no cycles).
        for nid in self._nodes:
            seen = {nid}
            cur = self._nodes[nid].parent
            while cur is not None:
                if cur in seen:
                    raise InvalidNetworkError(f"cycle through node {cur!r}")
                seen.add(cur)
                cur = self._nodes[cur].parent

    def _content_hash(self) -> str:
        digest = hashlib.sha256(
            json.dumps(self.to_document(), sort_keys=True).encode("utf-8")
        ).hexdigest()
        return digest[:12]

    def __iter__(self):
        return iter(self._nodes.values())

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    @property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(self._nodes)

    @property
    def roots(self) -> tuple[str, ...]:
        return tuple(nid for nid, n in self._nodes.items() if n.is_root)

    def node(self, node_id: str) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownNodeError(f"unknown node {node_id!r}") from None

    def children(self, node_id: str) -> tuple[str, ...]:
        self.node(node_id)
        return self._children[node_id]

    def state_index(self, node_id: str, state: str) -> int:
        node = self.node(node_id)
        try:
            return node.states.index(state)
        except ValueError:
            raise UnknownStateError(
                f"node {node_id!r} has no state {state!r} "
                f"(states: {', '.join(node.states)})"
            ) from None

    def resolve_state(self, node_id: str, state: str) -> str:
        """Return the canonical state label for ``state``.

        Exact labels win; otherwise a unique case- and underscore-insensitive
        match is accepted, so ``b1`` resolves the label ``b_1``.
        """
        node = self.node(node_id)
        if state in node.states:
            return state
        key = state.replace("_", "").lower()
        matches = [s for s in node.states if s.replace("_", "").lower() == key]
        if len(matches) == 1:
            return matches[0]
        raise UnknownStateError(
            f"node {node_id!r} has no state {state!r} "
            f"(states: {', '.join(node.states)})"
        )

    def to_document(self) -> dict[str, Any]:
        nodes = []
        for node in self._nodes.values():
            entry: dict[str, Any] = {"id": node.id, "states": list(node.states)}
            if node.prior is not None:
                entry["prior"] = list(node.prior)
            else:
                entry["parent"] = node.parent
                entry["cpt"] = [list(row) for row in node.cpt]
            nodes.append(entry)
        return {"nodes": nodes}


def load_network(source: str | bytes | dict) -> Network:
    """Parse and validate a network document (JSON text or already-parsed dict)."""
    if isinstance(source, (str, bytes)):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise InvalidNetworkError(f"not valid JSON: {exc}") from None
    else:
        doc = source
    if not isinstance(doc, dict) or "nodes" not in doc:
        raise InvalidNetworkError('top-level object must have a "nodes" array')
    raw_nodes = doc["nodes"]
    if not isinstance(raw_nodes, list) or not raw_nodes:
        raise InvalidNetworkError('"nodes" must be a non-empty array')
    nodes = []
    for k, raw in enumerate(raw_nodes):
        if not isinstance(raw, dict):
            raise InvalidNetworkError(f"nodes[{k}] is not an object")
        unknown = set(raw) - {"id", "states", "prior", "parent", "cpt"}
        if unknown:
            raise InvalidNetworkError(
                f"nodes[{k}]: unknown keys {sorted(unknown)}"
            )
        try:
            node_id = raw["id"]
            states = raw["states"]
        except KeyError as exc:
            raise InvalidNetworkError(f"nodes[{k}]: missing {exc}") from None
        if not isinstance(node_id, str) or not node_id:
            raise InvalidNetworkError(f"nodes[{k}]: id must be a non-empty string")
        if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
            raise InvalidNetworkError(f"node {node_id!r}: states must be strings")
        prior = raw.get("prior")
        parent = raw.get("parent")
        cpt = raw.get("cpt")
        nodes.append(
            Node(
                id=node_id,
                states=tuple(states),
                prior=tuple(float(v) for v in prior) if prior is not None else None,
                parent=parent,
                cpt=tuple(tuple(float(v) for v in row) for row in cpt)
                if cpt is not None
                else None,
            )
        )
    return Network(nodes)
