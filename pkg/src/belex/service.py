"""HTTP service with per-session state for the interactive UI.

Sessions live in memory (optionally mirrored to JSON files under a persist
directory). Each session guards mutation with its own lock; previews and
reads never mutate.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from .errors import EngineError, InvalidRequestError, UnknownSessionError
from .expectations import DEFAULT_EPS_BEL
from .network import Network, load_network
from .planner import DEFAULT_RHO, ExplainSettings, plan_explanation
from .propagation import (
    History,
    ground_evidence,
    history_to_json_dict,
    initial_history,
    run_scenario,
    snapshot_to_json_dict,
)
from .realizer import realize

_STATUS_BY_CODE = {
    "unknown_session": 404,
    "already_grounded": 409,
    "contradictory_evidence": 422,
    "internal_inconsistency": 500,
}

_SUPPORT_KINDS = {"causal", "evidential", "auto"}


class GroundRequest(BaseModel):
    node: str
    state: str


@dataclass
class Session:
    id: str
    network: Network
    history: History
    created: float
    updated: float
    lock: threading.Lock = field(default_factory=threading.Lock)


def _parse_focal(focal: str) -> tuple[str, str]:
    node, sep, state = focal.partition(".")
    if not sep or not node or not state:
        raise InvalidRequestError(
            f"focal must look like NODE.state, got {focal!r}"
        )
    return node, state


def create_app(persist_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="belex", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()
    persist = Path(persist_dir) if persist_dir else None

    def _save(session: Session) -> None:
        if persist is None:
            return
        payload = {
            "id": session.id,
            "network": session.network.to_document(),
            "groundings": [
                {"node": n, "state": s}
                for n, s in session.history.snapshots[-1].grounded
            ],
            "created": session.created,
            "updated": session.updated,
        }
        (persist / f"{session.id}.json").write_text(json.dumps(payload, indent=2))

    def _drop(session_id: str) -> None:
        if persist is not None:
            (persist / f"{session_id}.json").unlink(missing_ok=True)

    if persist is not None:
        persist.mkdir(parents=True, exist_ok=True)
        for path in sorted(persist.glob("*.json")):
            try:
                payload = json.loads(path.read_text())
                network = load_network(payload["network"])
                history = run_scenario(
                    network,
                    [(g["node"], g["state"]) for g in payload["groundings"]],
                )
                session = Session(
                    id=payload["id"],
                    network=network,
                    history=history,
                    created=payload.get("created", time.time()),
                    updated=payload.get("updated", time.time()),
                )
                sessions[session.id] = session
            except (EngineError, KeyError, json.JSONDecodeError):
                continue  # stale or corrupt session file; leave it on disk

    def _get(session_id: str) -> Session:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise UnknownSessionError(f"no session {session_id!r}")
        return session

    @app.exception_handler(EngineError)
    async def _engine_error(request: Request, exc: EngineError):
        status = _STATUS_BY_CODE.get(exc.code, 400)
        body: dict[str, Any] = {"code": exc.code, "message": str(exc)}
        if exc.detail:
            body["detail"] = exc.detail
        return JSONResponse(status_code=status, content=body)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={
                "code": "invalid_request",
                "message": "request failed validation",
                "detail": {"errors": exc.errors()},
            },
        )

    @app.get("/api/health")
    def health():
        return {"status": "ok", "sessions": len(sessions)}

    @app.post("/api/sessions", status_code=201)
    def create_session(document: dict):
        network = load_network(document)
        now = time.time()
        session = Session(
            id=uuid.uuid4().hex,
            network=network,
            history=initial_history(network),
            created=now,
            updated=now,
        )
        with registry_lock:
            sessions[session.id] = session
        _save(session)
        return {
            "session_id": session.id,
            "network_id": network.id,
            "snapshot": snapshot_to_json_dict(session.history.snapshots[0], network),
        }

    @app.post("/api/sessions/{session_id}/ground")
    def ground(session_id: str, request: GroundRequest):
        session = _get(session_id)
        with session.lock:
            session.history = ground_evidence(
                session.history, request.node, request.state
            )
            session.updated = time.time()
            _save(session)
            snapshot = session.history.snapshots[-1]
        return snapshot_to_json_dict(snapshot, session.network)

    @app.post("/api/sessions/{session_id}/preview")
    def preview(session_id: str, request: GroundRequest):
        session = _get(session_id)
        with session.lock:
            history = session.history
        hypothetical = ground_evidence(history, request.node, request.state)
        return snapshot_to_json_dict(hypothetical.snapshots[-1], session.network)

    @app.get("/api/sessions/{session_id}/history")
    def get_history(session_id: str):
        session = _get(session_id)
        with session.lock:
            history = session.history
        return history_to_json_dict(history)

    @app.get("/api/sessions/{session_id}/explain")
    def explain(
        session_id: str,
        focal: str,
        from_t: int = Query(alias="from"),
        to: int = Query(),
        support: str = "auto",
        rho: float = DEFAULT_RHO,
        eps_bel: float = DEFAULT_EPS_BEL,
    ):
        if support not in _SUPPORT_KINDS:
            raise InvalidRequestError(
                f"support must be one of {sorted(_SUPPORT_KINDS)}, got {support!r}"
            )
        session = _get(session_id)
        with session.lock:
            history = session.history
        node, state = _parse_focal(focal)
        state = session.network.resolve_state(node, state)
        f = session.network.state_index(node, state)
        plan = plan_explanation(
            history,
            node,
            f,
            from_t,
            to,
            support,
            ExplainSettings(rho=rho, eps_bel=eps_bel),
        )
        realized = realize(plan)
        return {
            "plan": plan.to_json_dict(),
            "text": realized.text,
            "paragraphs": list(realized.paragraphs),
            "slots": realized.slots,
        }

    @app.delete("/api/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        with registry_lock:
            session = sessions.pop(session_id, None)
        if session is None:
            raise UnknownSessionError(f"no session {session_id!r}")
        _drop(session_id)
        return Response(status_code=204)

    return app


app = create_app()
