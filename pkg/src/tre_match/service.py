"""HTTP service wrapping the matcher.

POST /match runs an offline match in one shot. Streaming goes through
sessions: create one with an expression, feed segments, flush to close.
Zones come back with the same twelve bounds the CSV format uses.
"""

from __future__ import annotations

import threading
import uuid

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .behavior import BehaviorSyntaxError, Segment, parse_behavior
from .cli import _bound_pair
from .expr import ExprSyntaxError, parse_expr
from .offline import FixpointCapError, match
from .online import Engine, EngineClosedError
from .zone import Zone


class ZoneModel(BaseModel):
    bmin: int
    bmin_strict: int
    bmax: int
    bmax_strict: int
    emin: int
    emin_strict: int
    emax: int
    emax_strict: int
    dmin: int
    dmin_strict: int
    dmax: int
    dmax_strict: int


class MatchRequest(BaseModel):
    expression: str
    behavior: str
    fixpoint_cap: int | None = None


class MatchResponse(BaseModel):
    zones: list[ZoneModel]
    count: int


class SessionRequest(BaseModel):
    expression: str
    fixpoint_cap: int | None = None


class SessionResponse(BaseModel):
    session_id: str


class SegmentRequest(BaseModel):
    duration: int
    props: str = ""


class EmissionResponse(BaseModel):
    zones: list[ZoneModel]
    count: int
    frontier: int
    closed: bool


def zone_to_model(z: Zone) -> ZoneModel:
    b = _bound_pair(z.nl_b, z.ub_b)
    e = _bound_pair(z.nl_e, z.ub_e)
    d = _bound_pair(z.nl_d, z.ub_d)
    return ZoneModel(
        bmin=b[0], bmin_strict=b[1], bmax=b[2], bmax_strict=b[3],
        emin=e[0], emin_strict=e[1], emax=e[2], emax_strict=e[3],
        dmin=d[0], dmin_strict=d[1], dmax=d[2], dmax_strict=d[3],
    )


app = FastAPI(title="tre-match")

_sessions: dict[str, Engine] = {}
_lock = threading.Lock()


def _parse_or_400(expression: str):
    try:
        return parse_expr(expression)
    except ExprSyntaxError as err:
        raise HTTPException(status_code=400, detail=f"expression error: {err}")


def _session_or_404(session_id: str) -> Engine:
    engine = _sessions.get(session_id)
    if engine is None:
        raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
    return engine


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "sessions": len(_sessions)}


@app.post("/match", response_model=MatchResponse)
def match_offline(req: MatchRequest) -> MatchResponse:
    expr = _parse_or_400(req.expression)
    try:
        behavior = parse_behavior(req.behavior)
    except BehaviorSyntaxError as err:
        raise HTTPException(status_code=400, detail=f"behavior error: {err}")
    try:
        result = match(behavior, expr, fixpoint_cap=req.fixpoint_cap)
    except FixpointCapError as err:
        raise HTTPException(status_code=422, detail=f"resource limit: {err}")
    zones = [zone_to_model(z) for z in result.zones]
    return MatchResponse(zones=zones, count=len(zones))


@app.post("/sessions", response_model=SessionResponse)
def create_session(req: SessionRequest) -> SessionResponse:
    expr = _parse_or_400(req.expression)
    session_id = uuid.uuid4().hex
    with _lock:
        _sessions[session_id] = Engine(expr, fixpoint_cap=req.fixpoint_cap)
    return SessionResponse(session_id=session_id)


@app.post("/sessions/{session_id}/segments", response_model=EmissionResponse)
def feed_segment(session_id: str, req: SegmentRequest) -> EmissionResponse:
    engine = _session_or_404(session_id)
    if req.duration < 1:
        raise HTTPException(status_code=400, detail="duration must be positive")
    if not all(c.isascii() and c.isalpha() for c in req.props):
        raise HTTPException(status_code=400, detail=f"bad proposition letters {req.props!r}")
    with _lock:
        try:
            emission = engine.feed(Segment(req.duration, frozenset(req.props)))
        except EngineClosedError:
            raise HTTPException(status_code=409, detail="session already flushed")
        except FixpointCapError as err:
            raise HTTPException(status_code=422, detail=f"resource limit: {err}")
    zones = [zone_to_model(z) for z in emission.zones.zones]
    return EmissionResponse(
        zones=zones, count=len(zones), frontier=engine.frontier, closed=engine.closed
    )


@app.post("/sessions/{session_id}/flush", response_model=EmissionResponse)
def flush_session(session_id: str) -> EmissionResponse:
    engine = _session_or_404(session_id)
    with _lock:
        try:
            emission = engine.flush()
        except EngineClosedError:
            raise HTTPException(status_code=409, detail="session already flushed")
    zones = [zone_to_model(z) for z in emission.zones.zones]
    return EmissionResponse(
        zones=zones, count=len(zones), frontier=engine.frontier, closed=engine.closed
    )


@app.delete("/sessions/{session_id}")
def delete_session(session_id: str) -> dict:
    with _lock:
        if _sessions.pop(session_id, None) is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
    return {"deleted": session_id}


def serve() -> None:
    """Console entry: run the service on 127.0.0.1:8000."""
    import uvicorn

    uvicorn.run(app, host="127.0.0.1", port=8000)
