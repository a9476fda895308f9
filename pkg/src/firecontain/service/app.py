"""HTTP session server for interactive games.

All mutations go through the game engine; the server validates protect
requests with the engine's own precondition check so an illegal request
leaves the session untouched.  Errors come back as JSON bodies with a
machine-readable `code` plus the offending vertex ids.

Endpoints (all JSON):
  POST /sessions                     create a game, returns id + view
  GET  /sessions/{id}/view           radius-limited board window
  POST /sessions/{id}/protect        stage/withdraw pending protections
  POST /sessions/{id}/step           commit pending picks, spread fire
  GET  /sessions/{id}/hint           advisory greedy-frontier suggestion
  GET  /sessions/{id}/trace          JSONL trace of the rounds so far
"""

from __future__ import annotations

import math
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import __version__
from ..config import normalize_fire, normalize_graph, normalize_schedule, build_provider, build_schedule, resolve_fire
from ..core import ball
from ..engine import FireState, Game, TurnRecord, _frontier
from ..errors import ConfigError, FirecontainError, NotPendingError, UnknownSessionError
from ..strategies import GreedyFrontierStrategy
from ..trace import render_trace
from .models import (
    BoardView,
    CreateSessionRequest,
    ErrorBody,
    HintResponse,
    ProtectRequest,
    SessionCreated,
    VertexView,
)
from .sessions import Session, SessionStore, new_session_id

# A view is a small window for rendering; balls bigger than this are a
# sign the radius is far too large for the graph's growth.
VIEW_VERTEX_CAP = 50_000


def _status_for(exc: FirecontainError) -> int:
    if isinstance(exc, UnknownSessionError):
        return 404
    if isinstance(exc, ConfigError):
        return 400
    return 422


def _radial_layout(vertices) -> list[Optional[tuple[float, float]]]:
    """BFS-layer fallback: ring per distance, evenly spaced."""
    by_distance: dict[int, int] = {}
    for _, d in vertices:
        by_distance[d] = by_distance.get(d, 0) + 1
    seen: dict[int, int] = {}
    coords = []
    for _, d in vertices:
        k = seen.get(d, 0)
        seen[d] = k + 1
        count = by_distance[d]
        r = float(d) if d > 0 else (0.0 if count == 1 else 0.5)
        angle = 2.0 * math.pi * k / count
        coords.append((round(r * math.cos(angle), 6), round(r * math.sin(angle), 6)))
    return coords


def _board_view(session: Session, radius: Optional[int] = None) -> BoardView:
    game = session.game
    state = game.state
    r = session.view_radius if radius is None else radius
    window = ball(game.graph, state.burning, r, max_vertices=VIEW_VERTEX_CAP)
    layouts = [game.graph.layout(vid) for vid, _ in window.vertices]
    if any(pt is None for pt in layouts):
        layouts = _radial_layout(window.vertices)
    vertices = []
    for (vid, dist), pt in zip(window.vertices, layouts):
        if vid in state.burning:
            status = "burning"
        elif vid in state.protected_all:
            status = "protected"
        else:
            status = "open"
        vertices.append(VertexView(id=vid, distance=dist, status=status, layout=pt))
    return BoardView(
        session=session.id,
        time=state.time,
        budget=game.schedule(state.time + 1),
        contained=state.contained,
        contained_at=state.contained_at,
        fire_size=state.fire_size,
        total_protected=len(state.protected_all),
        pending=list(session.pending),
        radius=r,
        vertices=vertices,
        edges=list(window.edges),
    )


def create_app(session_ttl: float = 3600.0) -> FastAPI:
    app = FastAPI(title="firecontain session service", version=__version__)
    # Sessions are anonymous and capability-addressed by id, so a browser
    # client served from another origin (the bundled UI dev server) may
    # call freely; no cookies or credentials are involved.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(ttl_seconds=session_ttl)
    app.state.store = store

    @app.exception_handler(FirecontainError)
    async def _on_error(request: Request, exc: FirecontainError):
        body = ErrorBody(
            code=exc.code,
            detail=str(exc),
            offending=list(getattr(exc, "offending", [])),
        )
        return JSONResponse(status_code=_status_for(exc), content=body.model_dump())

    def _session(session_id: str) -> Session:
        session = store.get(session_id)
        if session is None:
            raise UnknownSessionError(session_id)
        return session

    @app.post("/sessions", response_model=SessionCreated, status_code=201)
    def create_session(body: CreateSessionRequest) -> SessionCreated:
        graph_spec = normalize_graph(body.graph)
        schedule_spec = normalize_schedule(body.schedule)
        normalize_fire(body.fire)
        provider = build_provider(graph_spec)
        fire_ids = resolve_fire(body.fire, provider)
        game = Game(provider, fire_ids, build_schedule(schedule_spec))
        session = Session(
            id=new_session_id(),
            game=game,
            graph_spec=graph_spec,
            fire_spec=fire_ids,
            schedule_spec=schedule_spec,
            view_radius=body.view_radius,
        )
        store.add(session)
        return SessionCreated(id=session.id, view=_board_view(session))

    @app.get("/sessions/{session_id}/view", response_model=BoardView)
    def get_view(
        session_id: str,
        radius: Optional[int] = Query(default=None, ge=1, le=30),
    ) -> BoardView:
        session = _session(session_id)
        with session.lock:
            session.touch()
            return _board_view(session, radius)

    @app.post("/sessions/{session_id}/protect", response_model=BoardView)
    def post_protect(session_id: str, body: ProtectRequest) -> BoardView:
        session = _session(session_id)
        with session.lock:
            drop = set(body.unprotect)
            missing = sorted(drop - set(session.pending))
            if missing:
                raise NotPendingError(missing)
            kept = [v for v in session.pending if v not in drop]
            staged = session.game.check_protection(kept + list(body.protect))
            session.pending = staged
            session.touch()
            return _board_view(session)

    @app.post("/sessions/{session_id}/step", response_model=BoardView)
    def post_step(session_id: str) -> BoardView:
        session = _session(session_id)
        with session.lock:
            game = session.game
            n = game.state.time + 1
            budget = game.schedule(n)
            chosen = list(session.pending)
            state = game.step(chosen)
            session.turn_log.append(
                TurnRecord(
                    n=n,
                    protected=tuple(chosen),
                    fire_size=state.fire_size,
                    budget=budget,
                )
            )
            session.pending = []
            session.touch()
            return _board_view(session)

    @app.get("/sessions/{session_id}/hint", response_model=HintResponse)
    def get_hint(session_id: str) -> HintResponse:
        session = _session(session_id)
        with session.lock:
            game = session.game
            state = game.state
            protected = state.protected_all | frozenset(session.pending)
            hypothetical = FireState(
                time=state.time,
                burning=state.burning,
                protected_all=protected,
                frontier=_frontier(game.graph, state.burning, protected),
                contained_at=state.contained_at,
            )
            remaining = max(game.schedule(state.time + 1) - len(session.pending), 0)
            hint = GreedyFrontierStrategy().choose(hypothetical, remaining, game.graph)
            session.touch()
            return HintResponse(hint=hint, advisory=True)

    @app.get("/sessions/{session_id}/trace", response_class=PlainTextResponse)
    def get_trace(session_id: str) -> PlainTextResponse:
        session = _session(session_id)
        with session.lock:
            text = render_trace(session.trace_records())
            session.touch()
        return PlainTextResponse(text, media_type="application/x-ndjson")

    return app
