"""Request and response schemas for the session service."""

from __future__ import annotations

from typing import Optional, Union

from pydantic import BaseModel, Field


class CreateSessionRequest(BaseModel):
    """Graph spec, initial fire, and schedule for a new game.

    `graph` and `schedule` use the same shapes as experiment configs;
    `fire` is a list of vertex ids or {"ball": r} around the basepoint.
    """

    graph: dict
    fire: Union[list[str], dict]
    schedule: dict
    view_radius: int = Field(default=6, ge=1, le=30)


class ProtectRequest(BaseModel):
    """Pending-protection edits: add `protect`, drop `unprotect`.

    Pending protections commit on step; until then they are revocable.
    """

    protect: list[str] = Field(default_factory=list)
    unprotect: list[str] = Field(default_factory=list)


class VertexView(BaseModel):
    id: str
    distance: int
    status: str  # burning | protected | open
    layout: Optional[tuple[float, float]] = None


class BoardView(BaseModel):
    session: str
    time: int
    budget: int  # budget of the next turn, f(time + 1)
    contained: bool
    contained_at: Optional[int]
    fire_size: int
    total_protected: int
    pending: list[str]
    radius: int
    vertices: list[VertexView]
    edges: list[tuple[int, int]]


class SessionCreated(BaseModel):
    id: str
    view: BoardView


class HintResponse(BaseModel):
    hint: list[str]
    advisory: bool = True


class ErrorBody(BaseModel):
    code: str
    detail: str
    offending: list[str] = Field(default_factory=list)
