"""In-memory session store.

Each session owns one game plus the not-yet-committed protection picks.
Mutations take the session's lock (requests within a session are
serialized; distinct sessions are independent).  Sessions idle past the
TTL are evicted lazily on the next store access.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Optional

from .. import __version__
from ..config import config_hash
from ..engine import Game, TurnRecord
from ..trace import game_records, trace_header
from ..engine import ContainmentReport


@dataclass
class Session:
    id: str
    game: Game
    graph_spec: dict
    fire_spec: list
    schedule_spec: dict
    view_radius: int
    pending: list[str] = field(default_factory=list)
    turn_log: list[TurnRecord] = field(default_factory=list)
    created: float = field(default_factory=time.monotonic)
    updated: float = field(default_factory=time.monotonic)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def touch(self) -> None:
        self.updated = time.monotonic()

    def canonical_config(self) -> dict:
        return {
            "graph": self.graph_spec,
            "fire": self.fire_spec,
            "schedule": self.schedule_spec,
        }

    def trace_records(self) -> list[dict]:
        """Trace of the committed rounds so far; horizon = rounds played."""
        state = self.game.state
        horizon = len(self.turn_log)
        header = trace_header(
            __version__,
            config_hash(self.canonical_config()),
            self.graph_spec,
            list(self.game.initial_fire),
            self.schedule_spec,
            horizon,
            {"name": "interactive", "parameters": {}},
        )
        report = ContainmentReport(
            outcome="contained" if state.contained else "undetermined",
            contained_at=state.contained_at,
            final_fire_size=state.fire_size,
            total_protected=len(state.protected_all),
            horizon=horizon,
            per_turn=tuple(self.turn_log),
        )
        return game_records(header, report)


class SessionStore:
    def __init__(self, ttl_seconds: float = 3600.0):
        self.ttl = ttl_seconds
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def _evict_idle(self) -> None:
        now = time.monotonic()
        stale = [sid for sid, s in self._sessions.items() if now - s.updated > self.ttl]
        for sid in stale:
            del self._sessions[sid]

    def add(self, session: Session) -> None:
        with self._lock:
            self._evict_idle()
            self._sessions[session.id] = session

    def get(self, session_id: str) -> Optional[Session]:
        with self._lock:
            self._evict_idle()
            return self._sessions.get(session_id)

    def __len__(self) -> int:
        with self._lock:
            return len(self._sessions)


def new_session_id() -> str:
    return uuid.uuid4().hex
