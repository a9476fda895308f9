"""Turn-based fire containment game on a graph.

One round at turn n >= 1: the defender protects a set W_n of unburnt,
unprotected vertices with |W_n| <= f(n), then the fire spreads from
every burning vertex to each unprotected neighbor.  Protection is
permanent, unused budget is forfeit, and the fire never shrinks.  The
fire is contained once no unprotected unburnt neighbor remains; from
that point every further round leaves the burnt set unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import GraphProvider, VertexId, ball
from .errors import (
    BudgetExceededError,
    DoubleProtectionError,
    EmptyFireError,
    ProtectingBurningVertexError,
    StrategyFaultError,
)


@dataclass(frozen=True)
class BudgetSchedule:
    """Per-turn protection budget f(n) = floor(C * n^d)."""

    C: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "C", Fraction(self.C))
        if self.C < 0:
            raise ValueError(f"budget coefficient must be >= 0, got {self.C}")
        if self.d < 0:
            raise ValueError(f"budget degree must be >= 0, got {self.d}")

    def __call__(self, n: int) -> int:
        if n < 1:
            raise ValueError(f"turn index must be >= 1, got {n}")
        return math.floor(self.C * n**self.d)

    def cumulative(self, n: int) -> int:
        """Total budget available over turns 1..n."""
        return sum(self(k) for k in range(1, n + 1))

    def describe(self) -> str:
        return f"floor({self.C} * n^{self.d})"

    def to_record(self) -> dict:
        return {"C": str(self.C), "d": self.d}


@dataclass(frozen=True)
class FireState:
    """Immutable snapshot after `time` completed rounds.

    `frontier` is derived: the unprotected, unburnt neighbors of the
    fire.  `contained_at` records the first round after which the fire
    stopped growing (0 when the initial fire already has no frontier)
    and persists through any further rounds.
    """

    time: int
    burning: frozenset[VertexId]
    protected_all: frozenset[VertexId]
    frontier: frozenset[VertexId]
    contained_at: Optional[int]

    @property
    def contained(self) -> bool:
        return self.contained_at is not None

    @property
    def fire_size(self) -> int:
        return len(self.burning)


def _frontier(
    graph: GraphProvider,
    burning: frozenset[VertexId],
    protected_all: frozenset[VertexId],
) -> frozenset[VertexId]:
    out = set()
    for v in burning:
        for w in graph.neighbors(v):
            if w not in burning and w not in protected_all:
                out.add(w)
    return frozenset(out)


class Game:
    """A running game: a graph, a budget schedule, and the current state.

    States are immutable snapshots; `step` replaces `self.state`.  All
    validation lives in `check_protection` so that callers (the HTTP
    service in particular) can vet a request without committing it.
    """

    def __init__(
        self,
        graph: GraphProvider,
        fire: Iterable[VertexId],
        schedule: BudgetSchedule,
    ):
        self.graph = graph
        self.schedule = schedule
        initial = sorted(set(fire))
        if not initial:
            raise EmptyFireError()
        for v in initial:
            graph.validate(v)
        burning = frozenset(initial)
        frontier = _frontier(graph, burning, frozenset())
        self.state = FireState(
            time=0,
            burning=burning,
            protected_all=frozenset(),
            frontier=frontier,
            contained_at=None if frontier else 0,
        )
        self.initial_fire = tuple(initial)

    def check_protection(self, protect: Sequence[VertexId]) -> list[VertexId]:
        """Validate a protection request against the current state.

        Returns the sorted list of vertices to protect, or raises the
        specific game error naming the offending vertices.
        """
        state = self.state
        requested = list(protect)
        seen: set[VertexId] = set()
        dupes: set[VertexId] = set()
        for v in requested:
            if v in seen:
                dupes.add(v)
            seen.add(v)
        if dupes:
            raise DoubleProtectionError(sorted(dupes))
        for v in requested:
            self.graph.validate(v)
        burning = sorted(v for v in requested if v in state.burning)
        if burning:
            raise ProtectingBurningVertexError(burning)
        already = sorted(v for v in requested if v in state.protected_all)
        if already:
            raise DoubleProtectionError(already)
        budget = self.schedule(state.time + 1)
        if len(requested) > budget:
            raise BudgetExceededError(len(requested), budget, sorted(requested))
        return sorted(requested)

    def step(self, protect: Sequence[VertexId] = ()) -> FireState:
        """Play one round: protect `protect`, then spread the fire.

        Rounds after containment are legal; the spread is then a no-op
        and `contained_at` keeps its original value.
        """
        chosen = self.check_protection(protect)
        state = self.state
        protected_all = state.protected_all | frozenset(chosen)
        spread = _frontier(self.graph, state.burning, protected_all)
        burning = state.burning | spread
        frontier = _frontier(self.graph, burning, protected_all)
        time = state.time + 1
        contained_at = state.contained_at
        if contained_at is None and not frontier:
            contained_at = time
        self.state = FireState(
            time=time,
            burning=burning,
            protected_all=protected_all,
            frontier=frontier,
            contained_at=contained_at,
        )
        return self.state


def new_game(
    graph: GraphProvider,
    fire: Iterable[VertexId],
    schedule: BudgetSchedule,
) -> Game:
    return Game(graph, fire, schedule)


@dataclass(frozen=True)
class TurnRecord:
    n: int
    protected: tuple[VertexId, ...]
    fire_size: int
    budget: int

    def to_record(self) -> dict:
        return {
            "type": "turn",
            "n": self.n,
            "protected": list(self.protected),
            "fire_size": self.fire_size,
            "budget": self.budget,
        }


@dataclass(frozen=True)
class ContainmentReport:
    """Outcome of `play`.

    outcome is "contained" when the fire stopped growing by the
    horizon, "escaped-horizon" when it reached the escape radius, and
    "undetermined" otherwise: a finite horizon on an infinite graph
    cannot distinguish "never contained" from "not yet contained".
    """

    outcome: str
    contained_at: Optional[int]
    final_fire_size: int
    total_protected: int
    horizon: int
    per_turn: tuple[TurnRecord, ...]

    @property
    def contained(self) -> bool:
        return self.outcome == "contained"

    def to_record(self) -> dict:
        return {
            "type": "result",
            "outcome": self.outcome,
            "contained_at": self.contained_at,
            "final_fire_size": self.final_fire_size,
            "total_protected": self.total_protected,
            "horizon": self.horizon,
        }


def play(
    graph: GraphProvider,
    fire: Iterable[VertexId],
    schedule: BudgetSchedule,
    strategy,
    horizon: int,
    escape_radius: Optional[int] = None,
    observer=None,
) -> ContainmentReport:
    """Run `strategy` for at most `horizon` rounds and report the outcome.

    The strategy is queried each round via
    `strategy.choose(state, budget, graph)`.  Any exception it raises,
    and any illegal move it returns, is re-raised as a strategy fault
    naming the turn.  With `escape_radius` set, the run stops with
    outcome "escaped-horizon" as soon as the fire reaches that distance
    from the initial fire.  `observer(n, protected, state)` is called
    after each completed round.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    game = Game(graph, fire, schedule)
    escape_set: frozenset[VertexId] = frozenset()
    if escape_radius is not None:
        if escape_radius < 1:
            raise ValueError(f"escape radius must be >= 1, got {escape_radius}")
        b = ball(graph, game.initial_fire, escape_radius)
        escape_set = frozenset(b.sphere(escape_radius))
    turns: list[TurnRecord] = []
    escaped = False
    for n in range(1, horizon + 1):
        if game.state.contained:
            break
        budget = game.schedule(n)
        try:
            chosen = list(strategy.choose(game.state, budget, game.graph))
            state = game.step(chosen)
        except Exception as exc:
            raise StrategyFaultError(n, exc) from exc
        turns.append(TurnRecord(n, tuple(sorted(chosen)), state.fire_size, budget))
        if observer is not None:
            observer(n, sorted(chosen), state)
        if escape_set and not escape_set.isdisjoint(state.burning):
            escaped = True
            break
    state = game.state
    if state.contained:
        outcome = "contained"
    elif escaped:
        outcome = "escaped-horizon"
    else:
        outcome = "undetermined"
    return ContainmentReport(
        outcome=outcome,
        contained_at=state.contained_at,
        final_fire_size=state.fire_size,
        total_protected=len(state.protected_all),
        horizon=horizon,
        per_turn=tuple(turns),
    )
