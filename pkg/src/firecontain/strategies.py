"""Containment strategies.

A strategy is queried once per turn with the current state, that turn's
budget, and the graph, and returns the vertex ids to protect.  All
strategies here are deterministic and stateless: the choice is a pure
function of (state, budget, graph, parameters), so replaying a game
reproduces it move for move.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .core import DEFAULT_VERTEX_CAP, GraphProvider, VertexId
from .engine import BudgetSchedule, FireState
from .errors import (
    CapExceededError,
    InapplicableProviderError,
    NoFeasibleRadiusError,
)
from .groups.families import BeadChainProvider


class Strategy:
    name = "strategy"

    def __init__(self):
        self.parameters: dict = {}

    def choose(
        self, state: FireState, budget: int, graph: GraphProvider
    ) -> list[VertexId]:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"name": self.name, "parameters": dict(self.parameters)}


class NullStrategy(Strategy):
    """Protects nothing; the fire spreads freely."""

    name = "null"

    def choose(self, state, budget, graph):
        return []


def _burning_neighbor_count(v: VertexId, state: FireState, graph: GraphProvider) -> int:
    return sum(1 for w in graph.neighbors(v) if w in state.burning)


_SCORERS = {"burning-neighbors": _burning_neighbor_count}


class GreedyFrontierStrategy(Strategy):
    """Protects the frontier vertices with the most burning neighbors.

    Ties break toward smaller ids; returns nothing once the frontier is
    empty.  A baseline and the source of interactive hints, with no
    containment guarantee of its own.
    """

    name = "greedy-frontier"

    def __init__(self, weight: str = "burning-neighbors"):
        super().__init__()
        if weight not in _SCORERS:
            raise ValueError(
                f"unknown weight {weight!r}; available: {sorted(_SCORERS)}"
            )
        self.weight = weight
        self.parameters = {"weight": weight}

    def choose(self, state, budget, graph):
        if budget <= 0:
            return []
        scorer = _SCORERS[self.weight]
        scored = sorted(
            state.frontier,
            key=lambda v: (-scorer(v, state, graph), v),
        )
        return scored[:budget]


class SphereBarricadeStrategy(Strategy):
    """Protects a whole sphere around the initial fire, then stops.

    The radius is the smallest R (up to `r_max`) whose sphere the
    cumulative budget through turn R can cover: sum of f(1..R) >= |S_R|.
    Every vertex of S_R is at distance R from the initial fire, so the
    fire cannot reach the sphere before turn R, by which time it is
    fully protected; the sphere then separates the fire from the rest
    of the graph.  Vertices are protected in id order, a full budget's
    worth per turn.
    """

    name = "sphere-barricade"

    def __init__(
        self,
        graph: GraphProvider,
        fire: Sequence[VertexId],
        schedule: BudgetSchedule,
        r_max: int = 20,
        max_vertices: Optional[int] = None,
    ):
        super().__init__()
        if r_max < 1:
            raise ValueError(f"r_max must be >= 1, got {r_max}")
        cap = DEFAULT_VERTEX_CAP if max_vertices is None else max_vertices
        # Layered BFS, stopping at the first feasible radius; the full
        # r_max ball is only materialized when no radius is feasible.
        centers = sorted(set(fire))
        for v in centers:
            graph.validate(v)
        seen = set(centers)
        sphere = list(centers)
        radius = None
        for r in range(1, r_max + 1):
            nxt = []
            for v in sphere:
                for u in graph.neighbors(v):
                    if u not in seen:
                        seen.add(u)
                        if len(seen) > cap:
                            raise CapExceededError(
                                f"barricade scan at radius {r} exceeded "
                                f"vertex cap {cap}",
                                cap=cap,
                            )
                        nxt.append(u)
            sphere = nxt
            if schedule.cumulative(r) >= len(sphere):
                radius = r
                break
        if radius is None:
            raise NoFeasibleRadiusError(r_max)
        self.radius = radius
        self.sphere = tuple(sorted(sphere))
        self.parameters = {"r_max": r_max, "radius": radius, "sphere_size": len(self.sphere)}

    def choose(self, state, budget, graph):
        if budget <= 0:
            return []
        remaining = [
            v
            for v in self.sphere
            if v not in state.protected_all and v not in state.burning
        ]
        return remaining[:budget]


class CutVertexStrategy(Strategy):
    """Seals a chain of beads at its outermost cut vertex.

    On a bead chain, every path from bead k to bead k+1 passes through
    bead k's single cut vertex, so protecting the first unburnt cut
    vertex past the fire separates it from the infinite end.  One
    protected vertex suffices for any finite fire, hence containment
    under the constant schedule C=1, d=0.
    """

    name = "cut-vertex"

    def __init__(self, graph: GraphProvider):
        super().__init__()
        if not isinstance(graph, BeadChainProvider):
            raise InapplicableProviderError(
                f"cut-vertex strategy requires a bead chain, got {graph.name}"
            )
        self.chain = graph

    def choose(self, state, budget, graph):
        if budget <= 0 or not state.burning:
            return []
        k_max = max(self.chain.bead_index(v) for v in state.burning)
        # Already sealed: some protected cut vertex lies at or past the
        # outermost burning bead.
        k = k_max
        while True:
            cut = self.chain.cut_vertex(k)
            if cut in state.protected_all:
                return []
            if cut not in state.burning:
                return [cut]
            k += 1


class ReplayStrategy(Strategy):
    """Replays a fixed per-turn protection sequence, then protects nothing.

    Turn n plays the (n-1)-th entry; used to re-run recorded games and
    to replay solver counterexamples through the engine.
    """

    name = "replay"

    def __init__(self, per_turn: Sequence[Sequence[VertexId]]):
        super().__init__()
        self.per_turn = tuple(tuple(w) for w in per_turn)
        self.parameters = {"turns": len(self.per_turn)}

    def choose(self, state, budget, graph):
        n = state.time + 1
        if n <= len(self.per_turn):
            return list(self.per_turn[n - 1])
        return []


def make_strategy(
    name: str,
    params: dict,
    graph: GraphProvider,
    fire: Sequence[VertexId],
    schedule: BudgetSchedule,
) -> Strategy:
    """Build a strategy by name; construction-time parameters come from
    `params`, instance context from the remaining arguments."""
    params = dict(params or {})
    if name == "null":
        return NullStrategy()
    if name == "greedy-frontier":
        return GreedyFrontierStrategy(weight=params.get("weight", "burning-neighbors"))
    if name == "sphere-barricade":
        kwargs = {}
        if "r_max" in params:
            kwargs["r_max"] = params["r_max"]
        if "max_vertices" in params:
            kwargs["max_vertices"] = params["max_vertices"]
        return SphereBarricadeStrategy(graph, fire, schedule, **kwargs)
    if name == "cut-vertex":
        return CutVertexStrategy(graph)
    if name == "replay":
        return ReplayStrategy(params.get("turns", []))
    raise ValueError(f"unknown strategy {name!r}")


STRATEGY_NAMES = ("null", "greedy-frontier", "sphere-barricade", "cut-vertex", "replay")
