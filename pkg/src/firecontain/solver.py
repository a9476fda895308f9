"""Exhaustive adversarial search on a truncated ball.

Answers, by complete minimax over every legal protection choice,
whether any strategy can keep the fire from reaching distance R of the
initial fire for `horizon` turns.  "No" comes back as an
EscapeCertificate (a finite, checkable non-containment statement at
truncation scale); "yes" comes back as an explicit per-turn protection
sequence that replays through the game engine.

Vertices of the ball are bit positions, so states are integers and the
transposition table is a plain dict.  Three reductions keep the search
exact while pruning hard:

- Success leaf: if the fire, spreading with no further protection at
  all, cannot reach the boundary within the remaining turns, no
  strategy is needed (protection only slows the fire).
- Candidate restriction: a vertex is worth protecting only if
  dist(fire, v) + dist(v, boundary) <= remaining turns, both distances
  through currently unprotected vertices.  Any confining line that
  protects other vertices still confines with them dropped, since
  every escape path those protections could block is too long anyway.
- Maximal sets: protecting more never hurts, so only protection sets
  of maximal legal size among the candidates are tried.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .core import GraphProvider, VertexId, ball
from .engine import BudgetSchedule
from .errors import SearchBudgetExceededError
from .strategies import ReplayStrategy

DEFAULT_VERTEX_CAP = 40
DEFAULT_NODE_CAP = 2_000_000


@dataclass(frozen=True)
class EscapeCertificate:
    """Exhaustive-search proof that the fire cannot be confined.

    Statement: no strategy obeying the schedule keeps the fire within
    distance `truncation_depth` of the initial fire for every turn up
    to `horizon`.  The record carries everything needed to re-run the
    search and reproduce the identical statistics.
    """

    graph: dict
    fire: tuple[VertexId, ...]
    schedule: dict
    truncation_depth: int
    horizon: int
    ball_size: int
    nodes: int
    memo_hits: int

    @property
    def statement(self) -> str:
        return (
            f"no strategy protecting at most floor({self.schedule['C']} * n^"
            f"{self.schedule['d']}) vertices per turn confines the fire within "
            f"distance {self.truncation_depth} of the initial fire for all "
            f"n <= {self.horizon}"
        )

    def to_record(self) -> dict:
        return {
            "type": "escape-certificate",
            "graph": self.graph,
            "fire": list(self.fire),
            "schedule": dict(self.schedule),
            "truncation_depth": self.truncation_depth,
            "horizon": self.horizon,
            "ball_size": self.ball_size,
            "statement": self.statement,
            "search": {"nodes": self.nodes, "memo_hits": self.memo_hits},
        }


@dataclass(frozen=True)
class SolverResult:
    """Outcome of the exhaustive search: certificate or witness strategy."""

    kind: str  # "escape-certificate" | "confining-strategy"
    certificate: Optional[EscapeCertificate]
    witness: Optional[tuple[tuple[VertexId, ...], ...]]
    witness_contains: bool
    ball_size: int
    nodes: int
    memo_hits: int

    @property
    def escaped(self) -> bool:
        return self.kind == "escape-certificate"

    def strategy(self) -> Optional[ReplayStrategy]:
        if self.witness is None:
            return None
        return ReplayStrategy(self.witness)

    def to_record(self) -> dict:
        if self.certificate is not None:
            return self.certificate.to_record()
        return {
            "type": "confining-strategy",
            "witness": [list(w) for w in self.witness],
            "contains": self.witness_contains,
            "ball_size": self.ball_size,
            "search": {"nodes": self.nodes, "memo_hits": self.memo_hits},
        }


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def exhaustive_no_containment(
    graph: GraphProvider,
    fire,
    schedule: BudgetSchedule,
    truncation_depth: int,
    horizon: int,
    *,
    max_vertices: int = DEFAULT_VERTEX_CAP,
    max_nodes: int = DEFAULT_NODE_CAP,
) -> SolverResult:
    """Search every legal strategy on the ball of radius `truncation_depth`.

    Reaching the boundary sphere counts as escape.  Returns an
    EscapeCertificate when every strategy lets the fire escape by the
    horizon, or the confining protection sequence otherwise.  A search
    exceeding `max_nodes` raises SearchBudgetExceededError: that is an
    inconclusive outcome, never a certificate.
    """
    if truncation_depth < 1:
        raise ValueError(f"truncation depth must be >= 1, got {truncation_depth}")
    if not 1 <= horizon <= truncation_depth:
        raise ValueError(
            f"horizon must be between 1 and the truncation depth "
            f"{truncation_depth}, got {horizon}"
        )
    b = ball(graph, fire, truncation_depth, max_vertices=max_vertices)
    size = len(b)
    adj = [0] * size
    for i, j in b.edges:
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    boundary = 0
    for vid in b.sphere(truncation_depth):
        boundary |= 1 << b.index_of(vid)
    start = 0
    for vid in b.center:
        start |= 1 << b.index_of(vid)

    neighborhood_cache: dict[int, int] = {}

    def neighborhood(mask: int) -> int:
        got = neighborhood_cache.get(mask)
        if got is None:
            got = 0
            for i in _bits(mask):
                got |= adj[i]
            neighborhood_cache[mask] = got
        return got

    def free_spread_hits_boundary(burning: int, protected: int, turns: int) -> bool:
        cur = burning
        for _ in range(turns):
            cur |= neighborhood(cur) & ~protected
            if cur & boundary:
                return True
        return False

    def fire_layers(burning: int, protected: int, turns: int) -> list[int]:
        """layers[t] = vertices first burnable at step t under no protection."""
        layers = [burning]
        cur = burning
        for _ in range(turns):
            new = neighborhood(cur) & ~protected & ~cur
            layers.append(new)
            cur |= new
        return layers

    def boundary_distances(protected: int) -> list[int]:
        """layers[s] = free vertices at free-distance s from the boundary."""
        layers = [boundary & ~protected]
        cur = layers[0]
        while True:
            new = neighborhood(cur) & ~protected & ~cur
            if not new:
                return layers
            layers.append(new)
            cur |= new

    nodes = 0
    memo_hits = 0
    memo: dict[tuple[int, int, int], object] = {}

    def search(burning: int, protected: int, n: int) -> Optional[list[int]]:
        """Winning protection masks for turns n.., or None if escape is forced."""
        nonlocal nodes, memo_hits
        if n > horizon:
            return []
        key = (burning, protected, n)
        got = memo.get(key)
        if got is not None:
            memo_hits += 1
            return got if got != "fail" else None
        nodes += 1
        if nodes > max_nodes:
            raise SearchBudgetExceededError(max_nodes)
        remaining = horizon - n + 1
        if not free_spread_hits_boundary(burning, protected, remaining):
            memo[key] = []
            return []
        reach = fire_layers(burning, protected, remaining)
        to_boundary = boundary_distances(protected)
        candidates = 0
        for t in range(1, len(reach)):
            layer = reach[t]
            if not layer:
                continue
            budget_left = remaining - t
            for s in range(0, min(budget_left, len(to_boundary) - 1) + 1):
                candidates |= layer & to_boundary[s]
        cand_list = sorted(_bits(candidates))
        if not cand_list:
            # Nothing the defender can ever block is on a timely escape
            # path, so the fire runs free and free spread escapes.
            memo[key] = "fail"
            return None
        budget = schedule(n)
        k = min(budget, len(cand_list))
        for combo in combinations(cand_list, k):
            w_mask = 0
            for i in combo:
                w_mask |= 1 << i
            protected2 = protected | w_mask
            burning2 = burning | (neighborhood(burning) & ~protected2)
            if burning2 & boundary:
                continue
            if burning2 == burning:
                result = [w_mask]
            else:
                rest = search(burning2, protected2, n + 1)
                if rest is None:
                    continue
                result = [w_mask] + rest
            memo[key] = result
            return result
        memo[key] = "fail"
        return None

    if start & boundary:
        raise ValueError("initial fire touches the truncation boundary")
    line = search(start, 0, 1)

    graph_desc = graph.describe()
    schedule_rec = schedule.to_record()
    if line is None:
        cert = EscapeCertificate(
            graph=graph_desc,
            fire=tuple(b.center),
            schedule=schedule_rec,
            truncation_depth=truncation_depth,
            horizon=horizon,
            ball_size=size,
            nodes=nodes,
            memo_hits=memo_hits,
        )
        return SolverResult(
            kind="escape-certificate",
            certificate=cert,
            witness=None,
            witness_contains=False,
            ball_size=size,
            nodes=nodes,
            memo_hits=memo_hits,
        )

    ids = b.ids()
    witness = tuple(
        tuple(sorted(ids[i] for i in _bits(w_mask))) for w_mask in line
    )
    # The line may end early because the fire stopped growing outright;
    # replay the masks to see which.
    burning = start
    protected = 0
    contains = False
    for w_mask in line:
        protected |= w_mask
        burning |= neighborhood(burning) & ~protected
    if not (neighborhood(burning) & ~protected & ~burning):
        contains = True
    return SolverResult(
        kind="confining-strategy",
        certificate=None,
        witness=witness,
        witness_contains=contains,
        ball_size=size,
        nodes=nodes,
        memo_hits=memo_hits,
    )


def replay_certificate(
    record: dict,
    graph: GraphProvider,
    *,
    max_vertices: int = DEFAULT_VERTEX_CAP,
    max_nodes: int = DEFAULT_NODE_CAP,
) -> bool:
    """Re-run the search described by a certificate record on `graph`.

    Returns True when the re-run reproduces the certificate: same
    verdict, same ball size, same node and memo counts.
    """
    from fractions import Fraction

    schedule = BudgetSchedule(
        Fraction(str(record["schedule"]["C"])), record["schedule"]["d"]
    )
    result = exhaustive_no_containment(
        graph,
        record["fire"],
        schedule,
        record["truncation_depth"],
        record["horizon"],
        max_vertices=max_vertices,
        max_nodes=max_nodes,
    )
    if not result.escaped:
        return False
    cert = result.certificate
    return (
        cert.ball_size == record["ball_size"]
        and cert.nodes == record["search"]["nodes"]
        and cert.memo_hits == record["search"]["memo_hits"]
    )
