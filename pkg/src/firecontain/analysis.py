"""Growth, isoperimetry, and amenability diagnostics.

Everything here is exact integer or rational arithmetic except the one
log-log regression that fits a growth degree.  Ratios use the edge
boundary throughout: an edge counts when one endpoint is inside the
subset and the other is not, including edges that leave a finite view
into the ambient graph when the view carries ambient degrees.
"""

from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import DEFAULT_VERTEX_CAP, FiniteBall, GraphProvider, VertexId, ball
from .engine import BudgetSchedule, play
from .errors import CapExceededError
from .groups.base import CayleyGraphProvider, Group
from .strategies import make_strategy

# Fitted-slope increase across window halves beyond which growth is
# flagged as not polynomial (a diagnostic, not a proof).
DRIFT_THRESHOLD = 0.5


def _fit_loglog(radii: Sequence[int], sizes: Sequence[int]) -> tuple[float, float]:
    """Least-squares slope of log(size) vs log(radius), with its
    standard error (0.0 when the window has under 3 points)."""
    xs = [math.log(n) for n in radii]
    ys = [math.log(s) for s in sizes]
    if len(xs) < 2:
        return float("nan"), 0.0
    slope, intercept = statistics.linear_regression(xs, ys)
    m = len(xs)
    if m < 3:
        return slope, 0.0
    mean_x = sum(xs) / m
    ss_x = sum((x - mean_x) ** 2 for x in xs)
    ss_res = sum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys))
    if ss_x == 0:
        return slope, 0.0
    stderr = math.sqrt(ss_res / (m - 2) / ss_x)
    return slope, stderr


@dataclass(frozen=True)
class GrowthProfile:
    """Ball and sphere sizes around a basepoint, with a fitted degree.

    The fit uses the upper half of the radii by default since small
    balls are polluted by additive constants.  `not_polynomial` flags a
    slope still climbing between the lower and upper half windows, a
    heuristic sign of super-polynomial growth.
    """

    radii: tuple[int, ...]
    ball_sizes: tuple[int, ...]
    sphere_sizes: tuple[int, ...]
    fitted_degree: float
    fit_stderr: float
    fit_window: tuple[int, int]
    lower_degree: float
    not_polynomial: bool

    @property
    def drift(self) -> float:
        return self.fitted_degree - self.lower_degree

    def to_record(self) -> dict:
        return {
            "type": "growth-profile",
            "radii": list(self.radii),
            "ball_sizes": list(self.ball_sizes),
            "sphere_sizes": list(self.sphere_sizes),
            "fitted_degree": round(self.fitted_degree, 6),
            "fit_stderr": round(self.fit_stderr, 6),
            "fit_window": list(self.fit_window),
            "lower_degree": round(self.lower_degree, 6),
            "drift": round(self.drift, 6),
            "not_polynomial": self.not_polynomial,
        }


def growth_profile(
    g: GraphProvider,
    basepoint: Optional[VertexId] = None,
    max_radius: int = 10,
    *,
    fit_window: Optional[tuple[int, int]] = None,
    max_vertices: int = DEFAULT_VERTEX_CAP,
) -> GrowthProfile:
    """Exact ball sizes by BFS plus a fitted growth degree."""
    if max_radius < 2:
        raise ValueError(f"max_radius must be >= 2, got {max_radius}")
    center = basepoint if basepoint is not None else g.basepoint
    b = ball(g, center, max_radius, max_vertices=max_vertices)
    spheres = b.sphere_sizes()
    balls = []
    total = 0
    for s in spheres:
        total += s
        balls.append(total)
    radii = tuple(range(max_radius + 1))
    if fit_window is None:
        fit_window = (max(1, max_radius // 2), max_radius)
    lo, hi = fit_window
    if not (1 <= lo < hi <= max_radius):
        raise ValueError(f"fit window {fit_window} out of range 1..{max_radius}")
    window_r = [n for n in range(lo, hi + 1)]
    slope, stderr = _fit_loglog(window_r, [balls[n] for n in window_r])
    lower_r = [n for n in range(1, max(2, max_radius // 2) + 1)]
    lower_slope, _ = _fit_loglog(lower_r, [balls[n] for n in lower_r])
    return GrowthProfile(
        radii=radii,
        ball_sizes=tuple(balls),
        sphere_sizes=tuple(spheres),
        fitted_degree=slope,
        fit_stderr=stderr,
        fit_window=(lo, hi),
        lower_degree=lower_slope,
        not_polynomial=(slope - lower_slope) > DRIFT_THRESHOLD,
    )


def folner_profile(
    g: GraphProvider,
    basepoint: Optional[VertexId] = None,
    max_radius: int = 10,
    *,
    max_vertices: int = DEFAULT_VERTEX_CAP,
) -> list[Fraction]:
    """Exact |edge boundary of B(n)| / |B(n)| for n = 0..max_radius.

    Boundary edges are counted in the ambient graph, so the ball is
    computed one layer deeper than asked.
    """
    if max_radius < 0:
        raise ValueError(f"max_radius must be >= 0, got {max_radius}")
    center = basepoint if basepoint is not None else g.basepoint
    b = ball(g, center, max_radius + 1, max_vertices=max_vertices)
    dist = {vid: d for vid, d in b.vertices}
    sizes = b.sphere_sizes()
    ratios = []
    ball_size = 0
    for n in range(max_radius + 1):
        ball_size += sizes[n]
        out_edges = 0
        for vid, d in b.vertices:
            if d != n:
                continue
            for u in g.neighbors(vid):
                if dist.get(u, n + 1) > n:
                    out_edges += 1
        ratios.append(Fraction(out_edges, ball_size))
    return ratios


@dataclass(frozen=True)
class FiniteView:
    """A finite vertex set with induced adjacency as bitmasks.

    `ambient_out[i]` counts edges from vertex i to the ambient graph
    outside the view; all zeros for a standalone finite graph.
    """

    ids: tuple[VertexId, ...]
    adj: tuple[int, ...]
    ambient_out: tuple[int, ...]

    @property
    def has_ambient(self) -> bool:
        return any(self.ambient_out)

    def __len__(self) -> int:
        return len(self.ids)

    def boundary_edges(self, mask: int) -> int:
        full = (1 << len(self.ids)) - 1
        out = 0
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            m ^= low
            out += bin(self.adj[i] & full & ~mask).count("1")
            out += self.ambient_out[i]
        return out

    def ratio(self, mask: int) -> Fraction:
        size = bin(mask).count("1")
        return Fraction(self.boundary_edges(mask), size)

    @staticmethod
    def from_provider(g: GraphProvider, vertices: Sequence[VertexId]) -> "FiniteView":
        """View of the given vertices; edges to other vertices of `g`
        count as ambient."""
        ids = tuple(sorted(set(vertices)))
        index = {vid: i for i, vid in enumerate(ids)}
        adj = [0] * len(ids)
        ambient = [0] * len(ids)
        for vid, i in index.items():
            for u in g.neighbors(vid):
                j = index.get(u)
                if j is None:
                    ambient[i] += 1
                else:
                    adj[i] |= 1 << j
        return FiniteView(ids=ids, adj=tuple(adj), ambient_out=tuple(ambient))

    @staticmethod
    def from_ball(g: GraphProvider, b: FiniteBall) -> "FiniteView":
        return FiniteView.from_provider(g, b.ids())


@dataclass(frozen=True)
class CheegerEstimate:
    subsets_considered: str
    best_ratio: Fraction
    witness: tuple[VertexId, ...]
    mode: str

    def to_record(self) -> dict:
        return {
            "subsets": self.subsets_considered,
            "best_ratio": str(self.best_ratio),
            "witness": list(self.witness),
            "mode": self.mode,
        }


@dataclass(frozen=True)
class CheegerExactPair:
    """Exact minima under both subset conventions."""

    proper: CheegerEstimate
    half: CheegerEstimate

    def to_record(self) -> dict:
        return {
            "type": "cheeger-exact",
            "proper": self.proper.to_record(),
            "half": self.half.to_record(),
        }


def cheeger_exact_small(view: FiniteView, cap: int = 20) -> CheegerExactPair:
    """Exact minimum of |boundary K| / |K| by full subset enumeration.

    Reports both conventions: K ranging over all proper non-empty
    subsets, and K restricted to at most half the vertices.
    """
    n = len(view)
    if n < 2:
        raise ValueError("need at least 2 vertices")
    if n > cap:
        raise CapExceededError(
            f"exact enumeration over {n} vertices exceeds cap {cap}", cap=cap
        )
    half_size = n // 2
    best_proper: Optional[tuple[Fraction, int]] = None
    best_half: Optional[tuple[Fraction, int]] = None
    for mask in range(1, (1 << n) - 1):
        r = view.ratio(mask)
        if best_proper is None or r < best_proper[0]:
            best_proper = (r, mask)
        if bin(mask).count("1") <= half_size and (best_half is None or r < best_half[0]):
            best_half = (r, mask)

    def witness(mask: int) -> tuple[VertexId, ...]:
        return tuple(view.ids[i] for i in range(n) if mask >> i & 1)

    proper = CheegerEstimate(
        subsets_considered="all proper non-empty subsets",
        best_ratio=best_proper[0],
        witness=witness(best_proper[1]),
        mode="exact-small",
    )
    half = CheegerEstimate(
        subsets_considered=f"non-empty subsets of size <= {half_size}",
        best_ratio=best_half[0],
        witness=witness(best_half[1]),
        mode="exact-small",
    )
    return CheegerExactPair(proper=proper, half=half)


def cheeger_local_search(
    view: FiniteView,
    iterations: int = 200,
    seed: int = 0,
    starts: int = 4,
) -> CheegerEstimate:
    """Steepest-descent upper bound on the minimal boundary ratio.

    Starts from the full view (the ball itself, when the view has
    ambient edges) plus seeded random subsets; each start repeatedly
    applies the single add/remove move that lowers the ratio most.
    Only an upper bound: reported as such via mode "local-search".
    """
    n = len(view)
    if n < 1:
        raise ValueError("empty view")
    full = (1 << n) - 1
    rng = random.Random(seed)
    start_masks = [full if view.has_ambient else (1 << (n - n // 2)) - 1]
    while len(start_masks) < max(1, starts):
        m = rng.getrandbits(n)
        if m == 0:
            m = 1
        if not view.has_ambient and m == full:
            m ^= 1 << (n - 1)
        start_masks.append(m)

    def legal(mask: int) -> bool:
        if mask == 0:
            return False
        return view.has_ambient or mask != full

    best: Optional[tuple[Fraction, int]] = None
    for mask in start_masks:
        current = mask
        ratio = view.ratio(current)
        for _ in range(max(0, iterations)):
            move_best: Optional[tuple[Fraction, int]] = None
            for i in range(n):
                cand = current ^ (1 << i)
                if not legal(cand):
                    continue
                r = view.ratio(cand)
                if r < ratio and (move_best is None or r < move_best[0]):
                    move_best = (r, cand)
            if move_best is None:
                break
            ratio, current = move_best
        if best is None or ratio < best[0]:
            best = (ratio, current)
    witness = tuple(view.ids[i] for i in range(n) if best[1] >> i & 1)
    return CheegerEstimate(
        subsets_considered=f"local search, {len(start_masks)} starts, seed {seed}",
        best_ratio=best[0],
        witness=witness,
        mode="local-search",
    )


def generating_set_robustness(
    group: Group,
    gens_a: list,
    gens_b: list,
    schedule: BudgetSchedule,
    horizon: int,
    fire_radius: int = 0,
    strategy: str = "sphere-barricade",
    strategy_params: Optional[dict] = None,
) -> dict:
    """Run one containment experiment on two Cayley graphs of the same
    group and compare outcomes.

    The containment outcome is a quasi-isometry-invariant kind of fact,
    so disagreement between generating sets points at a bug or at
    undersized constants, not at the mathematics; the record flags it.
    """
    results = []
    for gens in (gens_a, gens_b):
        g = CayleyGraphProvider(group, gens)
        fire = ball(g, g.basepoint, fire_radius).ids()
        strat = make_strategy(strategy, strategy_params or {}, g, fire, schedule)
        report = play(g, fire, schedule, strat, horizon)
        results.append(
            {
                "generators": [group.encode(s) for s in gens],
                "outcome": report.outcome,
                "contained_at": report.contained_at,
                "final_fire_size": report.final_fire_size,
                "total_protected": report.total_protected,
                "turns": [t.to_record() for t in report.per_turn],
            }
        )
    return {
        "type": "generating-set-robustness",
        "group": group.describe(),
        "strategy": strategy,
        "schedule": schedule.to_record(),
        "horizon": horizon,
        "fire_radius": fire_radius,
        "runs": results,
        "agree": results[0]["outcome"] == results[1]["outcome"],
    }
