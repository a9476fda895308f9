"""Shared fixtures and independent oracles.

The oracles here recompute facts from scratch (plain dict BFS, subset
enumeration, explicit matrix arithmetic) so the tests never trust the
code paths they are checking.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from firecontain.core import ExplicitGraphProvider


def bfs_distances(neighbors, sources, radius=None):
    """Plain dict BFS, independent of firecontain.core.ball."""
    if isinstance(sources, str):
        sources = [sources]
    dist = {v: 0 for v in sources}
    frontier = list(sources)
    d = 0
    while frontier and (radius is None or d < radius):
        d += 1
        nxt = []
        for v in frontier:
            for u in neighbors(v):
                if u not in dist:
                    dist[u] = d
                    nxt.append(u)
        frontier = nxt
    return dist


def bfs_ball_sizes(neighbors, source, radius):
    """Cumulative |B(0)|..|B(radius)| by the independent BFS."""
    dist = bfs_distances(neighbors, source, radius)
    sizes = [0] * (radius + 1)
    for d in dist.values():
        sizes[d] += 1
    out = []
    total = 0
    for s in sizes:
        total += s
        out.append(total)
    return out


def random_adjacency(rng: random.Random, max_n: int = 30) -> dict[str, set[str]]:
    """Random simple graph as id -> neighbor set; ids are decimal strings."""
    n = rng.randint(2, max_n)
    ids = [str(i) for i in range(n)]
    adj: dict[str, set[str]] = {v: set() for v in ids}
    p = rng.uniform(0.05, 0.4)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                adj[ids[i]].add(ids[j])
                adj[ids[j]].add(ids[i])
    # A couple of guaranteed edges so the fire has somewhere to go.
    for i in range(1, n):
        if rng.random() < 0.3 or not adj[ids[i]]:
            j = rng.randrange(i)
            adj[ids[i]].add(ids[j])
            adj[ids[j]].add(ids[i])
    return adj


def random_graph(rng: random.Random, max_n: int = 30) -> ExplicitGraphProvider:
    return ExplicitGraphProvider(random_adjacency(rng, max_n))


def cheeger_oracle(adj_sets: dict[str, set[str]], ambient_out=None):
    """Minimal boundary-edge ratio by direct subset enumeration.

    Returns (best over proper non-empty subsets, best over subsets of
    size <= n//2) as exact Fractions.  `ambient_out` maps ids to edge
    counts leaving the view (0 when absent).
    """
    ids = sorted(adj_sets)
    n = len(ids)
    ambient_out = ambient_out or {}
    best_proper = None
    best_half = None
    for mask in range(1, (1 << n) - 1):
        inside = {ids[i] for i in range(n) if mask >> i & 1}
        cut = 0
        for v in inside:
            cut += sum(1 for u in adj_sets[v] if u not in inside)
            cut += ambient_out.get(v, 0)
        ratio = Fraction(cut, len(inside))
        if best_proper is None or ratio < best_proper:
            best_proper = ratio
        if len(inside) <= n // 2 and (best_half is None or ratio < best_half):
            best_half = ratio
    return best_proper, best_half


class RandomLegalStrategy:
    """Protects a random legal subset each turn; used to fuzz the rules."""

    name = "random-legal"

    def __init__(self, rng: random.Random, universe: list[str]):
        self.rng = rng
        self.universe = universe
        self.parameters = {}

    def choose(self, state, budget, graph):
        legal = [
            v
            for v in self.universe
            if v not in state.burning and v not in state.protected_all
        ]
        if not legal or budget <= 0:
            return []
        k = self.rng.randint(0, min(budget, len(legal)))
        return sorted(self.rng.sample(legal, k))

    def describe(self):
        return {"name": self.name, "parameters": {}}


@pytest.fixture
def rng():
    return random.Random(0xF12E)
