"""Graph primitives: lazy providers, finite balls, distances.

A graph is presented by a `GraphProvider`: a basepoint plus a neighbor
oracle over canonical string ids.  Everything downstream (the game
engine, strategies, analysis) only ever sees finite balls computed here,
so the global vertex cap in `ball` is the one safety valve against
accidentally materialising an infinite graph.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import CapExceededError, UnknownVertexError

VertexId = str

# Default cap on vertices materialised by a single ball computation.
DEFAULT_VERTEX_CAP = 2_000_000


class GraphProvider(ABC):
    """Lazy, locally finite graph over canonical string vertex ids.

    Two vertices are equal iff their ids are equal, and `neighbors` must
    return a fixed order for the same vertex, so that every traversal in
    the package is deterministic.
    """

    name: str = "graph"
    degree_bound: int = 0

    @property
    @abstractmethod
    def basepoint(self) -> VertexId:
        ...

    @abstractmethod
    def neighbors(self, v: VertexId) -> list[VertexId]:
        """Deterministically ordered neighbor ids (no self, no duplicates)."""

    @abstractmethod
    def validate(self, v: VertexId) -> None:
        """Raise UnknownVertexError if `v` is not a canonical vertex id."""

    def layout(self, v: VertexId) -> Optional[tuple[float, float]]:
        """Optional 2D position for rendering; None when the graph has no
        natural planar layout."""
        return None

    def describe(self) -> dict:
        """Loggable description of the graph (kind and parameters)."""
        return {"name": self.name}


@dataclass(frozen=True)
class FiniteBall:
    """A ball around a center set, with induced edges.

    `vertices` lists (id, distance) pairs sorted by (distance, id);
    `edges` are index pairs (i, j) with i < j into that list.
    """

    center: tuple[VertexId, ...]
    radius: int
    vertices: tuple[tuple[VertexId, int], ...]
    edges: tuple[tuple[int, int], ...]
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._index.update({vid: i for i, (vid, _) in enumerate(self.vertices)})

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, vid: VertexId) -> bool:
        return vid in self._index

    def index_of(self, vid: VertexId) -> int:
        return self._index[vid]

    def distance_of(self, vid: VertexId) -> int:
        return self.vertices[self._index[vid]][1]

    def ids(self) -> list[VertexId]:
        return [vid for vid, _ in self.vertices]

    def sphere(self, r: int) -> list[VertexId]:
        """Ids at distance exactly r from the center set, sorted."""
        return [vid for vid, d in self.vertices if d == r]

    def sphere_sizes(self) -> list[int]:
        sizes = [0] * (self.radius + 1)
        for _, d in self.vertices:
            sizes[d] += 1
        return sizes


def _normalize_center(
    g: GraphProvider, center: VertexId | Iterable[VertexId]
) -> list[VertexId]:
    if isinstance(center, str):
        center = [center]
    ids = list(dict.fromkeys(center))
    if not ids:
        raise UnknownVertexError("", "empty center set")
    for vid in ids:
        g.validate(vid)
    return sorted(ids)


def ball(
    g: GraphProvider,
    center: VertexId | Iterable[VertexId],
    radius: int,
    *,
    max_vertices: int = DEFAULT_VERTEX_CAP,
    check_symmetry: bool = False,
) -> FiniteBall:
    """BFS ball of the given radius around a vertex or set of vertices.

    Raises CapExceededError once more than `max_vertices` vertices have
    been discovered.  With `check_symmetry`, every discovered edge is
    verified to be reported from both endpoints (slow; test use).
    """
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    centers = _normalize_center(g, center)

    dist: dict[VertexId, int] = {vid: 0 for vid in centers}
    queue: deque[VertexId] = deque(centers)
    while queue:
        v = queue.popleft()
        d = dist[v]
        if d == radius:
            continue
        for u in g.neighbors(v):
            if u not in dist:
                dist[u] = d + 1
                if len(dist) > max_vertices:
                    raise CapExceededError(
                        f"ball({radius}) exceeded vertex cap {max_vertices}",
                        cap=max_vertices,
                    )
                queue.append(u)

    ordered = sorted(dist.items(), key=lambda item: (item[1], item[0]))
    index = {vid: i for i, (vid, _) in enumerate(ordered)}
    edges = set()
    for vid, i in index.items():
        for u in g.neighbors(vid):
            j = index.get(u)
            if j is not None and i != j:
                edges.add((i, j) if i < j else (j, i))
            if check_symmetry and j is not None:
                if vid not in g.neighbors(u):
                    raise AssertionError(
                        f"asymmetric adjacency: {vid!r} -> {u!r} but not back"
                    )
    return FiniteBall(
        center=tuple(centers),
        radius=radius,
        vertices=tuple(ordered),
        edges=tuple(sorted(edges)),
    )


def distance(
    g: GraphProvider,
    x: VertexId,
    y: VertexId,
    cutoff: int,
    *,
    max_vertices: int = DEFAULT_VERTEX_CAP,
) -> Optional[int]:
    """Graph distance between x and y, or None when it exceeds `cutoff`."""
    g.validate(x)
    g.validate(y)
    if x == y:
        return 0
    dist = {x: 0}
    queue = deque([x])
    while queue:
        v = queue.popleft()
        d = dist[v]
        if d == cutoff:
            continue
        for u in g.neighbors(v):
            if u == y:
                return d + 1
            if u not in dist:
                dist[u] = d + 1
                if len(dist) > max_vertices:
                    raise CapExceededError(
                        f"distance search exceeded vertex cap {max_vertices}",
                        cap=max_vertices,
                    )
                queue.append(u)
    return None


def sphere_sizes(
    g: GraphProvider,
    center: VertexId | Iterable[VertexId],
    max_radius: int,
    *,
    max_vertices: int = DEFAULT_VERTEX_CAP,
) -> list[int]:
    """Sizes of spheres at distance 0..max_radius around the center set."""
    b = ball(g, center, max_radius, max_vertices=max_vertices)
    return b.sphere_sizes()


class ExplicitGraphProvider(GraphProvider):
    """Finite graph given by an explicit adjacency mapping.

    Used for small test instances and for replaying truncations; the
    adjacency is symmetrised and self-loops are rejected.
    """

    def __init__(self, adjacency: dict[VertexId, Iterable[VertexId]], name: str = "explicit"):
        self.name = name
        adj: dict[VertexId, set[VertexId]] = {v: set() for v in adjacency}
        for v, nbrs in adjacency.items():
            for u in nbrs:
                if u == v:
                    raise ValueError(f"self-loop at {v!r}")
                adj.setdefault(u, set()).add(v)
                adj[v].add(u)
        self._adj = {v: sorted(nbrs) for v, nbrs in sorted(adj.items())}
        self.degree_bound = max((len(n) for n in self._adj.values()), default=0)
        self._basepoint = next(iter(self._adj), "")

    @property
    def basepoint(self) -> VertexId:
        return self._basepoint

    def vertices(self) -> list[VertexId]:
        return list(self._adj)

    def neighbors(self, v: VertexId) -> list[VertexId]:
        self.validate(v)
        return list(self._adj[v])

    def validate(self, v: VertexId) -> None:
        if v not in self._adj:
            raise UnknownVertexError(v, "not a vertex of this finite graph")

    def describe(self) -> dict:
        return {"name": self.name, "vertices": len(self._adj)}
