"""Non-group graph families: regular trees, grids, bead chains, and small
finite shapes used by experiments."""

from __future__ import annotations

import math
from typing import Callable, Iterable, Optional

from ..core import GraphProvider, VertexId
from ..errors import UnknownVertexError
from .base import CayleyGraphProvider
from .kinds import FreeAbelianGroup


class RegularTreeProvider(GraphProvider):
    """Infinite tree in which every vertex has the same degree.

    Ids are root-addressed digit strings: the root is "t"; its children
    append 0..degree-1, every deeper vertex appends 0..degree-2.  Single
    digit labels keep ids compact, which limits degree to 10.
    """

    def __init__(self, degree: int):
        if not 3 <= degree <= 10:
            raise ValueError(f"degree must be in 3..10, got {degree}")
        self.degree = degree
        self.name = f"regular-tree({degree})"
        self.degree_bound = degree

    @property
    def basepoint(self) -> VertexId:
        return "t"

    def neighbors(self, v: VertexId) -> list[VertexId]:
        self.validate(v)
        if v == "t":
            return [f"t{c}" for c in range(self.degree)]
        out = [v[:-1]]
        out.extend(f"{v}{c}" for c in range(self.degree - 1))
        return out

    def validate(self, v: VertexId) -> None:
        if not v or v[0] != "t":
            raise UnknownVertexError(v, "tree ids start with 't'")
        digits = v[1:]
        if not digits:
            return
        if not digits.isdigit():
            raise UnknownVertexError(v, "tree ids are 't' plus digits")
        if int(digits[0]) >= self.degree:
            raise UnknownVertexError(v, f"first branch label must be < {self.degree}")
        for ch in digits[1:]:
            if int(ch) >= self.degree - 1:
                raise UnknownVertexError(
                    v, f"branch labels below the root must be < {self.degree - 1}"
                )

    def describe(self) -> dict:
        return {"name": self.name, "family": "regular-tree", "degree": self.degree}


class GridProvider(CayleyGraphProvider):
    """Z^dim with unit steps; a Cayley graph of the free abelian group."""

    def __init__(self, dim: int):
        super().__init__(FreeAbelianGroup(dim))
        self.dim = dim
        self.name = f"grid({dim})"

    def describe(self) -> dict:
        return {"name": self.name, "family": "grid", "dim": self.dim}


_BEAD_PROFILES: dict[str, Callable[[int], int]] = {
    # Bead k is a balanced binary tree; doubling sizes make the ball growth
    # along the ray behave like exp(sqrt(n)).
    "doubling": lambda k: 2 ** min(k, 40),
    "squares": lambda k: max(2, k * k),
}


class BeadChainProvider(GraphProvider):
    """A one-ended ray of tree-shaped beads joined at degree-2 cut vertices.

    Bead k is a balanced binary tree on heap indices 1..m_k (children of
    i are 2i and 2i+1).  Its last heap vertex is the designated cut
    vertex shared with bead k+1: the single edge onward goes to bead
    k+1's root, so removing that vertex disconnects the finite prefix
    from the infinite tail.  Ids are "k.i".
    """

    def __init__(
        self,
        profile: str | None = None,
        sizes: Optional[Iterable[int]] = None,
    ):
        if sizes is not None:
            explicit = [int(m) for m in sizes]
            if not explicit:
                raise ValueError("explicit bead sizes must be non-empty")
            if any(m < 2 for m in explicit):
                raise ValueError("bead sizes must be >= 2")
            if any(b < a for a, b in zip(explicit, explicit[1:])):
                raise ValueError("bead sizes must be non-decreasing")
            self._size = lambda k: explicit[min(k, len(explicit)) - 1]
            self.profile = "explicit"
        else:
            profile = profile or "doubling"
            if profile not in _BEAD_PROFILES:
                raise ValueError(f"unknown bead profile {profile!r}")
            base = _BEAD_PROFILES[profile]
            self._size = lambda k: max(2, base(k))
            self.profile = profile
        self.name = f"bead-chain({self.profile})"
        self.degree_bound = 3

    def bead_size(self, k: int) -> int:
        return self._size(k)

    @property
    def basepoint(self) -> VertexId:
        return "1.1"

    def _parse(self, v: VertexId) -> tuple[int, int]:
        parts = v.split(".")
        if len(parts) != 2:
            raise UnknownVertexError(v, "expected bead.index")
        try:
            k, i = int(parts[0]), int(parts[1])
        except ValueError:
            raise UnknownVertexError(v, "expected integers bead.index") from None
        if str(k) != parts[0] or str(i) != parts[1]:
            raise UnknownVertexError(v, "non-canonical integer spelling")
        if k < 1 or not 1 <= i <= self._size(k):
            raise UnknownVertexError(v, f"index outside bead {k} of size {self._size(k)}")
        return k, i

    def validate(self, v: VertexId) -> None:
        self._parse(v)

    def neighbors(self, v: VertexId) -> list[VertexId]:
        k, i = self._parse(v)
        m = self._size(k)
        out = []
        if i == 1 and k > 1:
            out.append(f"{k - 1}.{self._size(k - 1)}")
        if i >= 2:
            out.append(f"{k}.{i // 2}")
        for child in (2 * i, 2 * i + 1):
            if child <= m:
                out.append(f"{k}.{child}")
        if i == m:
            out.append(f"{k + 1}.1")
        return out

    def cut_vertex(self, k: int) -> VertexId:
        """The designated cut vertex closing off bead k."""
        if k < 1:
            raise ValueError(f"bead index must be >= 1, got {k}")
        return f"{k}.{self._size(k)}"

    def bead_index(self, v: VertexId) -> int:
        return self._parse(v)[0]

    def layout(self, v: VertexId):
        k, i = self._parse(v)
        offset = sum(int(math.log2(self._size(j))) + 1 for j in range(1, k))
        depth = i.bit_length() - 1
        row = i - (1 << depth)
        width = 1 << depth
        return (float(offset + depth), (row + 0.5) / width * 8.0 - 4.0)

    def describe(self) -> dict:
        d = {"name": self.name, "family": "bead-chain", "profile": self.profile}
        if self.profile == "explicit":
            d["sizes"] = [self._size(k) for k in range(1, 9)]
        return d


class PathProvider(GraphProvider):
    """Finite path on n vertices, ids "0".."n-1", basepoint the middle."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"path needs >= 1 vertices, got {n}")
        self.n = n
        self.name = f"path({n})"
        self.degree_bound = 2

    @property
    def basepoint(self) -> VertexId:
        return str(self.n // 2)

    def _parse(self, v: VertexId) -> int:
        try:
            i = int(v)
        except ValueError:
            raise UnknownVertexError(v, "expected an integer id") from None
        if str(i) != v or not 0 <= i < self.n:
            raise UnknownVertexError(v, f"outside path of {self.n} vertices")
        return i

    def validate(self, v: VertexId) -> None:
        self._parse(v)

    def neighbors(self, v: VertexId) -> list[VertexId]:
        i = self._parse(v)
        return [str(j) for j in (i - 1, i + 1) if 0 <= j < self.n]

    def layout(self, v: VertexId):
        return (float(self._parse(v)), 0.0)

    def describe(self) -> dict:
        return {"name": self.name, "family": "path", "n": self.n}


class StarProvider(GraphProvider):
    """Star with a center ("c") joined to numbered leaves."""

    def __init__(self, leaves: int):
        if leaves < 1:
            raise ValueError(f"star needs >= 1 leaves, got {leaves}")
        self.leaves = leaves
        self.name = f"star({leaves})"
        self.degree_bound = leaves

    @property
    def basepoint(self) -> VertexId:
        return "c"

    def validate(self, v: VertexId) -> None:
        if v == "c":
            return
        try:
            i = int(v)
        except ValueError:
            raise UnknownVertexError(v, "expected 'c' or a leaf number") from None
        if str(i) != v or not 0 <= i < self.leaves:
            raise UnknownVertexError(v, f"outside star with {self.leaves} leaves")

    def neighbors(self, v: VertexId) -> list[VertexId]:
        self.validate(v)
        if v == "c":
            return [str(i) for i in range(self.leaves)]
        return ["c"]

    def describe(self) -> dict:
        return {"name": self.name, "family": "star", "leaves": self.leaves}


def family_provider(family: str, **params) -> GraphProvider:
    """Factory over the family catalog; raises ValueError on unknown kinds."""
    if family == "regular-tree":
        return RegularTreeProvider(int(params.get("degree", 3)))
    if family == "grid":
        return GridProvider(int(params.get("dim", 2)))
    if family == "bead-chain":
        return BeadChainProvider(
            profile=params.get("profile"), sizes=params.get("sizes")
        )
    if family == "path":
        return PathProvider(int(params.get("n", 9)))
    if family == "star":
        return StarProvider(int(params.get("leaves", 5)))
    raise ValueError(f"unknown family {family!r}")
