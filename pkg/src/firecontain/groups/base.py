"""Group interface and the Cayley graph provider built on it.

Elements are exact values (integer tuples, reduced words, rationals);
`encode` fixes the canonical string id used throughout the package and
`key` is a hashable exact identity key (for most groups simply the
encoding; the Grigorchuk group resolves keys through its word-problem
table).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, Hashable, Optional

from ..core import GraphProvider, VertexId
from ..errors import InvalidGeneratorError, UnknownVertexError


class Group(ABC):
    """A finitely generated group with exact element arithmetic."""

    name: str = "group"

    @abstractmethod
    def identity(self) -> Any:
        ...

    @abstractmethod
    def multiply(self, g: Any, h: Any) -> Any:
        ...

    @abstractmethod
    def inverse(self, g: Any) -> Any:
        ...

    @abstractmethod
    def encode(self, g: Any) -> str:
        """Canonical string id of the element."""

    @abstractmethod
    def decode(self, s: str) -> Any:
        """Inverse of encode; raises UnknownVertexError on malformed input."""

    @abstractmethod
    def default_generators(self) -> list[Any]:
        """Standard generating set, closed under inversion."""

    def key(self, g: Any) -> Hashable:
        """Hashable exact identity key; equal elements get equal keys."""
        return self.encode(g)

    def equal(self, g: Any, h: Any) -> bool:
        return self.key(g) == self.key(h)

    def power(self, g: Any, n: int) -> Any:
        if n < 0:
            return self.power(self.inverse(g), -n)
        acc = self.identity()
        for _ in range(n):
            acc = self.multiply(acc, g)
        return acc

    def describe(self) -> dict:
        return {"group": self.name}


class CayleyGraphProvider(GraphProvider):
    """Cayley graph: vertices are group elements, edges right-multiplication
    by generators."""

    def __init__(self, group: Group, generators: Optional[list[Any]] = None):
        self.group = group
        gens = list(generators) if generators is not None else group.default_generators()
        self._check_generating_set(gens)
        self._generators = gens
        self.name = f"cayley:{group.name}"
        self.degree_bound = len(gens)

    def _check_generating_set(self, gens: list[Any]) -> None:
        group = self.group
        if not gens:
            raise InvalidGeneratorError("generating set is empty")
        keys = {group.key(s) for s in gens}
        ident = group.key(group.identity())
        if ident in keys:
            raise InvalidGeneratorError("generating set contains the identity")
        if len(keys) != len(gens):
            raise InvalidGeneratorError("generating set contains duplicates")
        for s in gens:
            if group.key(group.inverse(s)) not in keys:
                raise InvalidGeneratorError(
                    f"generating set not closed under inversion: "
                    f"missing inverse of {group.encode(s)!r}"
                )

    @property
    def generators(self) -> list[Any]:
        return list(self._generators)

    @property
    def basepoint(self) -> VertexId:
        return self.group.encode(self.group.identity())

    def neighbors(self, v: VertexId) -> list[VertexId]:
        g = self.group.decode(v)
        seen: dict[str, None] = {}
        for s in self._generators:
            u = self.group.encode(self.group.multiply(g, s))
            if u != v:
                seen.setdefault(u)
        return list(seen)

    def validate(self, v: VertexId) -> None:
        g = self.group.decode(v)
        # Ids must round-trip: a decodable but non-canonical spelling would
        # silently alias another vertex.
        if self.group.encode(g) != v:
            raise UnknownVertexError(
                v, f"id is not canonical (canonical form is {self.group.encode(g)!r})"
            )

    def layout(self, v: VertexId):
        lay = getattr(self.group, "layout", None)
        if lay is None:
            return None
        return lay(self.group.decode(v))

    def describe(self) -> dict:
        d = {"name": self.name, "generators": [self.group.encode(s) for s in self._generators]}
        d.update(self.group.describe())
        return d
