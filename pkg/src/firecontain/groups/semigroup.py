"""Free semigroup certification inside a group.

A pair (u, v) spans a rooted binary tree in the Cayley graph: the root
is the identity, and every node w has children wu and wv.  The pair is
free up to a depth when all words of that length or less land on
pairwise distinct elements; the tree then has 2^(depth+1) - 1 nodes,
the root with degree 2 and every other internal node with degree 3.
Freeness is only ever certified up to the checked depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

from .base import Group


@dataclass(frozen=True)
class SemigroupTree:
    """Result of growing the positive-word tree for a pair (u, v)."""

    u: str
    v: str
    depth: int
    free_up_to_depth: bool
    element_count: int
    # (id, positive word over "u"/"v", word length), sorted by discovery.
    vertices: tuple[tuple[str, str, int], ...]
    # Parent -> child index pairs into `vertices`.
    edges: tuple[tuple[int, int], ...]
    collision: Optional[tuple[str, str, str]] = None  # word, earlier word, id

    def to_record(self) -> dict:
        rec = {
            "u": self.u,
            "v": self.v,
            "depth": self.depth,
            "free_up_to_depth": self.free_up_to_depth,
            "element_count": self.element_count,
        }
        if self.collision is not None:
            rec["collision"] = {
                "word": self.collision[0],
                "equals_word": self.collision[1],
                "element": self.collision[2],
            }
        return rec


def semigroup_tree(group: Group, u: Any, v: Any, depth: int) -> SemigroupTree:
    """Grow the positive-word tree for (u, v) and test freeness up to depth."""
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    ident = group.identity()
    vertices: list[tuple[str, str, int]] = [(group.encode(ident), "", 0)]
    edges: list[tuple[int, int]] = []
    seen: dict[Any, int] = {group.key(ident): 0}
    frontier: list[tuple[int, Any]] = [(0, ident)]
    for level in range(1, depth + 1):
        next_frontier: list[tuple[int, Any]] = []
        for parent_idx, elem in frontier:
            parent_word = vertices[parent_idx][1]
            for label, step in (("u", u), ("v", v)):
                child = group.multiply(elem, step)
                key = group.key(child)
                word = parent_word + label
                if key in seen:
                    earlier = vertices[seen[key]][1]
                    return SemigroupTree(
                        u=group.encode(u),
                        v=group.encode(v),
                        depth=depth,
                        free_up_to_depth=False,
                        element_count=len(vertices),
                        vertices=tuple(vertices),
                        edges=tuple(edges),
                        collision=(word, earlier, group.encode(child)),
                    )
                idx = len(vertices)
                seen[key] = idx
                vertices.append((group.encode(child), word, level))
                edges.append((parent_idx, idx))
                next_frontier.append((idx, child))
        frontier = next_frontier
    return SemigroupTree(
        u=group.encode(u),
        v=group.encode(v),
        depth=depth,
        free_up_to_depth=True,
        element_count=len(vertices),
        vertices=tuple(vertices),
        edges=tuple(edges),
    )


def _elements_up_to_length(group: Group, max_len: int, generators=None):
    """Non-identity elements of word length <= max_len over the generators,
    sorted by (word length, id)."""
    gens = generators if generators is not None else group.default_generators()
    ident = group.identity()
    seen = {group.key(ident): (0, group.encode(ident))}
    order: list[tuple[int, str, Any]] = []
    frontier = [ident]
    for wlen in range(1, max_len + 1):
        layer: dict[Any, tuple[str, Any]] = {}
        for elem in frontier:
            for s in gens:
                child = group.multiply(elem, s)
                key = group.key(child)
                if key in seen or key in layer:
                    continue
                layer[key] = (group.encode(child), child)
        items = sorted(layer.items(), key=lambda kv: kv[1][0])
        frontier = []
        for key, (enc, child) in items:
            seen[key] = (wlen, enc)
            order.append((wlen, enc, child))
            frontier.append(child)
    return order


def free_pair_search(
    group: Group,
    max_word_length: int = 3,
    depth: int = 8,
    generators=None,
) -> Optional[SemigroupTree]:
    """Scan short element pairs for one that is free up to the given depth.

    Exhaustive over unordered pairs of distinct non-identity elements of
    word length <= max_word_length, in (word length, id) order; returns
    the first certified tree, or None when every pair collides.
    """
    elements = _elements_up_to_length(group, max_word_length, generators)
    for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
            tree = semigroup_tree(group, elements[i][2], elements[j][2], depth)
            if tree.free_up_to_depth:
                return tree
    return None
