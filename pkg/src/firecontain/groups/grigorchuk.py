"""The Grigorchuk group acting on the binary rooted tree.

Elements are words over the involutions a, b, c, d, kept weakly reduced
(no repeated letter, adjacent b/c/d letters combined through bc=d,
bd=c, cd=b).  Word equality is decided exactly by the section
recursion: a word with an odd number of a's moves the first tree level;
otherwise it is trivial iff both of its first-level sections are.

Weak reduction does not give unique normal forms (distinct reduced
words can be equal), so canonical ids come from a breadth-first table
grown layer by layer from the identity: each element's id is the
lexicographically least reduced word among those that reach it first.
The table grows in a fixed order, so ids do not depend on the query
pattern, only on how deep the table has been forced.
"""

from __future__ import annotations

import threading
from itertools import product

from ..errors import CapExceededError, UnknownVertexError
from .base import Group

_GENS = ("a", "b", "c", "d")
# Sections of each generator at the two first-level subtrees; None is the
# identity.  a swaps the subtrees and has trivial sections.
_SECTION = {"a": (None, None), "b": ("a", "c"), "c": ("a", "d"), "d": (None, "b")}
_KLEIN = {
    ("b", "c"): "d",
    ("c", "b"): "d",
    ("b", "d"): "c",
    ("d", "b"): "c",
    ("c", "d"): "b",
    ("d", "c"): "b",
}
_SIGNATURE_DEPTH = 6
_LEVEL_BITS = list(product((0, 1), repeat=_SIGNATURE_DEPTH))


def reduce_word(letters) -> tuple[str, ...]:
    """Weakly reduce: cancel squares, combine adjacent b/c/d pairs."""
    stack: list[str] = []
    for ch in letters:
        while True:
            if not stack:
                stack.append(ch)
                break
            top = stack[-1]
            if top == ch:
                stack.pop()
                break
            combined = _KLEIN.get((top, ch))
            if combined is None:
                stack.append(ch)
                break
            stack.pop()
            ch = combined
    return tuple(stack)


def _sections(word: tuple[str, ...]) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """First-level sections of a word (first letter acts first)."""
    left: list[str] = []
    right: list[str] = []
    for side, acc in ((0, left), (1, right)):
        cur = side
        for ch in word:
            if ch == "a":
                cur = 1 - cur
            else:
                s = _SECTION[ch][cur]
                if s is not None:
                    acc.append(s)
    return reduce_word(left), reduce_word(right)


def apply_word(word, bits: tuple[int, ...]) -> tuple[int, ...]:
    """Image of a binary string under the word's tree action (first letter
    acts first)."""
    for ch in word:
        out = []
        cur: str | None = ch
        for bit in bits:
            if cur is None:
                out.append(bit)
            elif cur == "a":
                out.append(1 - bit)
                cur = None
            else:
                out.append(bit)
                cur = _SECTION[cur][bit]
        bits = tuple(out)
    return bits


class GrigorchukGroup(Group):
    """First Grigorchuk group with exact word-problem arithmetic."""

    name = "grigorchuk"

    def __init__(self, max_radius: int = 12):
        self.max_radius = max_radius
        self._trivial_memo: dict[tuple[str, ...], bool] = {}
        self._lock = threading.RLock()
        # Canonical table, grown layer by layer from the identity.
        self._canon: dict[tuple[str, ...], tuple[str, ...]] = {(): ()}
        self._dist: dict[tuple[str, ...], int] = {(): 0}
        self._buckets: dict[tuple, list[tuple[str, ...]]] = {self._signature(()): [()]}
        self._frontier: list[tuple[str, ...]] = [()]
        self._depth = 0

    # -- exact word problem --------------------------------------------------

    def is_trivial(self, word) -> bool:
        return self._is_trivial_reduced(reduce_word(word))

    def _is_trivial_reduced(self, word: tuple[str, ...]) -> bool:
        if not word:
            return True
        if len(word) == 1:
            return False
        cached = self._trivial_memo.get(word)
        if cached is not None:
            return cached
        if sum(1 for ch in word if ch == "a") % 2:
            result = False
        else:
            left, right = _sections(word)
            result = self._is_trivial_reduced(left) and self._is_trivial_reduced(right)
        self._trivial_memo[word] = result
        return result

    def words_equal(self, u, v) -> bool:
        # All generators are involutions, so the inverse is the reverse.
        return self.is_trivial(tuple(u) + tuple(reversed(tuple(v))))

    def _signature(self, word) -> tuple:
        return tuple(apply_word(word, bits) for bits in _LEVEL_BITS)

    # -- canonical table -----------------------------------------------------

    def _expand_one_layer(self) -> None:
        groups: dict[tuple[str, ...], list[tuple[str, ...]]] = {}
        new_buckets: dict[tuple, list[tuple[str, ...]]] = {}
        for parent in self._frontier:
            for gen in _GENS:
                cand = reduce_word(parent + (gen,))
                if cand in self._canon:
                    continue
                sig = self._signature(cand)
                rep = self._find_equal(self._buckets.get(sig, ()), cand)
                if rep is not None:
                    self._canon[cand] = self._canon[rep]
                    continue
                rep = self._find_equal(new_buckets.get(sig, ()), cand)
                if rep is not None:
                    if cand not in groups[rep]:
                        groups[rep].append(cand)
                else:
                    new_buckets.setdefault(sig, []).append(cand)
                    groups[cand] = [cand]
        layer = []
        for members in groups.values():
            canon = min(members)
            layer.append(canon)
            for w in members:
                self._canon[w] = canon
            self._dist[canon] = self._depth + 1
            self._buckets.setdefault(self._signature(canon), []).append(canon)
        self._frontier = sorted(layer)
        self._depth += 1

    def _find_equal(self, candidates, word):
        for rep in candidates:
            if self.words_equal(word, rep):
                return rep
        return None

    def canonical(self, word) -> tuple[str, ...]:
        """Canonical reduced word equal to the given one."""
        word = reduce_word(word)
        cached = self._canon.get(word)
        if cached is not None:
            return cached
        with self._lock:
            while self._depth < min(len(word), self.max_radius):
                self._expand_one_layer()
                cached = self._canon.get(word)
                if cached is not None:
                    return cached
            # The word may be non-geodesic: its element can sit at any
            # distance below its length, so resolve through the buckets.
            sig = self._signature(word)
            rep = self._find_equal(self._buckets.get(sig, ()), word)
            if rep is None:
                if len(word) > self.max_radius:
                    raise CapExceededError(
                        f"word of length {len(word)} needs the table past its "
                        f"radius cap {self.max_radius}",
                        cap=self.max_radius,
                    )
                raise AssertionError(f"canonical table missed {''.join(word)!r}")
            self._canon[word] = self._canon[rep]
            return self._canon[word]

    def distance_to_identity(self, word) -> int:
        return self._dist[self.canonical(word)]

    # -- Group interface -------------------------------------------------------

    def identity(self):
        return ()

    def multiply(self, g, h):
        return reduce_word(tuple(g) + tuple(h))

    def inverse(self, g):
        return tuple(reversed(tuple(g)))

    def encode(self, g):
        canon = self.canonical(g)
        return "".join(canon) if canon else "e"

    def decode(self, s):
        if s == "e":
            return ()
        if not s or any(ch not in _GENS for ch in s):
            raise UnknownVertexError(s, "expected a word over a,b,c,d or 'e'")
        word = tuple(s)
        if reduce_word(word) != word:
            raise UnknownVertexError(s, "word is not reduced")
        return word

    def key(self, g):
        return self.canonical(g)

    def default_generators(self):
        return [("a",), ("b",), ("c",), ("d",)]

    def describe(self):
        return {"group": "grigorchuk", "max_radius": self.max_radius}
