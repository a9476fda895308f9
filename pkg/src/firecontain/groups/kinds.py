"""Concrete groups with exact normal forms.

All element arithmetic is exact: integer tuples, reduced words, dyadic
rationals via Fraction.  Encodings are canonical, so id equality is
element equality.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import UnknownVertexError
from .base import Group

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _parse_int(s: str, vertex: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise UnknownVertexError(vertex, f"expected integer, got {s!r}") from None


class FreeAbelianGroup(Group):
    """Z^rank with coordinate tuples as elements."""

    def __init__(self, rank: int):
        if rank < 1:
            raise ValueError(f"rank must be >= 1, got {rank}")
        self.rank = rank
        self.name = f"free-abelian({rank})"

    def identity(self):
        return (0,) * self.rank

    def multiply(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inverse(self, g):
        return tuple(-a for a in g)

    def encode(self, g):
        return ",".join(str(a) for a in g)

    def decode(self, s):
        parts = s.split(",")
        if len(parts) != self.rank:
            raise UnknownVertexError(s, f"expected {self.rank} coordinates")
        return tuple(_parse_int(p, s) for p in parts)

    def default_generators(self):
        gens = []
        for i in range(self.rank):
            e = [0] * self.rank
            e[i] = 1
            gens.append(tuple(e))
            e[i] = -1
            gens.append(tuple(e))
        return gens

    def layout(self, g):
        if self.rank == 1:
            return (float(g[0]), 0.0)
        if self.rank == 2:
            return (float(g[0]), float(g[1]))
        return None

    def describe(self):
        return {"group": "free-abelian", "rank": self.rank}


class FreeGroup(Group):
    """Free group of given rank; elements are freely reduced words.

    A word is a tuple of nonzero ints: +i for the i-th letter, -i for its
    inverse.  Encoded as a string of letters with inverses uppercased
    ("abA"); the identity encodes as "e".
    """

    def __init__(self, rank: int):
        if not 1 <= rank <= 26:
            raise ValueError(f"rank must be in 1..26, got {rank}")
        self.rank = rank
        self.name = f"free({rank})"

    def identity(self):
        return ()

    def multiply(self, g, h):
        out = list(g)
        for x in h:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def inverse(self, g):
        return tuple(-x for x in reversed(g))

    def encode(self, g):
        if not g:
            return "e"
        chars = []
        for x in g:
            letter = _LETTERS[abs(x) - 1]
            chars.append(letter if x > 0 else letter.upper())
        return "".join(chars)

    def decode(self, s):
        if s == "e":
            return ()
        word = []
        for ch in s:
            low = ch.lower()
            idx = _LETTERS.find(low)
            if idx < 0 or idx >= self.rank:
                raise UnknownVertexError(s, f"letter {ch!r} outside rank {self.rank}")
            x = idx + 1 if ch == low else -(idx + 1)
            if word and word[-1] == -x:
                raise UnknownVertexError(s, "word is not freely reduced")
            word.append(x)
        return tuple(word)

    def default_generators(self):
        gens = []
        for i in range(1, self.rank + 1):
            gens.append((i,))
            gens.append((-i,))
        return gens

    def describe(self):
        return {"group": "free", "rank": self.rank}


class HeisenbergGroup(Group):
    """Discrete Heisenberg group as integer triples.

    (x, y, z) * (x', y', z') = (x + x', y + y', z + z' + x * y').
    """

    name = "heisenberg"

    def identity(self):
        return (0, 0, 0)

    def multiply(self, g, h):
        return (g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1])

    def inverse(self, g):
        x, y, z = g
        return (-x, -y, -z + x * y)

    def encode(self, g):
        return ",".join(str(a) for a in g)

    def decode(self, s):
        parts = s.split(",")
        if len(parts) != 3:
            raise UnknownVertexError(s, "expected x,y,z")
        return tuple(_parse_int(p, s) for p in parts)

    def default_generators(self):
        return [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)]

    def describe(self):
        return {"group": "heisenberg"}


class LamplighterGroup(Group):
    """Lamplighter group: a finite set of lit lamps on Z plus a cursor.

    (S, k) * (T, m) = (S xor (T + k), k + m); the toggle generator lights
    the lamp under the cursor, the move generators shift the cursor.
    """

    name = "lamplighter"

    def identity(self):
        return (frozenset(), 0)

    def multiply(self, g, h):
        lamps = g[0] ^ frozenset(p + g[1] for p in h[0])
        return (lamps, g[1] + h[1])

    def inverse(self, g):
        return (frozenset(p - g[1] for p in g[0]), -g[1])

    def encode(self, g):
        lamps = ",".join(str(p) for p in sorted(g[0]))
        return f"{lamps}|{g[1]}"

    def decode(self, s):
        if "|" not in s:
            raise UnknownVertexError(s, "expected lamps|cursor")
        lamps_part, _, cursor_part = s.rpartition("|")
        cursor = _parse_int(cursor_part, s)
        if not lamps_part:
            return (frozenset(), cursor)
        lamps = [_parse_int(p, s) for p in lamps_part.split(",")]
        if lamps != sorted(set(lamps)):
            raise UnknownVertexError(s, "lamp positions must be strictly increasing")
        return (frozenset(lamps), cursor)

    def default_generators(self):
        toggle = (frozenset([0]), 0)
        move = (frozenset(), 1)
        back = (frozenset(), -1)
        return [toggle, move, back]

    def describe(self):
        return {"group": "lamplighter"}


class BaumslagSolitar12(Group):
    """BS(1,2) as pairs (q, k): the affine map x -> 2^k * x + q with q a
    dyadic rational.

    (q, k) * (q', k') = (q + 2^k * q', k + k').
    """

    name = "bs12"

    def identity(self):
        return (Fraction(0), 0)

    def multiply(self, g, h):
        q, k = g
        r, m = h
        return (q + Fraction(2) ** k * r, k + m)

    def inverse(self, g):
        q, k = g
        return (-(Fraction(2) ** -k) * q, -k)

    def encode(self, g):
        return f"{g[0]},{g[1]}"

    def decode(self, s):
        left, sep, right = s.rpartition(",")
        if not sep:
            raise UnknownVertexError(s, "expected q,k")
        k = _parse_int(right, s)
        try:
            q = Fraction(left)
        except (ValueError, ZeroDivisionError):
            raise UnknownVertexError(s, f"bad rational {left!r}") from None
        if q.denominator & (q.denominator - 1):
            raise UnknownVertexError(s, f"{left!r} is not dyadic")
        return (q, k)

    def default_generators(self):
        one = Fraction(1)
        return [(one, 0), (-one, 0), (Fraction(0), 1), (Fraction(0), -1)]

    def describe(self):
        return {"group": "bs12"}


def group_by_name(kind: str, **params) -> Group:
    """Factory over the group catalog; raises ValueError on unknown kinds."""
    from .grigorchuk import GrigorchukGroup

    if kind == "free-abelian":
        return FreeAbelianGroup(int(params.get("rank", 1)))
    if kind == "free":
        return FreeGroup(int(params.get("rank", 2)))
    if kind == "heisenberg":
        return HeisenbergGroup()
    if kind == "lamplighter":
        return LamplighterGroup()
    if kind == "bs12":
        return BaumslagSolitar12()
    if kind == "grigorchuk":
        return GrigorchukGroup(max_radius=int(params.get("max_radius", 12)))
    raise ValueError(f"unknown group kind {kind!r}")
