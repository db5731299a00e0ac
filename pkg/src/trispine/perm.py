"""Permutations of the four vertex labels of a tetrahedron.

A gluing between two tetrahedra is recorded as a ``Perm4`` sending every
vertex label of one tetrahedron to a vertex label of the other.  Because
there are only 24 such permutations they are interned: every instance with
the same images is the same object, and products and inverses come from
precomputed tables.
"""

from __future__ import annotations

from itertools import permutations

__all__ = ["Perm4", "ALL_PERMS", "IDENTITY", "EDGE_VERTICES", "edge_index"]


class Perm4(tuple):
    """An immutable bijection of ``{0, 1, 2, 3}`` stored as its image tuple.

    ``p[i]`` is the image of ``i``.  ``p * q`` is the composite that applies
    ``q`` first, so ``(p * q)[i] == p[q[i]]``.
    """

    __slots__ = ()
    _cache: dict = {}

    def __new__(cls, images=(0, 1, 2, 3)):
        images = tuple(images)
        cached = cls._cache.get(images)
        if cached is not None:
            return cached
        if len(images) != 4 or sorted(images) != [0, 1, 2, 3]:
            raise ValueError(f"not a permutation of 0..3: {images!r}")
        obj = super().__new__(cls, images)
        cls._cache[images] = obj
        return obj

    @classmethod
    def from_string(cls, text: str) -> "Perm4":
        if len(text) != 4 or any(ch not in "0123" for ch in text):
            raise ValueError(f"malformed permutation string {text!r}")
        return cls(int(ch) for ch in text)

    @classmethod
    def transposition(cls, a: int, b: int) -> "Perm4":
        images = [0, 1, 2, 3]
        images[a], images[b] = images[b], images[a]
        return cls(images)

    @classmethod
    def from_pairs(cls, pairs) -> "Perm4":
        """Build a permutation from ``(source, image)`` pairs.

        Three pairs are enough; the fourth image is forced.
        """
        images = [None] * 4
        for src, dst in pairs:
            images[src] = dst
        missing_src = [i for i in range(4) if images[i] is None]
        if len(missing_src) == 1:
            used = {x for x in images if x is not None}
            images[missing_src[0]] = ({0, 1, 2, 3} - used).pop()
        return cls(images)

    def __mul__(self, other: "Perm4") -> "Perm4":
        return _COMPOSE[self, other]

    def inverse(self) -> "Perm4":
        return _INVERSE[self]

    @property
    def index(self) -> int:
        """Position of this permutation in lexicographic order (0..23)."""
        return _INDEX[self]

    @property
    def sign(self) -> int:
        return _SIGN[self]

    def __str__(self) -> str:
        return "".join(str(x) for x in self)

    def __repr__(self) -> str:
        return f"Perm4({str(self)!r})"

    def __reduce__(self):
        return (Perm4, (tuple(self),))


ALL_PERMS: tuple = tuple(Perm4(p) for p in permutations(range(4)))
IDENTITY = Perm4()
_INDEX = {p: i for i, p in enumerate(ALL_PERMS)}
_INVERSE = {}
_SIGN = {}
for _p in ALL_PERMS:
    _inv = [0] * 4
    for _i, _x in enumerate(_p):
        _inv[_x] = _i
    _INVERSE[_p] = Perm4(_inv)
    _SIGN[_p] = 1 if sum(1 for a in range(4) for b in range(a + 1, 4) if _p[a] > _p[b]) % 2 == 0 else -1
_COMPOSE = {(p, q): Perm4(p[q[i]] for i in range(4)) for p in ALL_PERMS for q in ALL_PERMS}

# Edge k of a tetrahedron joins EDGE_VERTICES[k]; the order is 01,02,03,12,13,23.
EDGE_VERTICES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_EDGE_INDEX = {}
for _k, (_a, _b) in enumerate(EDGE_VERTICES):
    _EDGE_INDEX[_a, _b] = _k
    _EDGE_INDEX[_b, _a] = _k


def edge_index(a: int, b: int) -> int:
    return _EDGE_INDEX[a, b]
