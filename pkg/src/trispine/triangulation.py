"""Singular triangulations stored as face-pairing tables.

Face ``f`` of a tetrahedron is the face opposite vertex ``f``.  The gluing of
face ``(t, f)`` is either ``None`` (an unglued, boundary face) or a triple
``(u, g, p)`` where ``p`` is a :class:`Perm4` carrying the vertex labels of
``t`` to those of ``u`` with ``p[f] == g``.  Gluings are symmetric: face
``(u, g)`` then carries ``(t, f, p.inverse())``.

Text format::

    tets 1
    0: 0(2013) 0(0312) 0(1203) 0(0231)
"""

from __future__ import annotations

import re

from .errors import ParseError
from .perm import IDENTITY, Perm4

__all__ = ["Triangulation", "parse", "serialize", "gieseking", "double_tetrahedron", "figure_eight"]

_RECORD = re.compile(r"^\s*(\d+)\s*:\s*(.*)$")
_GLUE = re.compile(r"^(\d+)\(([^)]*)\)$")


class Triangulation:
    """An immutable collection of tetrahedra with face pairings."""

    __slots__ = ("_glue", "_hash")

    def __init__(self, gluings, check: bool = True):
        self._glue = tuple(tuple(row) for row in gluings)
        self._hash = None
        if check:
            self._check()

    def _check(self):
        n = len(self._glue)
        for t, row in enumerate(self._glue):
            if len(row) != 4:
                raise ValueError(f"tetrahedron {t} needs 4 face entries")
            for f, g in enumerate(row):
                if g is None:
                    continue
                u, h, p = g
                if not 0 <= u < n:
                    raise ValueError(f"face ({t},{f}) glued to missing tetrahedron {u}")
                if p[f] != h:
                    raise ValueError(f"face ({t},{f}): permutation {p} does not send {f} to {h}")
                if (u, h) == (t, f):
                    raise ValueError(f"face ({t},{f}) glued to itself")
                back = self._glue[u][h]
                if back is None or back[0] != t or back[1] != f or back[2] != p.inverse():
                    raise ValueError(f"gluing of face ({t},{f}) is not an involution")

    # -- basic access --------------------------------------------------
    @property
    def tet_count(self) -> int:
        return len(self._glue)

    def __len__(self) -> int:
        return len(self._glue)

    def gluing(self, t: int, f: int):
        return self._glue[t][f]

    @property
    def table(self):
        return self._glue

    def is_closed(self) -> bool:
        return all(g is not None for row in self._glue for g in row)

    def boundary_faces(self):
        return [(t, f) for t, row in enumerate(self._glue) for f, g in enumerate(row) if g is None]

    def __eq__(self, other) -> bool:
        return isinstance(other, Triangulation) and self._glue == other._glue

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._glue)
        return self._hash

    def __repr__(self) -> str:
        return f"<Triangulation with {self.tet_count} tetrahedra>"

    # -- derived triangulations -------------------------------------------
    def relabel(self, tet_order, vertex_perms=None) -> "Triangulation":
        """Return an isomorphic copy.

        ``tet_order[i]`` is the new index of old tetrahedron ``i`` and
        ``vertex_perms[i]`` sends its old vertex labels to new ones.
        """
        n = self.tet_count
        if vertex_perms is None:
            vertex_perms = [IDENTITY] * n
        rows = [[None] * 4 for _ in range(n)]
        for t in range(n):
            nt, rt = tet_order[t], vertex_perms[t]
            for f in range(4):
                g = self._glue[t][f]
                if g is None:
                    continue
                u, h, p = g
                ru = vertex_perms[u]
                rows[nt][rt[f]] = (tet_order[u], ru[h], ru * p * rt.inverse())
        return Triangulation(rows, check=False)

    def disjoint_union(self, other: "Triangulation") -> "Triangulation":
        shift = self.tet_count
        rows = [list(r) for r in self._glue]
        for row in other._glue:
            rows.append([None if g is None else (g[0] + shift, g[1], g[2]) for g in row])
        return Triangulation(rows, check=False)

    def components(self):
        """Tetrahedron indices grouped by connected component."""
        seen = [False] * self.tet_count
        comps = []
        for start in range(self.tet_count):
            if seen[start]:
                continue
            seen[start] = True
            comp, stack = [], [start]
            while stack:
                t = stack.pop()
                comp.append(t)
                for g in self._glue[t]:
                    if g is not None and not seen[g[0]]:
                        seen[g[0]] = True
                        stack.append(g[0])
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def to_text(self) -> str:
        return serialize(self)

    @classmethod
    def from_text(cls, text: str) -> "Triangulation":
        return parse(text)


def serialize(tri: Triangulation) -> str:
    lines = [f"tets {tri.tet_count}"]
    for t, row in enumerate(tri.table):
        cells = ["-" if g is None else f"{g[0]}({g[2]})" for g in row]
        lines.append(f"{t}: " + " ".join(cells))
    return "\n".join(lines) + "\n"


def parse(text: str) -> Triangulation:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty input")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "tets" or not head[1].isdigit():
        raise ParseError(f"expected 'tets <n>', got {lines[0]!r}")
    n = int(head[1])
    if len(lines) - 1 != n:
        raise ParseError(f"expected {n} tetrahedron records, found {len(lines) - 1}")
    rows = [None] * n
    for line in lines[1:]:
        m = _RECORD.match(line)
        if not m:
            raise ParseError(f"malformed record {line!r}")
        t = int(m.group(1))
        if t >= n or rows[t] is not None:
            raise ParseError(f"bad or repeated tetrahedron index {t}")
        cells = m.group(2).split()
        if len(cells) != 4:
            raise ParseError(f"tetrahedron {t}: expected 4 face entries, got {len(cells)}")
        row = []
        for f, cell in enumerate(cells):
            if cell == "-":
                row.append(None)
                continue
            g = _GLUE.match(cell)
            if not g:
                raise ParseError(f"tetrahedron {t} face {f}: malformed entry {cell!r}")
            u = int(g.group(1))
            if u >= n:
                raise ParseError(f"tetrahedron {t} face {f}: partner {u} out of range")
            try:
                p = Perm4.from_string(g.group(2))
            except ValueError as exc:
                raise ParseError(f"tetrahedron {t} face {f}: {exc}") from None
            row.append((u, p[f], p))
        rows[t] = row
    try:
        return Triangulation(rows)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# -- a few standard triangulations ---------------------------------------------

def double_tetrahedron() -> Triangulation:
    """Two tetrahedra glued along all four faces by the identity."""
    return Triangulation([[(1, f, IDENTITY) for f in range(4)], [(0, f, IDENTITY) for f in range(4)]])


def gieseking() -> Triangulation:
    """One tetrahedron with 012 glued to 023 and 013 glued to 123."""
    a = Perm4((0, 2, 3, 1))  # face 3 (012) -> face 1 (023)
    b = Perm4((1, 2, 0, 3))  # face 2 (013) -> face 0 (123)
    return Triangulation([[(0, 2, b.inverse()), (0, 3, a.inverse()), (0, 0, b), (0, 1, a)]])


def figure_eight() -> Triangulation:
    """The standard two-tetrahedron ideal triangulation of the figure-eight knot complement."""
    return parse(
        "tets 2\n"
        "0: 1(0132) 1(1230) 1(2310) 1(2103)\n"
        "1: 0(0132) 0(3201) 0(3012) 0(2103)\n"
    )
