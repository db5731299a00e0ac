"""The special spine dual to a triangulation.

Spine vertices are tetrahedra, triple edges are triangle classes, 2-cells
are edge classes and regions are vertex classes.  The spine is a read-only
view: moves happen on the triangulation, which is then dualized again.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionViolated
from .moves import edge_embeddings
from .perm import EDGE_VERTICES, edge_index
from .skeleton import Skeleton, validate
from .triangulation import Triangulation

__all__ = [
    "SpecialSpine",
    "TripleEdge",
    "TwoCell",
    "Region",
    "dualize",
    "singular_graph",
    "check_two_cells_are_discs",
    "to_dot",
    "duality_report",
]


@dataclass(frozen=True)
class TripleEdge:
    """Dual to a triangle class: joins the spine vertices of its two sides."""

    index: int
    ends: tuple  # ((tet, face), (tet, face))


@dataclass(frozen=True)
class TwoCell:
    """Dual to an edge class.

    ``word`` lists ``(triple_edge, direction, corner)`` tokens in the order met
    when walking once around the edge; ``direction`` is +1 when the walk
    crosses the triangle from its first recorded side to its second, and
    ``corner`` is the ``(tet, edge index)`` between consecutive crossings.
    ``closes`` is False when the walk comes back with the edge reversed.
    """

    index: int
    word: tuple
    closes: bool


@dataclass(frozen=True)
class Region:
    """Dual to a vertex class, with its boundary surface counted cell by cell."""

    index: int
    euler_characteristic: int
    orientable: bool
    connected: bool


@dataclass(frozen=True)
class SpecialSpine:
    spine_vertices: tuple
    triple_edges: tuple
    two_cells: tuple
    regions: tuple

    def counts(self):
        return (len(self.spine_vertices), len(self.triple_edges), len(self.two_cells), len(self.regions))


def _two_cell(tri: Triangulation, skel: Skeleton, e: int) -> TwoCell:
    t, k = skel.edge_members[e][0]
    a, b = EDGE_VERTICES[k]
    emb = edge_embeddings(tri, t, a, b)
    word = []
    for tt, aa, bb, cc, dd in emb:
        cls = skel.triangle_of[tt][cc]
        first = skel.triangle_members[cls][0]
        direction = 1 if first == (tt, cc) else -1
        word.append((cls, direction, (tt, edge_index(aa, bb))))
    # around a reversed edge the walk needs two laps to meet its start, so
    # every corner shows up twice
    closes = len({c for _, _, c in word}) == len(word)
    return TwoCell(e, tuple(word), closes)


def _regions(tri: Triangulation, skel: Skeleton):
    n_v = skel.num_vertices
    faces = [0] * n_v
    edges = [0] * n_v
    verts = [0] * n_v
    for cls, members in enumerate(skel.vertex_members):
        faces[cls] = len(members)
    # each triangle class contributes one boundary arc per corner
    for members in skel.triangle_members:
        t, f = members[0]
        for v in range(4):
            if v != f:
                edges[skel.vertex_of[t][v]] += 1
    # each edge class contributes one boundary vertex per end
    for members in skel.edge_members:
        t, k = members[0]
        for v in EDGE_VERTICES[k]:
            verts[skel.vertex_of[t][v]] += 1
    out = []
    for cls in range(n_v):
        orientable, connected = _surface_walk(tri, skel.vertex_members[cls])
        out.append(Region(cls, verts[cls] - edges[cls] + faces[cls], orientable, connected))
    return tuple(out)


def _surface_walk(tri: Triangulation, corners):
    """Two-colour the corner triangles of one region boundary."""
    sides = {corners[0]: 1}
    todo = [corners[0]]
    orientable = True
    while todo:
        t, c = todo.pop()
        for f in range(4):
            if f == c:
                continue
            g = tri.gluing(t, f)
            if g is None:
                continue
            u, _, p = g
            nxt = (u, p[c])
            want = -sides[t, c] * p.sign
            if nxt not in sides:
                sides[nxt] = want
                todo.append(nxt)
            elif sides[nxt] != want:
                orientable = False
    return orientable, len(sides) == len(corners)


def dualize(tri: Triangulation, skel: Skeleton | None = None) -> SpecialSpine:
    """The special spine of a closed valid triangulation."""
    if not tri.is_closed():
        raise PreconditionViolated("dualize needs a closed triangulation")
    skel = skel or Skeleton(tri)
    if not validate(tri, skel):
        raise PreconditionViolated("dualize needs a valid triangulation")
    triple = tuple(TripleEdge(i, tuple(m)) for i, m in enumerate(skel.triangle_members))
    cells = tuple(_two_cell(tri, skel, e) for e in range(skel.num_edges))
    return SpecialSpine(tuple(range(tri.tet_count)), triple, cells, _regions(tri, skel))


def singular_graph(spine: SpecialSpine):
    """Return ``(nodes, arcs)``: arcs are ``(triple edge, node, node)``.

    Every node has four arc ends; a triple edge joining a spine vertex to
    itself is a loop and counts twice.
    """
    arcs = tuple((te.index, te.ends[0][0], te.ends[-1][0]) for te in spine.triple_edges)
    return spine.spine_vertices, arcs


def check_two_cells_are_discs(spine: SpecialSpine):
    return [cell.closes for cell in spine.two_cells]


def to_dot(spine: SpecialSpine) -> str:
    nodes, arcs = singular_graph(spine)
    lines = ["graph singular {"]
    lines.extend(f"  s{n};" for n in nodes)
    lines.extend(f"  s{a} -- s{b} [label=\"t{k}\"];" for k, a, b in arcs)
    lines.append("}")
    return "\n".join(lines) + "\n"


def duality_report(spine: SpecialSpine) -> str:
    v, e, c, r = spine.counts()
    lines = [
        f"spine vertices: {v}",
        f"triple edges: {e}",
        f"two-cells: {c}",
        f"regions: {r}",
    ]
    for reg in spine.regions:
        kind = "orientable" if reg.orientable else "non-orientable"
        lines.append(f"region {reg.index}: chi={reg.euler_characteristic} {kind}")
    return "\n".join(lines) + "\n"
