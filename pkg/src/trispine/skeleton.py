"""Vertex, edge and triangle classes of a triangulation, plus vertex links.

Classes are numbered in order of first appearance when the corners, edges
or faces of the tetrahedra are scanned as ``(tet, index)`` pairs in
lexicographic order.  Move scripts address cells through these numbers, so
the ordering is part of the file format.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .perm import EDGE_VERTICES, edge_index
from .triangulation import Triangulation

__all__ = [
    "Skeleton",
    "VertexLink",
    "ValidityReport",
    "build_skeleton",
    "vertex_link",
    "validate",
    "classify_vertices",
    "is_simplicial",
    "euler_characteristic",
    "count_summary",
    "is_orientable",
]

SPHERE, TORUS, KLEIN, OTHER = "Sphere", "Torus", "KleinBottle", "Other"


@dataclass(frozen=True)
class VertexLink:
    vertex: int
    triangles: int
    euler_characteristic: int
    orientable: bool
    connected: bool
    closed: bool

    @property
    def classification(self) -> str:
        if not self.closed:
            return f"{OTHER}(chi={self.euler_characteristic},{'orientable' if self.orientable else 'non-orientable'},bounded)"
        if self.euler_characteristic == 2:
            return SPHERE
        if self.euler_characteristic == 0:
            return TORUS if self.orientable else KLEIN
        return f"{OTHER}(chi={self.euler_characteristic},{'orientable' if self.orientable else 'non-orientable'})"

    @property
    def is_sphere(self) -> bool:
        return self.closed and self.euler_characteristic == 2


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    reversed_edges: tuple = ()

    def __bool__(self) -> bool:
        return self.valid


class Skeleton:
    """Equivalence classes of corners, edges and faces of a triangulation.

    ``vertex_of[t][v]``, ``edge_of[t][e]`` and ``triangle_of[t][f]`` give the
    class of a corner, edge or face.  ``edge_sign[t][e]`` is +1 when the edge
    of tetrahedron ``t``, read from its lower to its higher vertex label,
    agrees with the reference direction of its class.
    """

    def __init__(self, tri: Triangulation):
        self.tri = tri

    @cached_property
    def _vertices(self):
        glue = self.tri.table
        n = self.tri.tet_count
        vertex_of = [[-1] * 4 for _ in range(n)]
        vertex_members = []
        for t0 in range(n):
            for v0 in range(4):
                if vertex_of[t0][v0] >= 0:
                    continue
                cls = len(vertex_members)
                members = [(t0, v0)]
                vertex_of[t0][v0] = cls
                i = 0
                while i < len(members):
                    t, v = members[i]
                    i += 1
                    for f in range(4):
                        if f == v:
                            continue
                        g = glue[t][f]
                        if g is None:
                            continue
                        u, _, p = g
                        w = p[v]
                        if vertex_of[u][w] < 0:
                            vertex_of[u][w] = cls
                            members.append((u, w))
                vertex_members.append(members)
        return vertex_of, vertex_members

    @cached_property
    def _edges(self):
        # Track the direction of every edge relative to its class to detect reversal.
        glue = self.tri.table
        n = self.tri.tet_count
        edge_of = [[-1] * 6 for _ in range(n)]
        edge_sign = [[0] * 6 for _ in range(n)]
        edge_members = []
        reversed_edges = []
        for t0 in range(n):
            for e0 in range(6):
                if edge_of[t0][e0] >= 0:
                    continue
                cls = len(edge_members)
                members = [(t0, e0)]
                edge_of[t0][e0] = cls
                edge_sign[t0][e0] = 1
                bad = False
                i = 0
                while i < len(members):
                    t, e = members[i]
                    i += 1
                    a, b = EDGE_VERTICES[e]
                    if edge_sign[t][e] < 0:
                        a, b = b, a
                    for f in range(4):
                        if f == a or f == b:
                            continue
                        g = glue[t][f]
                        if g is None:
                            continue
                        u, _, p = g
                        x, y = p[a], p[b]
                        e2 = edge_index(x, y)
                        s2 = 1 if x < y else -1
                        if edge_of[u][e2] < 0:
                            edge_of[u][e2] = cls
                            edge_sign[u][e2] = s2
                            members.append((u, e2))
                        elif edge_sign[u][e2] != s2:
                            bad = True
                edge_members.append(members)
                if bad:
                    reversed_edges.append(cls)
        return edge_of, edge_sign, edge_members, tuple(reversed_edges)

    @cached_property
    def _triangles(self):
        glue = self.tri.table
        n = self.tri.tet_count
        triangle_of = [[-1] * 4 for _ in range(n)]
        triangle_members = []
        for t in range(n):
            for f in range(4):
                if triangle_of[t][f] >= 0:
                    continue
                cls = len(triangle_members)
                triangle_of[t][f] = cls
                g = glue[t][f]
                if g is None:
                    triangle_members.append([(t, f)])
                else:
                    triangle_of[g[0]][g[1]] = cls
                    triangle_members.append([(t, f), (g[0], g[1])])
        return triangle_of, triangle_members

    vertex_of = property(lambda self: self._vertices[0])
    vertex_members = property(lambda self: self._vertices[1])
    edge_of = property(lambda self: self._edges[0])
    edge_sign = property(lambda self: self._edges[1])
    edge_members = property(lambda self: self._edges[2])
    reversed_edges = property(lambda self: self._edges[3])
    triangle_of = property(lambda self: self._triangles[0])
    triangle_members = property(lambda self: self._triangles[1])

    # -- counts -----------------------------------------------------------
    @property
    def num_vertices(self) -> int:
        return len(self.vertex_members)

    @property
    def num_edges(self) -> int:
        return len(self.edge_members)

    @property
    def num_triangles(self) -> int:
        return len(self.triangle_members)

    def vertex_degree(self, v: int) -> int:
        return len(self.vertex_members[v])

    def edge_degree(self, e: int) -> int:
        return len(self.edge_members[e])

    def triangle_degree(self, f: int) -> int:
        return len(self.triangle_members[f])

    def counts(self):
        return (self.num_vertices, self.num_edges, self.num_triangles, self.tri.tet_count)

    # -- convenience ----------------------------------------------------------
    def edge_endpoints(self, e: int):
        """Vertex classes at the two ends of edge class ``e`` in its reference direction."""
        t, k = self.edge_members[e][0]
        a, b = EDGE_VERTICES[k]
        if self.edge_sign[t][k] < 0:
            a, b = b, a
        return self.vertex_of[t][a], self.vertex_of[t][b]

    def triangle_vertices(self, f: int):
        """Vertex classes at the corners of the representative face, in label order."""
        t, k = self.triangle_members[f][0]
        return tuple(self.vertex_of[t][v] for v in range(4) if v != k)

    def tet_vertices(self, t: int):
        return tuple(self.vertex_of[t])

    @cached_property
    def links(self):
        return tuple(self._link(v) for v in range(self.num_vertices))

    def _link(self, cls: int) -> VertexLink:
        glue = self.tri.table
        corners = self.vertex_members[cls]
        # Link vertices are edge ends (t, c, x); union them across gluings.
        parent = {}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for t, c in corners:
            for x in range(4):
                if x != c:
                    parent[t, c, x] = (t, c, x)
        glued_sides = 0
        open_sides = 0
        colour = {corners[0]: 1}
        orientable = True
        stack = [corners[0]]
        for t, c in corners:
            for f in range(4):
                if f == c:
                    continue
                g = glue[t][f]
                if g is None:
                    open_sides += 1
                    continue
                glued_sides += 1
                u, _, p = g
                for x in range(4):
                    if x != c and x != f:
                        ra, rb = find((t, c, x)), find((u, p[c], p[x]))
                        if ra != rb:
                            parent[ra] = rb
        while stack:
            t, c = stack.pop()
            for f in range(4):
                if f == c:
                    continue
                g = glue[t][f]
                if g is None:
                    continue
                u, _, p = g
                want = -p.sign * colour[t, c]
                other = (u, p[c])
                if other not in colour:
                    colour[other] = want
                    stack.append(other)
                elif colour[other] != want:
                    orientable = False
        nv = len({find(k) for k in parent})
        ne = glued_sides // 2 + open_sides
        nf = len(corners)
        return VertexLink(
            vertex=cls,
            triangles=nf,
            euler_characteristic=nv - ne + nf,
            orientable=orientable,
            connected=len(colour) == nf,
            closed=open_sides == 0,
        )


def build_skeleton(tri: Triangulation) -> Skeleton:
    return Skeleton(tri)


def vertex_link(tri: Triangulation, v: int, skel: Skeleton | None = None) -> VertexLink:
    skel = skel or Skeleton(tri)
    if not 0 <= v < skel.num_vertices:
        raise IndexError(f"vertex class {v} out of range (0..{skel.num_vertices - 1})")
    return skel.links[v]


def validate(tri: Triangulation, skel: Skeleton | None = None) -> ValidityReport:
    skel = skel or Skeleton(tri)
    return ValidityReport(valid=not skel.reversed_edges, reversed_edges=skel.reversed_edges)


def classify_vertices(tri: Triangulation, skel: Skeleton | None = None):
    """Return ``(kinds, material_count, ideal_count)`` with kinds 'Material' or 'Ideal'."""
    skel = skel or Skeleton(tri)
    kinds = ["Material" if link.is_sphere else "Ideal" for link in skel.links]
    material = kinds.count("Material")
    return kinds, material, len(kinds) - material


def material_count(tri: Triangulation, skel: Skeleton | None = None) -> int:
    return classify_vertices(tri, skel)[1]


def is_simplicial(tri: Triangulation, skel: Skeleton | None = None) -> bool:
    """True when every simplex embeds and each is determined by its vertex set.

    Under those two conditions two simplices meet in the face spanned by
    their common vertices, or not at all.
    """
    skel = skel or Skeleton(tri)
    vo = skel.vertex_of
    for t in range(tri.tet_count):
        if len(set(vo[t])) != 4:
            return False
    seen = {}
    for e, members in enumerate(skel.edge_members):
        t, k = members[0]
        a, b = EDGE_VERTICES[k]
        key = frozenset((vo[t][a], vo[t][b]))
        if seen.setdefault(key, e) != e:
            return False
    seen = {}
    for f, members in enumerate(skel.triangle_members):
        t, k = members[0]
        key = frozenset(vo[t][v] for v in range(4) if v != k)
        if seen.setdefault(key, f) != f:
            return False
    seen = set()
    for t in range(tri.tet_count):
        key = frozenset(vo[t])
        if key in seen:
            return False
        seen.add(key)
    return True


def count_summary(tri: Triangulation, skel: Skeleton | None = None):
    skel = skel or Skeleton(tri)
    return skel.counts()


def euler_characteristic(tri: Triangulation, skel: Skeleton | None = None) -> int:
    v, e, f, t = count_summary(tri, skel)
    return v - e + f - t


def is_orientable(tri: Triangulation) -> bool:
    glue = tri.table
    colour = [0] * tri.tet_count
    for start in range(tri.tet_count):
        if colour[start]:
            continue
        colour[start] = 1
        stack = [start]
        while stack:
            t = stack.pop()
            for g in glue[t]:
                if g is None:
                    continue
                u, _, p = g
                want = -p.sign * colour[t]
                if not colour[u]:
                    colour[u] = want
                    stack.append(u)
                elif colour[u] != want:
                    return False
    return True
