"""Derived moves compiled into scripts of bistellar and arch events.

Each macro returns a :class:`MacroResult`: the output triangulation, the
script that produces it from the input, and a few named landmarks (cell
classes of the output).  Where a direct construction exists
(``stellar_face_direct``, ``stellar_edge_direct``, ``barycentric_direct``)
it is written independently of the moves so the two can be compared.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import IllegalMove, PillowSelfGlued
from .moves import (
    MoveEvent,
    MoveScript,
    _cone_41,
    _rebuild,
    move_14,
    move_arch,
    apply_event_tracked,
    edge_embeddings,
)
from .perm import ALL_PERMS, EDGE_VERTICES, IDENTITY, Perm4, edge_index
from .signature import canonical_signature
from .skeleton import Skeleton
from .triangulation import Triangulation

__all__ = [
    "MacroResult",
    "triangular_02",
    "triangular_20",
    "find_pillows",
    "stellar_face",
    "stellar_face_direct",
    "stellar_edge",
    "stellar_edge_direct",
    "barycentric",
    "barycentric_direct",
    "v_move",
    "v_move_direct",
    "arch_with_membrane",
    "one_four_plus_arch",
    "one_four_plus_arch_direct",
    "transport_vertex",
    "MACROS",
]


@dataclass
class MacroResult:
    output: Triangulation
    script: MoveScript
    landmarks: dict = field(default_factory=dict)


class _Session:
    """Applies events one at a time while recording them."""

    def __init__(self, tri: Triangulation, name: str):
        self.base = tri
        self.tri = tri
        self.name = name
        self.events = []

    def run(self, ev: MoveEvent):
        try:
            new_tri, tracker = apply_event_tracked(self.tri, ev)
        except IllegalMove as exc:
            raise IllegalMove(f"{self.name}: step {len(self.events)} ({ev}): {exc}") from None
        self.events.append(ev)
        self.tri = new_tri
        return tracker

    def skeleton(self) -> Skeleton:
        return Skeleton(self.tri)

    def run_face(self, t: int, f: int):
        """2-3 move on face ``f`` of ``t``, with ``t`` on the near side."""
        skel = self.skeleton()
        k = skel.triangle_of[t][f]
        members = skel.triangle_members[k]
        return self.run(MoveEvent("23", k, side=members.index((t, f))))

    def run_edge(self, t: int, a: int, b: int):
        return self.run(MoveEvent("32", self.skeleton().edge_of[t][edge_index(a, b)]))

    def result(self, landmarks=None) -> MacroResult:
        script = MoveScript(canonical_signature(self.base), list(self.events), [f"macro: {self.name}"])
        return MacroResult(self.tri, script, landmarks or {})


def _triangle_rep(skel: Skeleton, k: int):
    if not 0 <= k < skel.num_triangles:
        raise IllegalMove(f"triangle class {k} out of range")
    members = skel.triangle_members[k]
    if len(members) != 2:
        raise IllegalMove(f"triangle class {k} is a boundary triangle")
    return members


# -- triangular pillows -------------------------------------------------------------

def triangular_02(tri: Triangulation, k: int) -> MacroResult:
    """Insert a triangular pillow into triangle class ``k``: a 1-4 move on one
    side followed by a 3-2 move on the edge from the new vertex to the far apex."""
    skel = Skeleton(tri)
    (t0, f0), _ = _triangle_rep(skel, k)
    s = _Session(tri, f"triangular_02 t{k}")
    tr = s.run(MoveEvent("14", t0))
    cone = tr.new_tets[f0]  # cone over the triangle itself
    j = min(x for x in range(4) if x != f0)
    nj = tr.new_tets[j]
    e = s.skeleton().edge_of[nj][edge_index(j, f0)]
    tr2 = s.run(MoveEvent("32", e))
    skel = s.skeleton()
    pillow_vertex = skel.vertex_of[tr2.tet_map[cone]][f0]
    return s.result(_pillow_landmarks(s.tri, skel, pillow_vertex))


def _pillow_at(tri: Triangulation, skel: Skeleton, v: int):
    """Return ``((P, cP), (Q, cQ))`` if vertex class ``v`` is the inner vertex of a pillow."""
    members = skel.vertex_members[v]
    if len(members) != 2:
        return None
    (p, cp), (q, cq) = members
    if p == q:
        return None
    perm = None
    for f in range(4):
        if f == cp:
            continue
        g = tri.gluing(p, f)
        if g is None or g[0] != q or g[2][cp] != cq:
            return None
        if perm is None:
            perm = g[2]
        elif g[2] != perm:
            return None
    return (p, cp), (q, cq)


def find_pillows(tri: Triangulation, skel: Skeleton | None = None):
    """Vertex classes that sit inside a triangular pillow."""
    skel = skel or Skeleton(tri)
    return [v for v in range(skel.num_vertices) if _pillow_at(tri, skel, v) is not None]


def _pillow_landmarks(tri, skel, v):
    (p, cp), (q, cq) = _pillow_at(tri, skel, v)
    return {
        "pillow_vertex": v,
        "pillow_tets": (p, q),
        "outer_faces": (skel.triangle_of[p][cp], skel.triangle_of[q][cq]),
    }


def triangular_20(tri: Triangulation, v: int) -> MacroResult:
    """Remove the triangular pillow around vertex class ``v``: a 2-3 move on an
    outer face of the pillow, then a 4-1 move on the inner vertex."""
    skel = Skeleton(tri)
    if not 0 <= v < skel.num_vertices:
        raise IllegalMove(f"vertex class {v} out of range")
    found = _pillow_at(tri, skel, v)
    if found is None:
        raise IllegalMove(f"vertex class {v} is not the inner vertex of a triangular pillow")
    (p, cp), (q, cq) = found
    g = tri.gluing(p, cp)
    if g is None or g[0] == q:
        raise PillowSelfGlued("the two outer faces of the pillow are glued to each other")
    # 2-3 on the outer face of the pillow half with the smaller (tet, face) address
    (a, ca), (b, cb) = sorted([(p, cp), (q, cq)])
    s = _Session(tri, f"triangular_20 v{v}")
    tr = s.run(MoveEvent("23", skel.triangle_of[a][ca]))
    other = tr.tet_map[b]
    w = s.skeleton().vertex_of[other][cb]
    s.run(MoveEvent("41", w))
    return s.result({})


# -- stellar moves ----------------------------------------------------------------

def stellar_face(tri: Triangulation, k: int) -> MacroResult:
    """Subdivide triangle class ``k`` at a new central vertex: 1-4 then 2-3."""
    skel = Skeleton(tri)
    (t0, f0), (t1, _) = _triangle_rep(skel, k)
    if t0 == t1:
        raise IllegalMove("stellar_face: both sides of the triangle lie in one tetrahedron")
    s = _Session(tri, f"stellar_face t{k}")
    tr = s.run(MoveEvent("14", t0))
    cone = tr.new_tets[f0]
    centre = (cone, f0)
    tr = s.run(MoveEvent("23", s.skeleton().triangle_of[cone][f0]))
    ct = tr.corner(*centre)
    skel = s.skeleton()
    return s.result({"new_vertex": skel.vertex_of[ct[0]][ct[1]]})


def stellar_face_direct(tri: Triangulation, k: int) -> Triangulation:
    """Direct construction: cone the subdivided triangle into both neighbours."""
    skel = Skeleton(tri)
    (t0, f0), (t1, f1) = _triangle_rep(skel, k)
    if t0 == t1:
        raise IllegalMove("stellar_face: both sides of the triangle lie in one tetrahedron")
    p = tri.gluing(t0, f0)[2]
    u = [x for x in range(4) if x != f0]
    # local 0..2: pieces of t0 where corner u[i] is replaced by the centre; 3..5: same for t1
    internal, external = [], {}
    for i, ui in enumerate(u):
        external[i, ui] = (t0, ui, IDENTITY)
        external[3 + i, p[ui]] = (t1, p[ui], IDENTITY)
        internal.append((i, f0, 3 + i, f1, p))
        for j in range(i + 1, 3):
            uj = u[j]
            internal.append((i, uj, j, ui, Perm4.transposition(ui, uj)))
            internal.append((3 + i, p[uj], 3 + j, p[ui], Perm4.transposition(p[ui], p[uj])))
    return _rebuild(tri, [t0, t1], 6, internal, external)[0]


def _edge_cycle(tri: Triangulation, skel: Skeleton, e: int):
    if not 0 <= e < skel.num_edges:
        raise IllegalMove(f"edge class {e} out of range")
    t, k = skel.edge_members[e][0]
    a, b = EDGE_VERTICES[k]
    emb = edge_embeddings(tri, t, a, b)
    last = emb[-1]
    if tri.gluing(last[0], last[3]) is None:
        raise IllegalMove("stellar_edge: edge lies on the boundary")
    d = len(emb)
    if d < 2:
        raise IllegalMove("stellar_edge: degree < 2")
    if len({x[0] for x in emb}) != d:
        raise IllegalMove("stellar_edge: edge repeated in a tetrahedron")
    start = min(range(d), key=lambda i: emb[i][0])
    return emb[start:] + emb[:start]


def stellar_edge(tri: Triangulation, e: int) -> MacroResult:
    """Subdivide edge class ``e``: 1-4 on the lowest incident tetrahedron,
    2-3 moves across the faces around the edge, and a closing 3-2."""
    skel = Skeleton(tri)
    emb = _edge_cycle(tri, skel, e)
    d = len(emb)
    s = _Session(tri, f"stellar_edge e{e}")
    faces = [(x[0], x[3]) for x in emb]  # tau_i: leaves sigma_i through the face opposite c_i
    edge = (emb[0][0], emb[0][1], emb[0][2])
    centre = None

    def follow(tr):
        nonlocal edge, centre
        for i, fc in enumerate(faces):
            if fc is not None:
                img = tr.face(*fc)
                faces[i] = None if img is None else img[:2]
        edge = tr.edge(*edge)
        if centre is not None:
            centre = tr.corner(*centre)

    tr = s.run(MoveEvent("14", emb[0][0]))
    centre = (tr.new_tets[0], 0)
    follow(tr)
    for i in range(d - 2):
        t, f = faces[i]
        tr = s.run(MoveEvent("23", s.skeleton().triangle_of[t][f]))
        follow(tr)
    skel = s.skeleton()
    t, a, b = edge
    tr = s.run(MoveEvent("32", skel.edge_of[t][edge_index(a, b)]))
    follow(tr)
    skel = s.skeleton()
    return s.result({"new_vertex": skel.vertex_of[centre[0]][centre[1]]})


def stellar_edge_direct(tri: Triangulation, e: int) -> Triangulation:
    """Direct construction: split every tetrahedron around the edge in two."""
    skel = Skeleton(tri)
    emb = _edge_cycle(tri, skel, e)
    index = {x[0]: i for i, x in enumerate(emb)}
    ends = {x[0]: (x[1], x[2]) for x in emb}
    internal, external = [], {}
    # local 2i keeps endpoint a (b replaced by the midpoint), 2i+1 keeps b
    for i, (t, a, b, c, dd) in enumerate(emb):
        external[2 * i, b] = (t, b, IDENTITY)
        external[2 * i + 1, a] = (t, a, IDENTITY)
        internal.append((2 * i, a, 2 * i + 1, b, Perm4.transposition(a, b)))
        for f in (c, dd):
            u, h, q = tri.gluing(t, f)
            j = index[u]
            if (j, h) < (i, f):
                continue
            ua, ub = ends[u]
            # the half of t holding a meets the half of u holding q[a]
            ha = 2 * j if q[a] == ua else 2 * j + 1
            hb = 2 * j if q[b] == ua else 2 * j + 1
            internal.append((2 * i, f, ha, h, q))
            internal.append((2 * i + 1, f, hb, h, q))
    return _rebuild(tri, [x[0] for x in emb], 2 * len(emb), internal, external)[0]


# -- barycentric subdivision -------------------------------------------------------------

def _propagate(flags, tracker, new_count):
    out = [None] * new_count
    for t, nt in enumerate(tracker.tet_map):
        if nt is not None:
            out[nt] = flags[t]
    for nt in tracker.new_tets:
        out[nt] = tuple(
            flags[tracker.corner_origin[nt, x][0]][tracker.corner_origin[nt, x][1]]
            if (nt, x) in tracker.corner_origin
            else False
            for x in range(4)
        )
    return out


def barycentric(tri: Triangulation) -> MacroResult:
    """Barycentric subdivision by bistellar moves.

    A 1-4 move in every tetrahedron, then a stellar move on every original
    triangle, then a stellar move on every original edge.  Original cells
    are recognised by their corners: a cell is original when all of its
    corners are original vertices.
    """
    if not tri.is_closed():
        raise IllegalMove("barycentric: triangulation is not closed")
    s = _Session(tri, "barycentric")
    original = [(True,) * 4 for _ in range(tri.tet_count)]
    position = list(range(tri.tet_count))

    def run(ev):
        nonlocal original
        tr = s.run(ev)
        original = _propagate(original, tr, s.tri.tet_count)
        return tr

    for i in range(tri.tet_count):
        tr = run(MoveEvent("14", position[i]))
        position = [None if p is None else tr.tet_map[p] for p in position]

    def all_original_triangle(skel):
        for k, members in enumerate(skel.triangle_members):
            t, f = members[0]
            if all(original[t][x] for x in range(4) if x != f):
                return k
        return None

    def all_original_edge(skel):
        for e, members in enumerate(skel.edge_members):
            t, k = members[0]
            a, b = EDGE_VERTICES[k]
            if original[t][a] and original[t][b]:
                return e
        return None

    while True:
        skel = s.skeleton()
        k = all_original_triangle(skel)
        if k is None:
            break
        (t0, f0), (t1, _) = skel.triangle_members[k]
        if t0 == t1:
            raise IllegalMove("barycentric: original triangle with both sides in one tetrahedron")
        tr = run(MoveEvent("14", t0))
        cone = tr.new_tets[f0]
        run(MoveEvent("23", s.skeleton().triangle_of[cone][f0]))

    while True:
        skel = s.skeleton()
        e = all_original_edge(skel)
        if e is None:
            break
        emb = _edge_cycle(s.tri, skel, e)
        d = len(emb)
        faces = [(x[0], x[3]) for x in emb]
        edge = (emb[0][0], emb[0][1], emb[0][2])

        def follow(tr):
            nonlocal edge
            for i, fc in enumerate(faces):
                if fc is not None:
                    img = tr.face(*fc)
                    faces[i] = None if img is None else img[:2]
            edge = tr.edge(*edge)

        follow(run(MoveEvent("14", emb[0][0])))
        for i in range(d - 2):
            t, f = faces[i]
            follow(run(MoveEvent("23", s.skeleton().triangle_of[t][f])))
        t, a, b = edge
        run(MoveEvent("32", s.skeleton().edge_of[t][edge_index(a, b)]))

    skel = s.skeleton()
    orig_vertices = sorted({skel.vertex_of[t][x] for t in range(s.tri.tet_count) for x in range(4) if original[t][x]})
    return s.result({"original_vertices": orig_vertices})


_PERM_POS = {p: i for i, p in enumerate(ALL_PERMS)}


def barycentric_direct(tri: Triangulation) -> Triangulation:
    """Direct barycentric subdivision.

    Tetrahedron ``24 t + i`` is the flag ``ALL_PERMS[i] = p`` of ``t``: its
    label 0 is the original vertex ``p[0]``, label 1 the midpoint of edge
    ``p[0] p[1]``, label 2 the centre of face ``p[0] p[1] p[2]`` and label 3
    the centre of ``t``.
    """
    rows = [[None] * 4 for _ in range(24 * tri.tet_count)]
    for t in range(tri.tet_count):
        for p in ALL_PERMS:
            me = 24 * t + _PERM_POS[p]
            for f in range(3):
                q = p * Perm4.transposition(f, f + 1)
                rows[me][f] = (24 * t + _PERM_POS[q], f, IDENTITY)
            g = tri.gluing(t, p[3])
            if g is not None:
                u, _, r = g
                rows[me][3] = (24 * u + _PERM_POS[r * p], 3, IDENTITY)
    return Triangulation(rows, check=False)


# -- V-move, arch-with-membrane, 1-4 move plus arch ----------------------------------
#
# All three are driven by one located template around a tetrahedron ``t``,
# a face ``f`` of ``t`` with a different tetrahedron behind it, and a second
# face ``x`` of ``t``.  Faces are followed through the moves with trackers,
# and 2-3 moves are applied from a named side, so the template does not depend
# on how the rest of the triangulation is numbered.

def _neighbour_check(tri: Triangulation, t: int, f: int):
    if not 0 <= t < tri.tet_count:
        raise IllegalMove(f"tetrahedron {t} out of range")
    if tri.tet_count < 2:
        raise IllegalMove("needs at least two tetrahedra")
    g = tri.gluing(t, f)
    if g is None:
        raise IllegalMove(f"face {f} of tetrahedron {t} is a boundary face")
    if g[0] == t:
        raise IllegalMove(f"face {f} of tetrahedron {t} is glued back to the same tetrahedron")


def _follow_face(face, *trackers):
    for tr in trackers:
        img = tr.face(*face)
        if img is None:
            raise AssertionError("template face was removed")
        face = img[:2]
    return face


def _follow_edge(edge, *trackers):
    for tr in trackers:
        edge = tr.edge(*edge)
        if edge is None:
            raise AssertionError("template edge was removed")
    return edge


def _v_steps(s: _Session, t: int, f: int, x: int):
    """Four moves realising the V-move at ``t``; returns the faces and edges
    that the later templates start from."""
    tr1 = s.run_face(t, f)
    # the internal triangle through corner x; its tetrahedron P has labels
    # 0 = apex of t, 1 = apex of the neighbour, 3 = x
    p_t, p_f = tr1.info["internal_faces"][(t, x)]
    tr2 = s.run_face(p_t, p_f)
    tr3 = s.run_face(*tr2.info["internal_faces"][(p_t, 1)])
    tr4 = s.run_edge(*_follow_edge(tr1.info["new_edge"], tr2, tr3))
    return {
        "apex_face": _follow_face(tr2.info["internal_faces"][(p_t, 0)], tr3, tr4),
        "last_edge": _follow_edge(tr3.info["new_edge"], tr4),
        "neck": _follow_edge(tr2.info["new_edge"], tr3, tr4),
    }


def _awm_steps(s: _Session, marks):
    t, f = marks["apex_face"]
    g = s.tri.gluing(t, f)
    if (g[0], g[1]) < (t, f):
        t, f = g[0], g[1]
    tr5 = s.run_face(t, f)
    edge = _follow_edge(marks["last_edge"], tr5)
    tr6 = s.run_edge(*edge)
    return {
        "inner_face": _follow_face(tr5.info["internal_faces"][(t, 1)], tr6),
        "membrane_face": tr6.info["internal_face"],
        "membrane": _follow_edge(tr5.info["new_edge"], tr6),
        "neck": _follow_edge(marks["neck"], tr5, tr6),
    }


def _template_faces(tri: Triangulation, t: int, v: int):
    """Pick ``(f, x)`` so that the template at ``t`` merges corner ``v`` with the new vertex."""
    for f in range(4):
        if f == v:
            continue
        g = tri.gluing(t, f)
        if g is None or g[0] == t:
            continue
        u = [y for y in range(4) if y != f]
        x = u[(u.index(v) + 1) % 3]
        return f, x
    raise IllegalMove("no face away from the target corner has a different tetrahedron behind it")


def v_move(tri: Triangulation, t: int, f: int, x: int | None = None) -> MacroResult:
    """V-move at tetrahedron ``t`` using the neighbour behind face ``f``.

    Equivalent to inserting a quadrilateral pillow between faces ``f`` and
    ``x`` of ``t`` (see :func:`v_move_direct`); ``x`` defaults to the lowest
    label other than ``f``.  Four moves: 2-3, 2-3, 2-3, 3-2.
    """
    _neighbour_check(tri, t, f)
    if x is None:
        x = min(y for y in range(4) if y != f)
    if x == f or not 0 <= x < 4:
        raise IllegalMove("second face must differ from the neighbour face")
    s = _Session(tri, f"v_move T{t} f{f} x{x}")
    _v_steps(s, t, f, x)
    return s.result({})


def v_move_direct(tri: Triangulation, t: int, fa: int, fb: int) -> Triangulation:
    """Insert a quadrilateral pillow between faces ``fa`` and ``fb`` of ``t``.

    The pillow is two tetrahedra glued to each other along two faces.  Its
    four free faces are glued to ``fa`` and ``fb`` of ``t`` and to the two faces
    that used to be glued there.
    """
    c, d = [y for y in range(4) if y not in (fa, fb)]
    ga, gb = tri.gluing(t, fa), tri.gluing(t, fb)
    if ga is None or gb is None:
        raise IllegalMove("quadrilateral pillow: boundary face")
    if (ga[0], ga[1]) == (t, fb):
        raise IllegalMove("quadrilateral pillow: the two faces are glued to each other")
    n = tri.tet_count
    rows = [list(r) for r in tri.table] + [[None] * 4, [None] * 4]
    # pillow labels 0, 1 sit on the shared edge c d; 2 and 3 on the far corners
    m = Perm4.from_pairs([(0, c), (1, d), (2, fb), (3, fa)])
    rows[n][0] = (n + 1, 0, IDENTITY)
    rows[n + 1][0] = (n, 0, IDENTITY)
    rows[n][1] = (n + 1, 1, IDENTITY)
    rows[n + 1][1] = (n, 1, IDENTITY)
    rows[n][3] = (t, fa, m)
    rows[n][2] = (t, fb, m)
    rows[t][fa] = (n, 3, m.inverse())
    rows[t][fb] = (n, 2, m.inverse())
    for face, (u, h, p) in ((3, ga), (2, gb)):
        q = p * m
        rows[n + 1][face] = (u, h, q)
        rows[u][h] = (n + 1, face, q.inverse())
    return Triangulation(rows)


def arch_with_membrane(tri: Triangulation, k: int, x: int | None = None) -> MacroResult:
    """Build an arch-with-membrane next to triangle class ``k``: a V-move at the
    tetrahedron on side 0 of the triangle, then a 2-3 and a 3-2 move.

    Landmarks: ``membrane`` is the edge class of degree two dual to the
    membrane bigon; ``membrane_face`` the triangle class created by the last
    move.
    """
    skel = Skeleton(tri)
    if not 0 <= k < skel.num_triangles:
        raise IllegalMove(f"triangle class {k} out of range")
    t, f = skel.triangle_members[k][0]
    _neighbour_check(tri, t, f)
    if x is None:
        x = min(y for y in range(4) if y != f)
    s = _Session(tri, f"arch_with_membrane t{k}")
    marks = _awm_steps(s, _v_steps(s, t, f, x))
    return s.result(_awm_landmarks(s, marks))


def _awm_landmarks(s: _Session, marks):
    skel = s.skeleton()

    def edge_class(edge):
        t, a, b = edge
        return skel.edge_of[t][edge_index(a, b)]

    # the membrane bigon is dual to an edge of degree two and the monogon
    # inside the arch to an edge of degree one
    return {"membrane": edge_class(marks["membrane"]), "neck": edge_class(marks["neck"])}


def one_four_plus_arch(tri: Triangulation, t: int, v: int) -> MacroResult:
    """The result of a 1-4 move on ``t`` followed by an arch joining the new
    vertex to vertex class ``v``, built from 2-3 and 3-2 moves only:
    an arch-with-membrane and two more 2-3 moves.

    ``v`` must be a vertex of ``t``; the lowest corner of ``t`` in that class is used.
    """
    if not 0 <= t < tri.tet_count:
        raise IllegalMove(f"tetrahedron {t} out of range")
    skel = Skeleton(tri)
    corners = [c for c in range(4) if skel.vertex_of[t][c] == v]
    if not corners:
        raise IllegalMove(f"vertex class {v} is not a vertex of tetrahedron {t}")
    c = corners[0]
    f, x = _template_faces(tri, t, c)
    s = _Session(tri, f"one_four_plus_arch T{t} v{v}")
    marks = _awm_steps(s, _v_steps(s, t, f, x))
    tr7 = s.run_face(*marks["inner_face"])
    s.run_face(*_follow_face(marks["membrane_face"], tr7))
    skel = s.skeleton()
    first_new = tri.tet_count - 2
    # the arch's monogon is dual to an edge of degree one inside the new tetrahedra
    necks = [
        e for e in range(skel.num_edges)
        if skel.edge_degree(e) == 1 and skel.edge_members[e][0][0] >= first_new
    ]
    return s.result({"neck": necks, "arch_corners": (c, x)})


def one_four_plus_arch_direct(tri: Triangulation, t: int, v: int) -> Triangulation:
    """The same result from the primitives: a 1-4 move, then an arch in the
    new triangle spanned by the new vertex and the corners ``c`` and ``x`` of
    ``t`` that :func:`one_four_plus_arch` uses, merging the new vertex with ``c``."""
    skel = Skeleton(tri)
    corners = [c for c in range(4) if skel.vertex_of[t][c] == v]
    if not corners:
        raise IllegalMove(f"vertex class {v} is not a vertex of tetrahedron {t}")
    c = corners[0]
    _, x = _template_faces(tri, t, c)
    i, j = [y for y in range(4) if y not in (c, x)]
    mid, tr = move_14(tri, t)
    # cone i has the new vertex at label i; its face j is the triangle {new, c, x}
    return move_arch(mid, tr.new_tets[i], j, i, c)[0]


# -- moving a 4-1 vertex ------------------------------------------------------------

def transport_vertex(tri: Triangulation, w: int, target: int) -> MacroResult:
    """Move the vertex ``w`` (in 4-1 position) into the neighbouring tetrahedron
    ``target`` of the coarse picture: a 3-2 move then a 2-3 move.

    ``target`` is a tetrahedron glued to an outer face of the cone around ``w``.
    """
    skel = Skeleton(tri)
    if not 0 <= w < skel.num_vertices:
        raise IllegalMove(f"vertex class {w} out of range")
    t0, c0 = skel.vertex_members[w][0]
    cones = _cone_41(tri, t0, c0, skel.vertex_degree(w))
    cone_tets = {cones[i][0] for i in range(4)}
    chosen = None
    for i in range(4):
        ti, mi = cones[i]
        g = tri.gluing(ti, mi[i])
        if g[0] == target and target not in cone_tets:
            chosen = (i, ti, mi)
            break
    if chosen is None:
        raise IllegalMove("transport_vertex: target is not a neighbour across an outer face of the cone")
    i, ti, mi = chosen
    # Remove the edge from w to the outer vertex opposite the shared face: this
    # leaves a triangular pillow whose free outer face is glued to the target.
    j = min(x for x in range(4) if x != i)
    tj, mj = cones[j]
    s = _Session(tri, f"transport_vertex v{w} T{target}")
    tr = s.run(MoveEvent("32", skel.edge_of[tj][edge_index(mj[j], mj[i])]))
    # cone i survives the 3-2 move; w is its corner mi[i]
    ti = tr.tet_map[ti]
    tr = s.run(MoveEvent("23", s.skeleton().triangle_of[ti][mi[i]]))
    t, c = tr.corner(ti, mi[i])
    return s.result({"vertex": s.skeleton().vertex_of[t][c]})


# name -> function; the CLI passes the address integers as positional arguments
MACROS = {
    "triangular-02": triangular_02,
    "triangular-20": triangular_20,
    "stellar-face": stellar_face,
    "stellar-edge": stellar_edge,
    "barycentric": barycentric,
    "v-move": v_move,
    "arch-with-membrane": arch_with_membrane,
    "one-four-plus-arch": one_four_plus_arch,
    "transport-vertex": transport_vertex,
}
