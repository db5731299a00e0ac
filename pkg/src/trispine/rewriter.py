"""Marked triangulations and the rewriting of move sequences.

A pillow mark names a triangle where a triangular pillow should sit; an arch
mark names a triangle together with two of its vertex classes that an arch
would join.  When a bistellar move deletes a marked triangle the mark moves
to a triangle on the boundary of the region the move rebuilds, which always
survives.  Among several eligible triangles the one whose ``(tet, face)``
address is least in the triangulation before the move is taken.

``pillow_rewrite`` uses pillow marks to rebuild a sequence whose material
vertex count dips to ``k - 1`` into one that never drops below ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IllegalMove, InvariantBroken, PreconditionViolated, SelfGluedBall
from .macros import triangular_02, triangular_20
from .moves import MoveEvent, MoveScript, _arch_labels, apply_event_tracked, edge_embeddings, insert_arch
from .perm import EDGE_VERTICES, IDENTITY, Perm4, edge_index
from .signature import canonical_signature, find_isomorphism
from .skeleton import Skeleton, classify_vertices
from .triangulation import Triangulation

__all__ = [
    "PillowMark",
    "ArchMark",
    "MarkedTriangulation",
    "insert_pillow_direct",
    "transport_pillow_mark",
    "pillow_rewrite",
    "floor_report",
    "transport_arch_mark",
    "arch_relocation",
    "ball_self_gluings",
    "waypoint_connect",
    "remove_BBB_triangles",
    "bbb_triangles",
]

BISTELLAR = ("14", "23", "32", "41")


@dataclass(frozen=True)
class PillowMark:
    triangle: int


@dataclass(frozen=True)
class ArchMark:
    """Triangle class plus the ordered pair of vertex classes to identify."""

    triangle: int
    pair: tuple


@dataclass(frozen=True)
class MarkedTriangulation:
    tri: Triangulation
    pillow: PillowMark | None = None
    arch: ArchMark | None = None


def _material(skel: Skeleton, v: int) -> bool:
    return skel.links[v].is_sphere


# -- pillow marks -------------------------------------------------------------------

def insert_pillow_direct(tri: Triangulation, t: int, f: int) -> Triangulation:
    """Split the triangle on face ``f`` of ``t`` and put a triangular pillow in between.

    The pillow is appended as two tetrahedra with the inner vertex at label 3;
    their faces 0, 1, 2 are glued to each other by the identity.
    """
    g = tri.gluing(t, f)
    if g is None:
        raise IllegalMove("pillow: boundary triangle")
    u, h, p = g
    n = tri.tet_count
    m = Perm4.from_pairs(list(zip(range(3), [x for x in range(4) if x != f])) + [(3, f)])
    rows = [list(r) for r in tri.table] + [[None] * 4, [None] * 4]
    for i in range(3):
        rows[n][i] = (n + 1, i, IDENTITY)
        rows[n + 1][i] = (n, i, IDENTITY)
    q = p * m
    rows[n][3] = (t, f, m)
    rows[t][f] = (n, 3, m.inverse())
    rows[n + 1][3] = (u, h, q)
    rows[u][h] = (n + 1, 3, q.inverse())
    return Triangulation(rows)


def _surviving_member(tracker, members):
    for t, f in members:
        if tracker.face(t, f) is not None:
            return t, f
    return None


def _relocation_face(tracker):
    """Least surviving boundary face of the region rebuilt by a move."""
    if not tracker.face_map:
        raise InvariantBroken("move left no surviving boundary triangle")
    return min(tracker.face_map)


def _pillow_step(tri: Triangulation, skel: Skeleton, k: int, ev: MoveEvent):
    """Return ``(new_tri, tracker, face)``: ``face`` is the old ``(t, f)`` that carries
    the mark through the move, and ``relocated`` tells whether it had to move."""
    new_tri, tr = apply_event_tracked(tri, ev, skel)
    face = _surviving_member(tr, skel.triangle_members[k])
    relocated = face is None
    if relocated:
        face = _relocation_face(tr)
    return new_tri, tr, face, relocated


def _mark_after(new_tri: Triangulation, tr, face) -> int:
    t, f, _ = tr.face(*face)
    return Skeleton(new_tri).triangle_of[t][f]


def transport_pillow_mark(mt: MarkedTriangulation, ev: MoveEvent) -> MarkedTriangulation:
    if mt.pillow is None:
        raise PreconditionViolated("no pillow mark to transport")
    skel = Skeleton(mt.tri)
    if not 0 <= mt.pillow.triangle < skel.num_triangles:
        raise PreconditionViolated("pillow mark does not name a triangle")
    new_tri, tr, face, _ = _pillow_step(mt.tri, skel, mt.pillow.triangle, ev)
    return MarkedTriangulation(new_tri, PillowMark(_mark_after(new_tri, tr, face)), None)


def _material_counts(trace):
    return [classify_vertices(t)[1] for t in trace]


def floor_report(tri: Triangulation, script: MoveScript):
    """Material vertex count of every triangulation met while replaying ``script``."""
    trace = []
    cur = tri
    trace.append(cur)
    for ev in script.events:
        cur = apply_event_tracked(cur, ev)[0]
        trace.append(cur)
    return _material_counts(trace)


class _Rewrite:
    """The triangulation being built, with the events that produced it."""

    def __init__(self, tri: Triangulation):
        self.tri = tri
        self.events = []

    def run(self, ev: MoveEvent):
        self.tri = apply_event_tracked(self.tri, ev)[0]
        self.events.append(ev)

    def extend(self, result):
        self.events.extend(result.script.events)
        self.tri = result.output

    def match(self, model: Triangulation):
        """An isomorphism from ``model`` onto the current triangulation."""
        if model == self.tri:
            return list(range(model.tet_count)), [IDENTITY] * model.tet_count
        iso = find_isomorphism(model, self.tri)
        if iso is None:
            raise InvariantBroken("rewritten triangulation drifted from its model")
        return iso


def _translate(ev: MoveEvent, source: Triangulation, iso, target: Triangulation) -> MoveEvent:
    """Re-address ``ev`` (given on ``source``) for ``target``.

    ``iso`` carries the tetrahedra of ``source`` into ``target``; it may come
    from a model that extends ``source`` by a pillow.
    """
    ms, ts = Skeleton(source), Skeleton(target)
    tmap, perms = iso
    if ev.kind == "14":
        return MoveEvent("14", tmap[ev.target])
    if ev.kind == "23":
        t, f = ms.triangle_members[ev.target][ev.side % len(ms.triangle_members[ev.target])]
        t2, f2 = tmap[t], perms[t][f]
        k = ts.triangle_of[t2][f2]
        return MoveEvent("23", k, side=ts.triangle_members[k].index((t2, f2)))
    if ev.kind == "32":
        t, e = ms.edge_members[ev.target][0]
        a, b = EDGE_VERTICES[e]
        t2 = tmap[t]
        return MoveEvent("32", ts.edge_of[t2][edge_index(perms[t][a], perms[t][b])])
    if ev.kind == "41":
        t, c = ms.vertex_members[ev.target][0]
        return MoveEvent("41", ts.vertex_of[tmap[t]][perms[t][c]])
    raise PreconditionViolated(f"cannot rewrite a {ev.kind} event")


def _pillow_vertex(model: Triangulation, iso, target: Triangulation, tet: int) -> int:
    tmap, perms = iso
    return Skeleton(target).vertex_of[tmap[tet]][perms[tet][3]]


def _triangle_in(target: Triangulation, iso, face) -> int:
    tmap, perms = iso
    t, f = face
    return Skeleton(target).triangle_of[tmap[t]][perms[t][f]]


def pillow_rewrite(tri: Triangulation, script: MoveScript, k: int) -> MoveScript:
    """Rewrite ``script`` so that no triangulation has fewer than ``k`` material vertices.

    Every stretch that drops to ``k - 1`` (a 4-1 move, 2-3 and 3-2 moves, then
    a 1-4 move) is replaced as follows: a triangular pillow is inserted at a
    marked triangle before the 4-1 move, each move is replayed beside the
    pillow, the pillow hops to a surviving triangle (new pillow first, then
    the old one removed) whenever a move would delete its triangle, and the
    pillow is removed after the 1-4 move.
    """
    trace = [tri]
    cur = tri
    for i, ev in enumerate(script.events):
        if ev.kind not in BISTELLAR:
            raise PreconditionViolated(f"event {i} ({ev}) is not a bistellar move")
        try:
            cur = apply_event_tracked(cur, ev)[0]
        except IllegalMove as exc:
            raise IllegalMove(str(exc), event_index=i) from None
        trace.append(cur)
    counts = _material_counts(trace)
    comments = list(script.comments) + [f"pillow rewrite, floor {k}"]
    if min(counts) >= k:
        return MoveScript(script.base_signature, list(script.events), comments)
    if counts[0] < k or counts[-1] < k:
        raise PreconditionViolated("both ends of the sequence need at least k material vertices")
    if min(counts) < k - 1:
        raise PreconditionViolated("the sequence drops more than one below the floor; split it into innermost dips")
    if not tri.is_connected():
        raise PreconditionViolated("pillow rewrite needs a connected triangulation")

    out = _Rewrite(tri)
    mark = None  # pillow triangle class in trace[i] while inside a dip
    for i, ev in enumerate(script.events):
        before, after = trace[i], trace[i + 1]
        inside = counts[i + 1] < k or counts[i] < k
        if not inside:
            out.run(_translate(ev, before, out.match(before), out.tri))
            continue
        skel = Skeleton(before)
        if mark is None:
            # entering a dip: mark a triangle that the first move keeps
            _, tr = apply_event_tracked(before, ev, skel)
            mark = next(
                (c for c in range(skel.num_triangles) if _surviving_member(tr, skel.triangle_members[c])),
                None,
            )
            if mark is None:
                t0, f0 = _relocation_face(tr)
                mark = skel.triangle_of[t0][f0]
            face = skel.triangle_members[mark][0]
            out.extend(triangular_02(out.tri, _triangle_in(out.tri, out.match(before), face)))
        _, tr, face, relocated = _pillow_step(before, skel, mark, ev)
        if relocated:
            old_face = skel.triangle_members[mark][0]
            model = insert_pillow_direct(before, *old_face)
            out.extend(triangular_02(out.tri, _triangle_in(out.tri, out.match(model), face)))
            both = insert_pillow_direct(insert_pillow_direct(before, *face), *old_face)
            iso = out.match(both)
            out.extend(triangular_20(out.tri, _pillow_vertex(both, iso, out.tri, before.tet_count + 2)))
        model = insert_pillow_direct(before, *face)
        out.run(_translate(ev, before, out.match(model), out.tri))
        mark = _mark_after(after, tr, face)
        if counts[i + 1] >= k:
            # leaving the dip: take the pillow out again
            model = insert_pillow_direct(after, *Skeleton(after).triangle_members[mark][0])
            iso = out.match(model)
            out.extend(triangular_20(out.tri, _pillow_vertex(model, iso, out.tri, after.tet_count)))
            mark = None
    return MoveScript(script.base_signature, out.events, comments)


# -- arch marks -----------------------------------------------------------------------

def _check_arch_mark(skel: Skeleton, mark: ArchMark):
    if not 0 <= mark.triangle < skel.num_triangles:
        raise PreconditionViolated("arch mark does not name a triangle")
    a, b = mark.pair
    if a == b:
        raise PreconditionViolated("arch mark joins a vertex to itself")
    if not (0 <= a < skel.num_vertices and 0 <= b < skel.num_vertices):
        raise PreconditionViolated("arch mark vertex out of range")
    if not (_material(skel, a) or _material(skel, b)):
        raise PreconditionViolated("arch mark needs a material vertex")
    t, f = skel.triangle_members[mark.triangle][0]
    la, lb = _arch_labels(skel, t, f, a, b)
    if la is None or lb is None:
        raise PreconditionViolated("arch mark vertices are not corners of its triangle")
    return t, f, la, lb


def arch_relocation(tri: Triangulation, skel: Skeleton, mark: ArchMark, ev: MoveEvent):
    """Where a 2-3 or 3-2 move that deletes the marked triangle sends the mark.

    Returns ``(rule, (t, f), (ca, cb))`` in the coordinates of ``tri``: the new
    face and the two corners of it to be joined, or ``None`` if the mark survives.
    ``rule`` is ``"23"``, ``"32-pole"`` (the mark joins a pole to the equator)
    or ``"32-poles-upper"`` / ``"32-poles-lower"`` (it joins the two poles; the
    new mark joins an equatorial vertex to N, or to S when that vertex is N).
    """
    t, f, la, lb = _check_arch_mark(skel, mark)
    members = skel.triangle_members[mark.triangle]
    if ev.kind == "23":
        if ev.target != mark.triangle:
            return None
        t0, f0 = members[ev.side % len(members)]
        if (t0, f0) != (t, f):
            # read the corners from the side the move is applied on
            p = tri.gluing(t, f)[2]
            la, lb = p[la], p[lb]
        z = ({0, 1, 2, 3} - {f0, la, lb}).pop()
        t1, _, p = tri.gluing(t0, f0)
        options = [((t0, z), (la, lb)), ((t1, p[z]), (p[la], p[lb]))]
        face, corners = min(options)
        return "23", face, corners
    if ev.kind == "32":
        et, ek = skel.edge_members[ev.target][0]
        a, b = EDGE_VERTICES[ek]
        emb = edge_embeddings(tri, et, a, b)
        hit = None
        for side in members:
            for tt, aa, bb, cc, dd in emb:
                if tt == side[0] and side[1] in (cc, dd):
                    hit = (side, (tt, aa, bb, cc, dd))
                    break
            if hit:
                break
        if hit is None:
            return None
        (st, sf), (tt, north, south, cc, dd) = hit
        if (st, sf) != (t, f):
            p = tri.gluing(t, f)[2]
            la, lb = p[la], p[lb]
        poles = {north, south}
        vo = skel.vertex_of
        if {la, lb} != poles:
            pole = la if la in poles else lb
            other_pole = south if pole == north else north
            q = tri.gluing(tt, sf)[2]
            nbr = tri.gluing(tt, sf)[0]
            options = [
                ((tt, other_pole), (la, lb)),
                ((nbr, q[other_pole]), (q[la], q[lb])),
            ]
            face, corners = min(options)
            return "32-pole", face, corners
        # the mark joins the two poles: call the material one N
        n_pole = la if _material(skel, vo[tt][la]) else lb
        s_pole = south if n_pole == north else north
        # faces on the N side are opposite S; take the least one and its lowest equatorial corner
        n_faces = []
        for ut, ua, ub, uc, ud in emb:
            un = ua if n_pole == north else ub
            us = ub if n_pole == north else ua
            n_faces.append(((ut, us), un, us, min(uc, ud)))
        (face, un, us, eq) = min(n_faces)
        ut = face[0]
        if vo[ut][eq] != vo[ut][un]:
            return "32-poles-upper", face, (eq, un)
        # the equatorial corner is N itself, so join it to S instead
        return "32-poles-lower", (ut, un), (eq, us)
    raise PreconditionViolated("arch marks move only through 2-3 and 3-2 moves")


def transport_arch_mark(mt: MarkedTriangulation, ev: MoveEvent) -> MarkedTriangulation:
    if mt.arch is None:
        raise PreconditionViolated("no arch mark to transport")
    if ev.kind not in ("23", "32"):
        raise PreconditionViolated("arch marks move only through 2-3 and 3-2 moves")
    tri = mt.tri
    skel = Skeleton(tri)
    mark = mt.arch
    t, f, la, lb = _check_arch_mark(skel, mark)
    new_tri, tr = apply_event_tracked(tri, ev, skel)
    nskel = Skeleton(new_tri)
    found = arch_relocation(tri, skel, mark, ev)
    if found is None:
        face = _surviving_member(tr, skel.triangle_members[mark.triangle])
        corners = (la, lb)
        if face != (t, f):
            p = tri.gluing(t, f)[2]
            corners = (p[la], p[lb])
    else:
        _, face, corners = found
    nt, nf, perm = tr.face(*face)
    va, vb = nskel.vertex_of[nt][perm[corners[0]]], nskel.vertex_of[nt][perm[corners[1]]]
    new_mark = ArchMark(nskel.triangle_of[nt][nf], (va, vb))
    # the old and new marks must share a material vertex; vertex classes are
    # matched through corners because the move renumbers them
    old = {_vertex_after(tr, nskel, t, la), _vertex_after(tr, nskel, t, lb)}
    shared = old & {va, vb}
    if va == vb or not any(_material(nskel, v) for v in shared):
        raise InvariantBroken("relocated arch mark shares no material vertex with the old one")
    return MarkedTriangulation(new_tri, mt.pillow, new_mark)


def _vertex_after(tr, nskel: Skeleton, t: int, v: int) -> int:
    img = tr.corner(t, v)
    if img is None:
        raise InvariantBroken("vertex disappeared under a 2-3 or 3-2 move")
    return nskel.vertex_of[img[0]][img[1]]


# -- waypoints ----------------------------------------------------------------------

def ball_self_gluings(tri: Triangulation, v: int, skel: Skeleton | None = None):
    """Triangles that meet vertex class ``v`` at two or more corners.

    This is a conservative test for self-gluings of the ball dual to ``v``:
    it returns ``[(triangle, corners), ...]`` and an empty list means none.
    """
    skel = skel or Skeleton(tri)
    out = []
    for k, members in enumerate(skel.triangle_members):
        t, f = members[0]
        corners = tuple(c for c in range(4) if c != f and skel.vertex_of[t][c] == v)
        if len(corners) >= 2:
            out.append((k, corners))
    return out


def waypoint_connect(tri: Triangulation, m: ArchMark, m2: ArchMark, tet_cap: int | None = None, workers: int = 1) -> MoveScript:
    """2-3/3-2 script from ``tri`` with an arch at ``m`` to ``tri`` with an arch at ``m2``.

    The script is found by a bidirectional search over the flip graph, capped
    at ``tet_cap`` tetrahedra (default: four more than a waypoint).
    """
    from .explorer import find_path

    skel = Skeleton(tri)
    _check_arch_mark(skel, m)
    _check_arch_mark(skel, m2)
    shared = [v for v in m.pair if v in m2.pair and _material(skel, v)]
    if not shared:
        raise PreconditionViolated("the two arch marks share no material vertex")
    src = insert_arch(tri, m.triangle, m.pair, skel)
    if m == m2:
        return MoveScript(canonical_signature(src), [], ["waypoint connect"])
    witness = ball_self_gluings(tri, shared[0], skel)
    if witness:
        raise SelfGluedBall(f"the ball around vertex {shared[0]} is glued to itself along triangle {witness[0][0]}", witness[0])
    dst = insert_arch(tri, m2.triangle, m2.pair, skel)
    cap = tet_cap if tet_cap is not None else src.tet_count + 4
    script = find_path(src, dst, moves=("23", "32"), tet_cap=cap, workers=workers)
    script.comments.append("waypoint connect")
    return script


# -- BBB triangles ------------------------------------------------------------------

def bbb_triangles(tri: Triangulation, v: int, skel: Skeleton | None = None):
    """Triangle classes with all three corners in vertex class ``v``."""
    skel = skel or Skeleton(tri)
    out = []
    for k, members in enumerate(skel.triangle_members):
        t, f = members[0]
        if all(skel.vertex_of[t][c] == v for c in range(4) if c != f):
            out.append(k)
    return out


def remove_BBB_triangles(tri: Triangulation, v: int) -> MoveScript:
    """2-3 moves that clear every triangle whose corners all lie in class ``v``.

    Each move is made on such a triangle from a tetrahedron whose fourth
    corner is not in ``v``, so the three new triangles all avoid being BBB.
    """
    skel = Skeleton(tri)
    if not tri.is_closed():
        raise PreconditionViolated("remove_BBB_triangles needs a closed triangulation")
    if not 0 <= v < skel.num_vertices:
        raise PreconditionViolated(f"vertex class {v} out of range")
    anchor = skel.vertex_members[v][0]
    base = canonical_signature(tri)
    events = []
    cur = tri
    count = len(bbb_triangles(cur, v, skel))
    while count:
        chosen = None
        for t in range(cur.tet_count):
            outside = [c for c in range(4) if skel.vertex_of[t][c] != v]
            if len(outside) != 1:
                continue
            f = outside[0]
            if cur.gluing(t, f)[0] == t:
                continue
            chosen = (t, f)
            break
        if chosen is None:
            raise InvariantBroken("BBB triangles remain but no tetrahedron can flip one")
        k = skel.triangle_of[chosen[0]][chosen[1]]
        ev = MoveEvent("23", k, side=skel.triangle_members[k].index(chosen))
        cur, tr = apply_event_tracked(cur, ev, skel)
        events.append(ev)
        anchor = tr.corner(*anchor)
        skel = Skeleton(cur)
        v = skel.vertex_of[anchor[0]][anchor[1]]
        new_count = len(bbb_triangles(cur, v, skel))
        if new_count >= count:
            raise InvariantBroken("a 2-3 move failed to reduce the BBB count")
        count = new_count
    return MoveScript(base, events, [f"remove BBB triangles at vertex {skel.vertex_of[anchor[0]][anchor[1]]}"])
