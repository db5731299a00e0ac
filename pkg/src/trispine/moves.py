"""Bistellar moves, the arch gadget, and replayable move scripts.

Every move removes a few tetrahedra and appends new ones at the end of the
list; the surviving tetrahedra keep their relative order and their vertex
labels.  The low level ``move_*`` functions take an explicit location and
return the new triangulation together with a :class:`Tracker` that says
where the surviving faces and corners went.  The public ``apply_*``
functions take skeleton class numbers, which is what scripts record.

Script text, one event per line after a ``base <hex>`` header::

    23 t<k>        2-3 move on triangle class k
    32 e<k>        3-2 move on edge class k
    14 T<k>        1-4 move on tetrahedron k
    41 v<k>        4-1 move on vertex class k
    arch t<k> v<a> v<b>
    unarch T<k>    remove the arch gadget sitting in tetrahedron k
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import IllegalMove, ParseError, SignatureMismatch
from .perm import EDGE_VERTICES, IDENTITY, Perm4
from .signature import canonical_signature
from .skeleton import Skeleton
from .triangulation import Triangulation

__all__ = [
    "Tracker",
    "MoveEvent",
    "MoveScript",
    "DELTAS",
    "ARCH_GADGET",
    "move_23",
    "move_32",
    "move_14",
    "move_41",
    "move_arch",
    "move_unarch",
    "legal_23",
    "legal_32",
    "legal_41",
    "apply_23",
    "apply_32",
    "apply_14",
    "apply_41",
    "insert_arch",
    "remove_arch",
    "apply_event",
    "apply_event_tracked",
    "replay",
    "edge_embeddings",
    "arch_gadget_at",
]

# (dV, dE, dF, dT) for each move.
DELTAS = {
    "23": (0, 1, 2, 1),
    "32": (0, -1, -2, -1),
    "14": (1, 4, 6, 3),
    "41": (-1, -4, -6, -3),
}

SWAP23 = Perm4((0, 1, 3, 2))


@dataclass
class Tracker:
    """Where the cells of the old triangulation ended up after a move.

    ``tet_map[t]`` is the new index of a surviving tetrahedron, or ``None``.
    ``face_map[(t, f)]`` covers faces of removed tetrahedra that survive as
    faces of new ones: it gives ``(new_t, new_f, perm)`` with ``perm``
    sending old labels to new labels.  ``corner_origin[(new_t, v)]`` names
    the old corner behind each corner of a new tetrahedron; corners missing
    from it belong to a newly created vertex.  ``info`` holds move specific
    landmarks in new coordinates.
    """

    tet_map: list
    new_tets: list
    face_map: dict = field(default_factory=dict)
    corner_origin: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    def face(self, t: int, f: int):
        """Image ``(t', f', perm)`` of old face ``(t, f)``, or ``None`` if it was removed."""
        nt = self.tet_map[t]
        if nt is not None:
            return nt, f, IDENTITY
        return self.face_map.get((t, f))

    def corner(self, t: int, v: int):
        """Image ``(t', v')`` of an old corner, found through any surviving face."""
        nt = self.tet_map[t]
        if nt is not None:
            return nt, v
        for f in range(4):
            if f == v:
                continue
            img = self.face_map.get((t, f))
            if img is not None:
                return img[0], img[2][v]
        return None

    def edge(self, t: int, a: int, b: int):
        """Image ``(t', a', b')`` of the old edge ``a``-``b`` of ``t``, or ``None``."""
        nt = self.tet_map[t]
        if nt is not None:
            return nt, a, b
        for f in range(4):
            if f == a or f == b:
                continue
            img = self.face_map.get((t, f))
            if img is not None:
                return img[0], img[2][a], img[2][b]
        return None


def _rebuild(tri: Triangulation, doomed, count: int, internal, external):
    """Replace the tetrahedra in ``doomed`` by ``count`` new ones.

    ``internal`` lists ``(i, fi, j, fj, perm)`` gluings among new tetrahedra
    (local indices, ``perm`` from ``i`` labels to ``j`` labels).
    ``external[(i, g)] = (t, f, m)`` says face ``g`` of new tetrahedron ``i``
    takes the place of old face ``(t, f)``, with ``m`` sending new labels to
    old labels.
    """
    glue = tri.table
    doomed_set = set(doomed)
    tet_map = [None] * tri.tet_count
    survivors = [t for t in range(tri.tet_count) if t not in doomed_set]
    for i, t in enumerate(survivors):
        tet_map[t] = i
    base = len(survivors)
    ext_inv = {}
    for (i, g), (t, f, m) in external.items():
        ext_inv[t, f] = (base + i, g, m)
    rows = []
    for t in survivors:
        row = []
        for f in range(4):
            gl = glue[t][f]
            if gl is None:
                row.append(None)
                continue
            u, h, p = gl
            if tet_map[u] is not None:
                row.append((tet_map[u], h, p))
            else:
                ni, ng, m = ext_inv[u, h]
                row.append((ni, ng, m.inverse() * p))
        rows.append(row)
    new_rows = [[None] * 4 for _ in range(count)]
    for i, fi, j, fj, perm in internal:
        new_rows[i][fi] = (base + j, fj, perm)
        new_rows[j][fj] = (base + i, fi, perm.inverse())
    for (i, g), (t, f, m) in external.items():
        gl = glue[t][f]
        if gl is None:
            continue
        u, h, q = gl
        if tet_map[u] is not None:
            new_rows[i][g] = (tet_map[u], h, q * m)
        else:
            nj, ng, m2 = ext_inv[u, h]
            new_rows[i][g] = (nj, ng, m2.inverse() * q * m)
    for i, row in enumerate(new_rows):
        if any(x is None and (i, g) not in external for g, x in enumerate(row)):
            raise AssertionError("rebuild left an internal face unglued")
    rows.extend(new_rows)
    new_tri = Triangulation(rows, check=False)
    face_map = {}
    corner_origin = {}
    for (i, g), (t, f, m) in external.items():
        face_map[t, f] = (base + i, g, m.inverse())
        for x in range(4):
            if x != g:
                corner_origin[base + i, x] = (t, m[x])
    tracker = Tracker(
        tet_map=tet_map,
        new_tets=list(range(base, base + count)),
        face_map=face_map,
        corner_origin=corner_origin,
    )
    return new_tri, tracker


# -- 2-3 and 3-2 ---------------------------------------------------------------

def _check_23(tri: Triangulation, t0: int, f0: int):
    g = tri.gluing(t0, f0)
    if g is None:
        raise IllegalMove(f"2-3: face ({t0},{f0}) is a boundary triangle")
    if g[0] == t0:
        raise IllegalMove("2-3: both sides of the triangle lie in one tetrahedron")
    return g


def move_23(tri: Triangulation, t0: int, f0: int):
    """2-3 move on the triangle seen as face ``f0`` of tetrahedron ``t0``.

    New tetrahedron ``i`` (i = 0, 1, 2) has label 0 at the apex of ``t0``,
    label 1 at the apex across the triangle and labels 2, 3 at the equator
    corners ``u[i+1], u[i+2]`` where ``u`` lists the corners of face ``f0``.
    """
    t1, f1, p = _check_23(tri, t0, f0)
    u = [v for v in range(4) if v != f0]
    internal = []
    external = {}
    for i in range(3):
        ui, uj, uk = u[i], u[(i + 1) % 3], u[(i + 2) % 3]
        external[i, 1] = (t0, ui, Perm4.from_pairs([(0, f0), (1, ui), (2, uj), (3, uk)]))
        external[i, 0] = (t1, p[ui], Perm4.from_pairs([(0, p[ui]), (1, f1), (2, p[uj]), (3, p[uk])]))
        internal.append((i, 2, (i + 1) % 3, 3, SWAP23))
    new_tri, tr = _rebuild(tri, [t0, t1], 3, internal, external)
    base = tr.new_tets[0]
    tr.info["new_edge"] = (base, 0, 1)
    # internal triangle through the equator corner u[i] of the old face
    tr.info["internal_faces"] = {(t0, u[i]): (base + (i + 1) % 3, 2) for i in range(3)}
    tr.info["internal_faces"].update({(t1, p[u[i]]): (base + (i + 1) % 3, 2) for i in range(3)})
    tr.info["apex"] = {t0: (base, 0), t1: (base, 1)}
    return new_tri, tr


def edge_embeddings(tri: Triangulation, t: int, a: int, b: int):
    """Walk around the edge ``a``-``b`` of ``t``.

    Returns the list of ``(tet, a, b, c, d)`` tuples met on the way, where the
    walk leaves each tetrahedron through the face opposite ``c``; the walk
    stops when it returns to its start or reaches a boundary face.
    """
    c, d = [x for x in range(4) if x != a and x != b]
    start = (t, a, b, c, d)
    out = [start]
    cur = start
    while True:
        tt, aa, bb, cc, dd = cur
        g = tri.gluing(tt, cc)
        if g is None:
            return out
        u, _, q = g
        cur = (u, q[aa], q[bb], q[dd], q[cc])
        if cur == start:
            return out
        out.append(cur)
        if len(out) > 6 * tri.tet_count + 6:
            raise AssertionError("edge walk did not close")


def _embeddings_32(tri: Triangulation, t: int, e: int):
    a, b = EDGE_VERTICES[e]
    emb = edge_embeddings(tri, t, a, b)
    tets = [x[0] for x in emb]
    # the walk must close up; an unglued face along the way means a boundary edge
    last = emb[-1]
    g = tri.gluing(last[0], last[3])
    if g is None:
        raise IllegalMove("3-2: edge lies on the boundary")
    if len(emb) != 3:
        raise IllegalMove(f"3-2: edge has degree {len(emb)}, not 3")
    if len(set(tets)) != 3:
        raise IllegalMove("3-2: the three tetrahedra around the edge are not distinct")
    return emb


def move_32(tri: Triangulation, t: int, e: int):
    """3-2 move on edge ``e`` of tetrahedron ``t``.

    New tetrahedron 0 holds the endpoint ``a`` of the edge at label 0, new
    tetrahedron 1 holds ``b``; labels 1, 2, 3 of both are the equator
    corners in walk order.
    """
    emb = _embeddings_32(tri, t, e)
    external = {}
    for k, (tk, ak, bk, ck, dk) in enumerate(emb):
        lc, ld, lf = 1 + k, 1 + (k + 1) % 3, 1 + (k + 2) % 3
        external[0, lf] = (tk, bk, Perm4.from_pairs([(0, ak), (lc, ck), (ld, dk), (lf, bk)]))
        external[1, lf] = (tk, ak, Perm4.from_pairs([(0, bk), (lc, ck), (ld, dk), (lf, ak)]))
    internal = [(0, 0, 1, 0, IDENTITY)]
    new_tri, tr = _rebuild(tri, [x[0] for x in emb], 2, internal, external)
    base = tr.new_tets[0]
    tr.info["internal_face"] = (base, 0)
    tr.info["embeddings"] = emb
    return new_tri, tr


# -- 1-4 and 4-1 ------------------------------------------------------------

def move_14(tri: Triangulation, t: int):
    """1-4 move: new tetrahedron ``i`` is the cone on face ``i`` of ``t``,
    with the new vertex at label ``i``."""
    if not 0 <= t < tri.tet_count:
        raise IllegalMove(f"1-4: tetrahedron {t} out of range")
    external = {(i, i): (t, i, IDENTITY) for i in range(4)}
    internal = [(i, j, j, i, Perm4.transposition(i, j)) for i in range(4) for j in range(i + 1, 4)]
    new_tri, tr = _rebuild(tri, [t], 4, internal, external)
    tr.info["new_vertex"] = (tr.new_tets[0], 0)
    return new_tri, tr


def _cone_41(tri: Triangulation, t0: int, c0: int, degree: int):
    """Check the cone pattern around corner ``(t0, c0)``; return the cone maps."""
    if degree != 4:
        raise IllegalMove(f"4-1: vertex has degree {degree}, not 4")
    cones = {c0: (t0, IDENTITY)}
    for j in range(4):
        if j == c0:
            continue
        g = tri.gluing(t0, j)
        if g is None:
            raise IllegalMove("4-1: vertex lies on the boundary")
        u, _, q = g
        cones[j] = (u, q * Perm4.transposition(j, c0))
    tets = [cones[i][0] for i in range(4)]
    if len(set(tets)) != 4:
        raise IllegalMove("4-1: the four tetrahedra around the vertex are not distinct")
    for i in range(4):
        for j in range(i + 1, 4):
            ti, mi = cones[i]
            tj, mj = cones[j]
            want = (tj, mj[i], mj * Perm4.transposition(i, j) * mi.inverse())
            if tri.gluing(ti, mi[j]) != want:
                raise IllegalMove("4-1: tetrahedra are not arranged as a cone on one tetrahedron")
    return cones


def move_41(tri: Triangulation, t0: int, c0: int, degree: int | None = None):
    """4-1 move on the vertex at corner ``c0`` of ``t0``.

    The new tetrahedron uses the labels of ``t0``; its label ``c0`` is the
    outer vertex that ``t0`` does not contain.
    """
    if degree is None:
        degree = Skeleton(tri).vertex_degree(Skeleton(tri).vertex_of[t0][c0])
    cones = _cone_41(tri, t0, c0, degree)
    external = {(0, i): (cones[i][0], cones[i][1][i], cones[i][1]) for i in range(4)}
    new_tri, tr = _rebuild(tri, [cones[i][0] for i in range(4)], 1, [], external)
    return new_tri, tr


# -- the arch gadget ---------------------------------------------------------------

# One tetrahedron with face 2 glued to face 3 by swapping labels 2 and 3.
# Face 0 (labels 1,2,3) is glued to one side of the split triangle and face 1
# (labels 0,2,3) to the other, with label 1 resp. 0 at the third corner c and
# labels 2, 3 at the two corners a, b that get identified.  The self-gluing
# identifies labels 2 and 3, which merges a with b.  Edge 0-1 becomes an edge of
# degree one.
ARCH_GADGET = {
    "interior_faces": (2, 3),
    "interior_perm": SWAP23,
    "exterior": {0: {"c": 1, "a": 2, "b": 3}, 1: {"c": 0, "a": 2, "b": 3}},
}


def move_arch(tri: Triangulation, t0: int, f0: int, la: int, lb: int):
    """Split face ``f0`` of ``t0`` and splice in the arch gadget.

    ``la`` and ``lb`` are the labels (in ``t0``) of the two corners to merge.
    """
    g = tri.gluing(t0, f0)
    if g is None:
        raise IllegalMove("arch: boundary triangle")
    if la == lb or f0 in (la, lb):
        raise IllegalMove("arch: bad corner labels")
    t1, f1, p = g
    lc = ({0, 1, 2, 3} - {f0, la, lb}).pop()
    n = tri.tet_count
    ext0, ext1 = ARCH_GADGET["exterior"][0], ARCH_GADGET["exterior"][1]
    pi0 = Perm4.from_pairs([(f0, 0), (lc, ext0["c"]), (la, ext0["a"]), (lb, ext0["b"])])
    pi1 = Perm4.from_pairs([(f1, 1), (p[lc], ext1["c"]), (p[la], ext1["a"]), (p[lb], ext1["b"])])
    rows = [list(r) for r in tri.table]
    rows[t0][f0] = (n, 0, pi0)
    rows[t1][f1] = (n, 1, pi1)
    i2, i3 = ARCH_GADGET["interior_faces"]
    sp = ARCH_GADGET["interior_perm"]
    rows.append([(t0, f0, pi0.inverse()), (t1, f1, pi1.inverse()), (n, i3, sp), (n, i2, sp.inverse())])
    new_tri = Triangulation(rows, check=False)
    tr = Tracker(tet_map=list(range(n)), new_tets=[n])
    tr.info["gadget"] = n
    return new_tri, tr


def arch_gadget_at(tri: Triangulation, g: int):
    """Recognise an arch gadget in tetrahedron ``g``.

    Returns ``(k, l)``, the exterior faces, or ``None``.  A gadget is a
    tetrahedron with two faces ``i, j`` glued to each other by the
    transposition of ``i`` and ``j`` while its other two faces are glued to
    other tetrahedra.
    """
    for i in range(4):
        for j in range(i + 1, 4):
            gl = tri.gluing(g, i)
            if gl is None or gl[0] != g or gl[1] != j or gl[2] != Perm4.transposition(i, j):
                continue
            k, l = [x for x in range(4) if x not in (i, j)]
            gk, gll = tri.gluing(g, k), tri.gluing(g, l)
            if gk is None or gll is None or gk[0] == g or gll[0] == g:
                continue
            return k, l
    return None


def move_unarch(tri: Triangulation, g: int):
    """Remove the arch gadget in tetrahedron ``g`` and glue its two neighbours back together."""
    if not 0 <= g < tri.tet_count:
        raise IllegalMove(f"unarch: tetrahedron {g} out of range")
    found = arch_gadget_at(tri, g)
    if found is None:
        raise IllegalMove(f"unarch: tetrahedron {g} is not an arch gadget")
    k, l = found
    x, fx, qx_inv = tri.gluing(g, k)
    y, fy, qy = tri.gluing(g, l)
    qx = qx_inv.inverse()
    perm = qy * Perm4.transposition(k, l) * qx
    tet_map = [i if i < g else (i - 1 if i > g else None) for i in range(tri.tet_count)]
    rows = []
    for t in range(tri.tet_count):
        if t == g:
            continue
        row = []
        for f in range(4):
            gl = tri.gluing(t, f)
            if (t, f) == (x, fx):
                row.append((tet_map[y], fy, perm))
            elif (t, f) == (y, fy):
                row.append((tet_map[x], fx, perm.inverse()))
            elif gl is None:
                row.append(None)
            else:
                row.append((tet_map[gl[0]], gl[1], gl[2]))
        rows.append(row)
    new_tri = Triangulation(rows, check=False)
    return new_tri, Tracker(tet_map=tet_map, new_tets=[])


# -- class based interface ---------------------------------------------------------

def _skel(tri, skel):
    return skel if skel is not None else Skeleton(tri)


def legal_23(tri: Triangulation, k: int, skel: Skeleton | None = None) -> bool:
    skel = _skel(tri, skel)
    if not 0 <= k < skel.num_triangles:
        return False
    members = skel.triangle_members[k]
    return len(members) == 2 and members[0][0] != members[1][0]


def legal_32(tri: Triangulation, e: int, skel: Skeleton | None = None) -> bool:
    skel = _skel(tri, skel)
    if not 0 <= e < skel.num_edges:
        return False
    members = skel.edge_members[e]
    if len(members) != 3 or len({t for t, _ in members}) != 3:
        return False
    t, k = members[0]
    try:
        _embeddings_32(tri, t, k)
    except IllegalMove:
        return False
    return True


def legal_41(tri: Triangulation, v: int, skel: Skeleton | None = None) -> bool:
    skel = _skel(tri, skel)
    if not 0 <= v < skel.num_vertices:
        return False
    t0, c0 = skel.vertex_members[v][0]
    try:
        _cone_41(tri, t0, c0, skel.vertex_degree(v))
    except IllegalMove:
        return False
    return True


def _triangle_rep(tri, k, skel, side=0):
    if not 0 <= k < skel.num_triangles:
        raise IllegalMove(f"triangle class {k} out of range")
    members = skel.triangle_members[k]
    return members[side % len(members)]


def apply_23(tri: Triangulation, k: int, skel: Skeleton | None = None) -> Triangulation:
    return apply_event(tri, MoveEvent("23", k), skel)


def apply_32(tri: Triangulation, e: int, skel: Skeleton | None = None) -> Triangulation:
    return apply_event(tri, MoveEvent("32", e), skel)


def apply_14(tri: Triangulation, t: int, skel: Skeleton | None = None) -> Triangulation:
    return apply_event(tri, MoveEvent("14", t), skel)


def apply_41(tri: Triangulation, v: int, skel: Skeleton | None = None) -> Triangulation:
    return apply_event(tri, MoveEvent("41", v), skel)


def insert_arch(tri: Triangulation, k: int, pair, skel: Skeleton | None = None) -> Triangulation:
    return apply_event(tri, MoveEvent("arch", k, tuple(pair)), skel)


def remove_arch(tri: Triangulation, g: int) -> Triangulation:
    return apply_event(tri, MoveEvent("unarch", g))


def _arch_labels(skel: Skeleton, t0: int, f0: int, a: int, b: int):
    la = lb = None
    for v in range(4):
        if v == f0:
            continue
        cls = skel.vertex_of[t0][v]
        if cls == a and la is None:
            la = v
        elif cls == b and lb is None:
            lb = v
    return la, lb


@dataclass(frozen=True)
class MoveEvent:
    """A located move.  ``target`` is a class or tetrahedron number."""

    kind: str
    target: int
    pair: tuple = ()
    side: int = 0

    def __str__(self) -> str:
        if self.kind == "23":
            return f"23 t{self.target}" + (f" s{self.side}" if self.side else "")
        if self.kind == "32":
            return f"32 e{self.target}"
        if self.kind == "14":
            return f"14 T{self.target}"
        if self.kind == "41":
            return f"41 v{self.target}"
        if self.kind == "arch":
            return f"arch t{self.target} v{self.pair[0]} v{self.pair[1]}"
        if self.kind == "unarch":
            return f"unarch T{self.target}"
        raise ValueError(self.kind)

    @classmethod
    def parse(cls, line: str) -> "MoveEvent":
        parts = line.split()
        try:
            kind = parts[0]
            if kind == "23" and len(parts) in (2, 3) and parts[1][0] == "t":
                side = int(parts[2][1:]) if len(parts) == 3 and parts[2][0] == "s" else 0
                if len(parts) == 3 and parts[2][0] != "s":
                    raise ValueError
                return cls("23", int(parts[1][1:]), side=side)
            if kind == "32" and len(parts) == 2 and parts[1][0] == "e":
                return cls("32", int(parts[1][1:]))
            if kind == "14" and len(parts) == 2 and parts[1][0] == "T":
                return cls("14", int(parts[1][1:]))
            if kind == "41" and len(parts) == 2 and parts[1][0] == "v":
                return cls("41", int(parts[1][1:]))
            if kind == "arch" and len(parts) == 4 and parts[1][0] == "t" and parts[2][0] == "v" and parts[3][0] == "v":
                return cls("arch", int(parts[1][1:]), (int(parts[2][1:]), int(parts[3][1:])))
            if kind == "unarch" and len(parts) == 2 and parts[1][0] == "T":
                return cls("unarch", int(parts[1][1:]))
        except (IndexError, ValueError):
            pass
        raise ParseError(f"malformed move event {line!r}")


def apply_event_tracked(tri: Triangulation, ev: MoveEvent, skel: Skeleton | None = None):
    """Apply one event; return ``(triangulation, tracker)``."""
    kind = ev.kind
    if kind == "14":
        return move_14(tri, ev.target)
    if kind == "unarch":
        return move_unarch(tri, ev.target)
    skel = _skel(tri, skel)
    if kind == "23":
        t0, f0 = _triangle_rep(tri, ev.target, skel, ev.side)
        return move_23(tri, t0, f0)
    if kind == "32":
        if not 0 <= ev.target < skel.num_edges:
            raise IllegalMove(f"edge class {ev.target} out of range")
        t, e = skel.edge_members[ev.target][0]
        return move_32(tri, t, e)
    if kind == "41":
        if not 0 <= ev.target < skel.num_vertices:
            raise IllegalMove(f"vertex class {ev.target} out of range")
        t0, c0 = skel.vertex_members[ev.target][0]
        return move_41(tri, t0, c0, skel.vertex_degree(ev.target))
    if kind == "arch":
        a, b = ev.pair
        if a == b:
            raise IllegalMove("arch: the two vertices are the same class")
        nv = skel.num_vertices
        if not (0 <= a < nv and 0 <= b < nv):
            raise IllegalMove("arch: vertex class out of range")
        links = skel.links
        if not links[a].is_sphere and not links[b].is_sphere:
            raise IllegalMove("arch: both vertices are ideal")
        t0, f0 = _triangle_rep(tri, ev.target, skel)
        la, lb = _arch_labels(skel, t0, f0, a, b)
        if la is None or lb is None:
            raise IllegalMove("arch: vertices are not both corners of the triangle")
        new_tri, tr = move_arch(tri, t0, f0, la, lb)
        if Skeleton(new_tri).reversed_edges:
            raise IllegalMove("arch: result would fold an edge onto itself")
        return new_tri, tr
    raise IllegalMove(f"unknown move kind {kind!r}")


def apply_event(tri: Triangulation, ev: MoveEvent, skel: Skeleton | None = None) -> Triangulation:
    return apply_event_tracked(tri, ev, skel)[0]


@dataclass
class MoveScript:
    base_signature: bytes
    events: list = field(default_factory=list)
    comments: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.events)

    def kinds(self):
        return [ev.kind for ev in self.events]

    def to_text(self) -> str:
        lines = [f"# {c}" for c in self.comments]
        lines.append(f"base {self.base_signature.hex()}")
        lines.extend(str(ev) for ev in self.events)
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "MoveScript":
        base = None
        events = []
        comments = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                comments.append(line[1:].strip())
                continue
            if base is None:
                parts = line.split()
                if len(parts) != 2 or parts[0] != "base":
                    raise ParseError(f"expected 'base <hex>' header, got {line!r}")
                try:
                    base = bytes.fromhex(parts[1])
                except ValueError:
                    raise ParseError("base signature is not hex") from None
                continue
            events.append(MoveEvent.parse(line))
        if base is None:
            raise ParseError("missing 'base' header")
        return cls(base, events, comments)


def replay(tri: Triangulation, script: MoveScript, check_base: bool = True, trace=None) -> Triangulation:
    """Apply the events of ``script`` in order.

    ``trace``, when given, is a list that receives every intermediate
    triangulation (starting with ``tri``).
    """
    if check_base and canonical_signature(tri) != script.base_signature:
        raise SignatureMismatch("triangulation does not match the script's base signature")
    cur = tri
    if trace is not None:
        trace.append(cur)
    for i, ev in enumerate(script.events):
        try:
            cur = apply_event(cur, ev)
        except IllegalMove as exc:
            raise IllegalMove(str(exc), event_index=i) from None
        if trace is not None:
            trace.append(cur)
    return cur
