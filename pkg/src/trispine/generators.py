"""Random triangulations for tests, demos and the explorer harness."""

from __future__ import annotations

import random

from .moves import MoveEvent, MoveScript, apply_event, apply_event_tracked, legal_23, legal_32, move_14
from .perm import ALL_PERMS, EDGE_VERTICES, Perm4
from .signature import canonical_signature
from .skeleton import Skeleton
from .triangulation import Triangulation

__all__ = [
    "random_gluing",
    "random_closed_valid",
    "random_perm",
    "random_dip_script",
    "random_arch_cases",
    "random_pattern",
]


def random_gluing(n: int, rng: random.Random) -> Triangulation:
    """Pair the ``4n`` faces of ``n`` tetrahedra uniformly at random."""
    faces = [(t, f) for t in range(n) for f in range(4)]
    rng.shuffle(faces)
    rows = [[None] * 4 for _ in range(n)]
    for i in range(0, len(faces), 2):
        (t, f), (u, g) = faces[i], faces[i + 1]
        choices = [p for p in ALL_PERMS if p[f] == g]
        p = rng.choice(choices)
        rows[t][f] = (u, g, p)
        rows[u][g] = (t, f, p.inverse())
    return Triangulation(rows)


def random_closed_valid(n: int, rng: random.Random, connected: bool = True, max_tries: int = 10000) -> Triangulation:
    """A random closed, valid triangulation with ``n`` tetrahedra."""
    for _ in range(max_tries):
        tri = random_gluing(n, rng)
        if connected and not tri.is_connected():
            continue
        if Skeleton(tri).reversed_edges:
            continue
        return tri
    raise RuntimeError(f"no valid {n}-tetrahedron gluing found in {max_tries} tries")


def random_perm(rng: random.Random) -> Perm4:
    return Perm4(rng.sample(range(4), 4))


def _alive(tracker, faces):
    out = []
    for members in faces:
        img = [tracker.face(t, f) for t, f in members]
        img = [x[:2] for x in img if x is not None]
        if img:
            out.append(img)
    return out


def random_dip_script(rng: random.Random, n: int = 2, inner: int = 6, adversarial: bool = False):
    """A base triangulation and a script whose material count dips by one.

    The base is a random closed ``n``-tetrahedron triangulation after a 1-4
    move.  The script removes that vertex with a 4-1 move, makes up to
    ``inner`` 2-3/3-2 moves, and ends with a 1-4 move on a random
    tetrahedron.  With ``adversarial`` the middle moves instead keep deleting
    triangles that were present after the 4-1 move until none is left (or no
    move can delete one).  Returns ``(base, script)``.
    """
    x = random_closed_valid(n, rng)
    base, tr = move_14(x, rng.randrange(n))
    skel = Skeleton(base)
    first = MoveEvent("41", skel.vertex_of[tr.new_tets[0]][0])
    cur = apply_event(base, first, skel)
    events = [first]
    if adversarial:
        skel = Skeleton(cur)
        originals = [list(m) for m in skel.triangle_members]
        for _ in range(4 * (n + 2)):
            if not originals:
                break
            ev = None
            for members in originals:
                t, f = members[0]
                k = skel.triangle_of[t][f]
                if legal_23(cur, k, skel):
                    ev = MoveEvent("23", k)
                    break
            if ev is None:
                for members in originals:
                    t, f = members[0]
                    for e in range(6):
                        a, b = EDGE_VERTICES[e]
                        if f in (a, b):
                            continue
                        cls = skel.edge_of[t][e]
                        if legal_32(cur, cls, skel):
                            ev = MoveEvent("32", cls)
                            break
                    if ev is not None:
                        break
            if ev is None:
                break
            cur, tr = apply_event_tracked(cur, ev, skel)
            events.append(ev)
            skel = Skeleton(cur)
            originals = _alive(tr, originals)
    else:
        for _ in range(inner):
            skel = Skeleton(cur)
            options = [MoveEvent("23", k) for k in range(skel.num_triangles) if legal_23(cur, k, skel)]
            if cur.tet_count > n + 2:
                options = []
            options += [MoveEvent("32", e) for e in range(skel.num_edges) if legal_32(cur, e, skel)]
            if not options:
                break
            ev = rng.choice(options)
            cur = apply_event(cur, ev, skel)
            events.append(ev)
    events.append(MoveEvent("14", rng.randrange(cur.tet_count)))
    return base, MoveScript(canonical_signature(base), events, ["dip"])


def random_arch_cases(rng: random.Random, count: int, max_moves: int = 3):
    """``count`` triples ``(tri, mark, event)`` where ``event`` is a legal 2-3
    or 3-2 move touching the marked triangle.

    Each triangulation is a random closed one with 2 or 3 tetrahedra after a
    1-4 move (so it has a material vertex) and up to ``max_moves`` random
    2-3/3-2 moves.  Every arch mark on a triangle of it is tried against the
    2-3 moves on that triangle and the 3-2 moves on its edges.
    """
    from .rewriter import ArchMark

    out = []
    while len(out) < count:
        x = random_closed_valid(rng.choice([2, 3]), rng)
        tri, _ = move_14(x, rng.randrange(x.tet_count))
        for _ in range(rng.randrange(max_moves + 1)):
            skel = Skeleton(tri)
            options = [MoveEvent("23", k) for k in range(skel.num_triangles) if legal_23(tri, k, skel)]
            options += [MoveEvent("32", e) for e in range(skel.num_edges) if legal_32(tri, e, skel)]
            tri = apply_event(tri, rng.choice(options), skel)
        skel = Skeleton(tri)
        for k in range(skel.num_triangles):
            t, f = skel.triangle_members[k][0]
            corners = sorted({skel.vertex_of[t][c] for c in range(4) if c != f})
            events = []
            if legal_23(tri, k, skel):
                events += [MoveEvent("23", k), MoveEvent("23", k, side=1)]
            for a, b in EDGE_VERTICES:
                e = skel.edge_of[t][EDGE_VERTICES.index((a, b))]
                if f not in (a, b) and legal_32(tri, e, skel) and MoveEvent("32", e) not in events:
                    events.append(MoveEvent("32", e))
            for a in corners:
                for b in corners:
                    if a == b or not (skel.links[a].is_sphere or skel.links[b].is_sphere):
                        continue
                    out.extend((tri, ArchMark(k, (a, b)), ev) for ev in events)
    return out[:count]


# -- annulus patterns -------------------------------------------------------------------

class _MapBuilder:
    """A growing rotation system; node 0 is S, node 1 is E."""

    def __init__(self):
        # a single edge from S to E
        self.tail = [0, 1]
        self.sigma = [0, 1]
        self.nodes = 2

    def phi(self, h):
        return self.sigma[h ^ 1]

    def orbit(self, h):
        out = [h]
        g = self.phi(h)
        while g != h:
            out.append(g)
            g = self.phi(g)
        return out

    def subdivide(self, h):
        """Put a new node in the middle of the edge of ``h``; faces keep their half-edges."""
        h1 = (h >> 1) * 2 + 1
        u = self.nodes
        self.nodes += 1
        g0, g1 = len(self.tail), len(self.tail) + 1
        b = self.tail[h1]
        self.tail += [u, b]
        self.sigma += [0, 0]
        pred = self.sigma.index(h1)
        nxt = self.sigma[h1]
        if pred == h1:
            self.sigma[g1] = g1
        else:
            self.sigma[pred] = g1
            self.sigma[g1] = nxt
        self.tail[h1] = u
        self.sigma[h1] = g0
        self.sigma[g0] = h1
        return u

    def anchor(self, face_h, x):
        """The half-edge at ``x`` after which a new edge enters the face of ``face_h``."""
        for g in self.orbit(face_h):
            if self.tail[g ^ 1] == x:
                return g ^ 1
        raise AssertionError("node not on the face")

    def join(self, face_h, x, y):
        ax, ay = self.anchor(face_h, x), self.anchor(face_h, y)
        z0, z1 = len(self.tail), len(self.tail) + 1
        self.tail += [x, y]
        self.sigma += [self.sigma[ax], self.sigma[ay]]
        self.sigma[ax] = z0
        self.sigma[ay] = z1


def random_pattern(rng: random.Random, nodes: int, start_legs: int = 1, end_legs: int = 1, relabel: bool = True):
    """A random trivalent annulus pattern with ``nodes`` pattern nodes.

    Starting from a single edge across the annulus, two edges on a common
    face are subdivided and the new nodes joined across that face, until
    enough nodes exist; extra edges to either boundary circle are then added
    the same way, each costing one node.  Edge numbers and directions are
    shuffled when ``relabel`` is set.
    """
    from .sweep import AnnulusPattern

    extra = (start_legs - 1) + (end_legs - 1)
    if nodes == 0 and extra == 0:
        return AnnulusPattern(0, [0, 1], [0, 1])
    joins, odd = divmod(nodes - extra, 2)
    if start_legs < 1 or end_legs < 1 or odd or joins < 1:
        raise ValueError("need at least one join: nodes - extra legs must be a positive even number")
    b = _MapBuilder()
    for _ in range(joins):
        h = rng.randrange(len(b.tail))
        u = b.subdivide(h)
        w = b.subdivide(rng.choice(b.orbit(h)))
        b.join(h, u, w)
    for cone, legs in ((0, start_legs), (1, end_legs)):
        for _ in range(legs - 1):
            s = rng.choice([h for h in range(len(b.tail)) if b.tail[h] == cone])
            targets = [g for g in b.orbit(s) if cone not in (b.tail[g], b.tail[g ^ 1])]
            u = b.subdivide(rng.choice(targets))
            b.join(s, cone, u)
    n = b.nodes - 2
    rename = {0: n, 1: n + 1}
    rename.update({x: x - 2 for x in range(2, b.nodes)})
    m = len(b.tail) // 2
    order = list(range(m))
    flips = [0] * m
    if relabel:
        rng.shuffle(order)
        flips = [rng.randrange(2) for _ in range(m)]
    new = [2 * order[h >> 1] + ((h & 1) ^ flips[h >> 1]) for h in range(2 * m)]
    tail = [0] * (2 * m)
    sigma = [0] * (2 * m)
    for h in range(2 * m):
        tail[new[h]] = rename[b.tail[h]]
        sigma[new[h]] = new[b.sigma[h]]
    return AnnulusPattern(n, tail, sigma)

