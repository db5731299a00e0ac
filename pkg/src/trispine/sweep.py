"""Sweeping a circle across an annulus that carries a trivalent pattern.

The annulus is capped off to a sphere: the disc inside the starting circle
becomes a node ``S`` and the disc inside the final circle a node ``E``.  The
edges at ``S`` are the pattern edges that meet the starting circle, and the
same holds for ``E``.  Edge ``k`` has half-edges ``2k`` (at its tail) and
``2k + 1`` (at its head); ``sigma`` sends a half-edge to the next one
counterclockwise around its tail, and faces are the orbits of
``h -> sigma[h ^ 1]``, each face lying to the right of its half-edges.

The moving circle ``C`` is stored as its crossings with the pattern.  A
crossing has a token, a half-edge ``h``: ``C`` passes from the face on the
left of ``h`` to the face on its right.  ``S`` always lies to the left of
``C``.  Each edge also keeps the order of its crossings, counted from the
tail of the edge.

Moves of ``C``:

* ``PushVertex`` sweeps ``C`` over a node, trading one crossing next to it
  for two (a 2-3 move of the spine).
* ``PullVertex`` is the reverse, trading two crossings for one (a 3-2 move).
* ``KillBump`` removes a bigon between ``C`` and an edge (a quadrilateral
  2-0 move); ``MakeBump`` creates one.
* ``InverseV`` is ``KillBump`` at a bigon that sits in a zigzag with a third
  crossing, which is exactly the shape left behind by a V-move.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import ClassVar

from .errors import DisconnectedGamma, IllegalSweepEvent, InvariantBroken, NoValidArc, PatternError, SelfGluedBall
from .perm import edge_index
from .skeleton import Skeleton
from .triangulation import Triangulation

__all__ = [
    "AnnulusPattern",
    "CurvePosition",
    "PushVertex",
    "PullVertex",
    "KillBump",
    "MakeBump",
    "InverseV",
    "EventScript",
    "Arc",
    "SweepReport",
    "parse_pattern",
    "format_pattern",
    "spanning_tree",
    "spanning_tree_push",
    "dual_tree_collapse",
    "choose_arc",
    "expand_kill_bump",
    "sweep_report",
    "sweep_membrane",
    "simulate",
    "final_position_ok",
    "extract_pattern",
]


def half_edge_name(h: int) -> str:
    return f"{h >> 1}'" if h & 1 else str(h >> 1)


def parse_half_edge(text: str) -> int:
    text = text.strip()
    head = text.endswith("'")
    body = text[:-1] if head else text
    if not body.isdigit():
        raise PatternError(f"bad half-edge {text!r}")
    return 2 * int(body) + head


def _face_orbits(sigma):
    face_of = [-1] * len(sigma)
    faces = []
    for h in range(len(sigma)):
        if face_of[h] >= 0:
            continue
        orbit = []
        g = h
        while face_of[g] < 0:
            face_of[g] = len(faces)
            orbit.append(g)
            g = sigma[g ^ 1]
        faces.append(tuple(orbit))
    return tuple(faces), tuple(face_of)


# -- the pattern ----------------------------------------------------------------------

class AnnulusPattern:
    """A trivalent graph on the annulus, as a rotation system on the capped sphere.

    Nodes ``0..n-1`` are the pattern's own (trivalent) nodes, ``n`` is ``S``
    and ``n + 1`` is ``E``.  ``identified`` lists pairs of half-edges on the
    boundary of a common face whose edges are glued to each other with
    opposite orientation.
    """

    def __init__(self, n: int, tail, sigma, e_start: int | None = None, identified=()):
        self.n = n
        self.tail = tuple(tail)
        self.sigma = tuple(sigma)
        self.identified = tuple(tuple(pair) for pair in identified)
        self.S, self.E = n, n + 1
        self._check_rotation()
        self.sigma_inv = [0] * len(self.sigma)
        for h, g in enumerate(self.sigma):
            self.sigma_inv[g] = h
        self.faces, self.face_of = self._faces()
        legs = [h for h in range(len(self.tail)) if self.tail[h] == self.S]
        if e_start is None:
            e_start = min(h >> 1 for h in legs)
        self.e_start = e_start
        self._check()
        s0 = next(h for h in legs if h >> 1 == e_start)
        self.start_legs = self.rotation(s0)
        self.end_legs = self.around(self.E)
        self.probe = self._probe()

    # -- basic structure ---------------------------------------------------------------
    @property
    def num_edges(self) -> int:
        return len(self.tail) // 2

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    def head(self, h: int) -> int:
        return self.tail[h ^ 1]

    def phi(self, h: int) -> int:
        """The half-edge after ``h`` on the boundary of the face to its right."""
        return self.sigma[h ^ 1]

    def phi_inv(self, h: int) -> int:
        return self.sigma_inv[h] ^ 1

    def right(self, h: int) -> int:
        return self.face_of[h]

    def left(self, h: int) -> int:
        return self.face_of[h ^ 1]

    def rotation(self, h: int):
        """Half-edges around ``tail(h)`` counterclockwise, starting at ``h``."""
        out = [h]
        g = self.sigma[h]
        while g != h:
            out.append(g)
            g = self.sigma[g]
        return tuple(out)

    def around(self, x: int):
        return self.rotation(self._first[x])

    def node_name(self, x: int) -> str:
        return "S" if x == self.S else "E" if x == self.E else str(x)

    @property
    def v_end(self) -> int:
        """The face around ``E`` (the first one, when ``E`` has several legs)."""
        return self.face_of[self.end_legs[0]]

    def end_faces(self):
        return tuple(sorted({self.face_of[h] for h in self.end_legs}))

    def is_identified(self, e1: int, e2: int) -> bool:
        return any({a >> 1, b >> 1} == {e1, e2} for a, b in self.identified)

    # -- checks -------------------------------------------------------------------------
    def _check_rotation(self):
        m2 = len(self.tail)
        if m2 % 2 or len(self.sigma) != m2 or m2 == 0:
            raise PatternError("tail and sigma must list the same, even, nonzero number of half-edges")
        if sorted(self.sigma) != list(range(m2)):
            raise PatternError("sigma is not a permutation of the half-edges")
        nodes = {}
        self._first = {}
        for h in range(m2):
            x = self.tail[h]
            if not 0 <= x <= self.n + 1:
                raise PatternError(f"half-edge {half_edge_name(h)} has an unknown tail {x}")
            if self.tail[self.sigma[h]] != x:
                raise PatternError(f"sigma moves half-edge {half_edge_name(h)} off its node")
            nodes.setdefault(x, []).append(h)
            self._first.setdefault(x, h)
        for x in range(self.n + 2):
            if x not in nodes:
                raise PatternError(f"node {self.node_name(x)} has no edges")
            if len(self.rotation(nodes[x][0])) != len(nodes[x]):
                raise PatternError(f"the rotation at node {self.node_name(x)} is not a single cycle")
            if x < self.n and len(nodes[x]) != 3:
                raise PatternError(f"node {x} has valence {len(nodes[x])}, not 3")

    def _faces(self):
        return _face_orbits(self.sigma)

    def _check(self):
        n, m = self.n, self.num_edges
        for k in range(m):
            a, b = self.tail[2 * k], self.tail[2 * k + 1]
            ends = {a, b}
            if a == b and a in (self.S, self.E):
                raise PatternError(f"edge {k} is a loop at {self.node_name(a)}")
            if ends == {self.S, self.E} and (n > 0 or m > 1):
                raise PatternError(f"edge {k} runs straight across the annulus alongside other edges")
        if (n + 2) - m + len(self.faces) != 2:
            raise PatternError("the rotation system does not describe a planar map on the sphere")
        if n > 0:
            seen = {0}
            todo = [0]
            while todo:
                x = todo.pop()
                for h in self.around(x):
                    y = self.head(h)
                    if y < n and y not in seen:
                        seen.add(y)
                        todo.append(y)
            if len(seen) != n:
                raise DisconnectedGamma(f"the pattern graph falls into pieces ({len(seen)} of {n} nodes reached)")
        if not 0 <= self.e_start < m or self.S not in (self.tail[2 * self.e_start], self.tail[2 * self.e_start + 1]):
            raise PatternError(f"e_start = {self.e_start} does not meet the starting circle")
        for a, b in self.identified:
            if not (0 <= a < 2 * m and 0 <= b < 2 * m) or a >> 1 == b >> 1:
                raise PatternError("an identification needs two different edges")
            if {self.tail[a], self.head(a)} & {self.tail[b], self.head(b)}:
                raise PatternError(f"edges {a >> 1} and {b >> 1} are adjacent and cannot be identified")
            if self.face_of[a] != self.face_of[b]:
                raise PatternError(f"identified edges {a >> 1} and {b >> 1} do not bound a common face")

    def _probe(self):
        """Half-edges of a fixed path from ``S`` to ``E`` (breadth first)."""
        parent = {self.S: None}
        todo = deque([self.S])
        while todo:
            x = todo.popleft()
            if x == self.E:
                break
            for h in self.around(x):
                y = self.head(h)
                if y not in parent:
                    parent[y] = h
                    todo.append(y)
        path = []
        x = self.E
        while parent[x] is not None:
            path.append(parent[x])
            x = self.tail[parent[x]]
        return tuple(reversed(path))

    def __eq__(self, other):
        return isinstance(other, AnnulusPattern) and (self.n, self.tail, self.sigma, self.e_start, self.identified) == (
            other.n, other.tail, other.sigma, other.e_start, other.identified)

    def __repr__(self):
        return f"AnnulusPattern(nodes={self.n}, edges={self.num_edges}, faces={self.num_faces})"


def parse_pattern(text: str) -> AnnulusPattern:
    """Read the text form: one line per node, half-edges counterclockwise.

    ``k`` is the tail end of edge ``k`` and ``k'`` its head end.  Node lines
    are ``S: ...``, ``E: ...`` and ``i: ...`` for ``i = 0..n-1``.  The first
    half-edge listed at ``S`` is on ``e_start``.  ``identify a b`` glues the
    edges of half-edges ``a`` and ``b``.
    """
    rot = {}
    identified = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("identify"):
            parts = line.split()
            if len(parts) != 3:
                raise PatternError(f"line {lineno}: identify needs two half-edges")
            identified.append((parse_half_edge(parts[1]), parse_half_edge(parts[2])))
            continue
        if ":" not in line:
            raise PatternError(f"line {lineno}: expected 'node: half-edges'")
        name, rest = line.split(":", 1)
        name = name.strip()
        if name in rot:
            raise PatternError(f"line {lineno}: node {name} listed twice")
        rot[name] = [parse_half_edge(tok) for tok in rest.split()]
        if not rot[name]:
            raise PatternError(f"line {lineno}: node {name} has no half-edges")
    if "S" not in rot or "E" not in rot:
        raise PatternError("both S and E must be listed")
    inner = sorted(k for k in rot if k not in ("S", "E"))
    n = len(inner)
    if any(not k.isdigit() for k in inner) or sorted(int(k) for k in inner) != list(range(n)):
        raise PatternError("pattern nodes must be numbered 0..n-1")
    index = {str(i): i for i in range(n)}
    index["S"], index["E"] = n, n + 1
    all_half = [h for hs in rot.values() for h in hs]
    m2 = max(all_half) + 1
    if m2 % 2:
        m2 += 1
    if sorted(all_half) != list(range(m2)):
        raise PatternError("every edge k must appear exactly once as k and once as k'")
    tail = [0] * m2
    sigma = [0] * m2
    for name, hs in rot.items():
        for i, h in enumerate(hs):
            tail[h] = index[name]
            sigma[h] = hs[(i + 1) % len(hs)]
    return AnnulusPattern(n, tail, sigma, e_start=rot["S"][0] >> 1, identified=identified)


def format_pattern(p: AnnulusPattern) -> str:
    lines = [f"# annulus pattern: {p.n} nodes, {p.num_edges} edges, {p.num_faces} faces"]
    lines.append("S: " + " ".join(half_edge_name(h) for h in p.start_legs))
    for x in range(p.n):
        lines.append(f"{x}: " + " ".join(half_edge_name(h) for h in p.around(x)))
    lines.append("E: " + " ".join(half_edge_name(h) for h in p.end_legs))
    for a, b in p.identified:
        lines.append(f"identify {half_edge_name(a)} {half_edge_name(b)}")
    return "\n".join(lines) + "\n"


# -- events -----------------------------------------------------------------------------

@dataclass(frozen=True)
class PushVertex:
    """Sweep ``C`` over ``node`` from the crossing next to it on ``half_edge``."""

    node: int
    half_edge: int
    kind: ClassVar[str] = "PushVertex"

    def __str__(self):
        return f"push {self.node} {half_edge_name(self.half_edge)}"


@dataclass(frozen=True)
class PullVertex:
    """Sweep ``C`` back over ``node`` so that it crosses ``half_edge``'s edge once."""

    node: int
    half_edge: int
    kind: ClassVar[str] = "PullVertex"

    def __str__(self):
        return f"pull {self.node} {half_edge_name(self.half_edge)}"


@dataclass(frozen=True)
class KillBump:
    """Remove the bigon between crossings ``pos`` and ``pos + 1`` of ``edge``."""

    edge: int
    pos: int
    kind: ClassVar[str] = "KillBump"

    def __str__(self):
        return f"kill {self.edge} {self.pos}"


@dataclass(frozen=True)
class InverseV:
    edge: int
    pos: int
    kind: ClassVar[str] = "InverseV"

    def __str__(self):
        return f"inverse-v {self.edge} {self.pos}"


@dataclass(frozen=True)
class MakeBump:
    """Push the arc of ``C`` after its ``after``-th crossing across ``edge``,
    adding two crossings at ``pos`` along the edge; the first one has token
    ``half_edge``."""

    edge: int
    pos: int
    after: int
    half_edge: int
    kind: ClassVar[str] = "MakeBump"

    def __str__(self):
        return f"make {self.edge} {self.pos} {self.after} {half_edge_name(self.half_edge)}"


_EVENT_WORDS = {"push": PushVertex, "pull": PullVertex, "kill": KillBump, "inverse-v": InverseV, "make": MakeBump}


@dataclass
class EventScript:
    events: list = field(default_factory=list)

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def count(self, kind: str) -> int:
        return sum(1 for ev in self.events if ev.kind == kind)

    def kinds(self):
        return {ev.kind for ev in self.events}

    def to_text(self) -> str:
        return "".join(f"{ev}\n" for ev in self.events)

    @classmethod
    def from_text(cls, text: str) -> "EventScript":
        events = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].split()
            if not line:
                continue
            word, args = line[0], line[1:]
            if word not in _EVENT_WORDS:
                raise PatternError(f"line {lineno}: unknown event {word!r}")
            try:
                if word in ("push", "pull"):
                    events.append(_EVENT_WORDS[word](int(args[0]), parse_half_edge(args[1])))
                elif word == "make":
                    events.append(MakeBump(int(args[0]), int(args[1]), int(args[2]), parse_half_edge(args[3])))
                else:
                    events.append(_EVENT_WORDS[word](int(args[0]), int(args[1])))
            except (IndexError, ValueError) as exc:
                raise PatternError(f"line {lineno}: malformed event") from exc
        return cls(events)


# -- the moving circle ------------------------------------------------------------------

class CurvePosition:
    """The circle ``C`` in normal position with respect to the pattern."""

    def __init__(self, pattern: AnnulusPattern):
        self.pattern = pattern
        self.curve = []  # crossing ids in order along C
        self.token = {}  # crossing id -> half-edge
        self.along = [[] for _ in range(pattern.num_edges)]  # ids from the tail of each edge
        self._fresh = 0

    @classmethod
    def initial(cls, pattern: AnnulusPattern) -> "CurvePosition":
        """``C`` just outside the starting circle, crossing every edge at ``S``."""
        c = cls(pattern)
        for s in pattern.start_legs:
            cid = c._new(s ^ 1)
            c.curve.append(cid)
            c._place(s, cid)
        return c

    def copy(self) -> "CurvePosition":
        c = CurvePosition(self.pattern)
        c.curve = list(self.curve)
        c.token = dict(self.token)
        c.along = [list(x) for x in self.along]
        c._fresh = self._fresh
        return c

    # -- queries ----------------------------------------------------------------------
    def tokens(self):
        return [self.token[c] for c in self.curve]

    def succ(self, cid: int) -> int:
        i = self.curve.index(cid)
        return self.curve[(i + 1) % len(self.curve)]

    def closest(self, h: int):
        """The crossing on the edge of ``h`` nearest to the tail of ``h``."""
        lst = self.along[h >> 1]
        if not lst:
            return None
        return lst[-1] if h & 1 else lst[0]

    def position(self, cid: int):
        e = self.token[cid] >> 1
        return e, self.along[e].index(cid)

    def signed_intersection(self) -> int:
        """Algebraic intersection of ``C`` with a fixed path from ``S`` to ``E``."""
        total = 0
        for h in self.pattern.probe:
            for cid in self.along[h >> 1]:
                total += 1 if self.token[cid] == h else -1
        return total

    def key(self):
        """A form that is equal for equal positions, whatever the crossing ids."""
        if not self.curve:
            return ()
        names = {}
        for e, lst in enumerate(self.along):
            for i, cid in enumerate(lst):
                names[cid] = (e, i)
        seq = [(names[c], self.token[c]) for c in self.curve]
        return min(tuple(seq[i:] + seq[:i]) for i in range(len(seq)))

    def describe(self) -> str:
        return " ".join(half_edge_name(h) for h in self.tokens())

    # -- low level edits ----------------------------------------------------------------
    def _new(self, h: int) -> int:
        cid = self._fresh
        self._fresh += 1
        self.token[cid] = h
        return cid

    def _place(self, h: int, cid: int):
        lst = self.along[h >> 1]
        if h & 1:
            lst.append(cid)
        else:
            lst.insert(0, cid)

    def _drop(self, cid: int):
        self.along[self.token[cid] >> 1].remove(cid)
        del self.token[cid]

    def _replace_pair(self, first: int, ids):
        i = self.curve.index(first)
        if i + 1 < len(self.curve):
            self.curve[i:i + 2] = ids
        else:
            self.curve.pop()
            self.curve[0:1] = ids

    def _node_check(self, node: int, hs):
        p = self.pattern
        if not 0 <= node < p.n:
            raise IllegalSweepEvent(f"{p.node_name(node)} is not a pattern node")
        edges = [h >> 1 for h in hs]
        for i in range(3):
            for j in range(i + 1, 3):
                if edges[i] != edges[j] and p.is_identified(edges[i], edges[j]):
                    raise IllegalSweepEvent(f"edges {edges[i]} and {edges[j]} at node {node} are identified")

    # -- moves ----------------------------------------------------------------------------
    def apply(self, ev):
        getattr(self, "_apply_" + ev.kind)(ev)
        return self

    def _apply_PushVertex(self, ev: PushVertex):
        p = self.pattern
        a = ev.half_edge
        if not 0 <= a < len(p.tail) or p.tail[a] != ev.node:
            raise IllegalSweepEvent(f"{ev}: half-edge does not start at the node")
        a1 = p.sigma[a]
        a2 = p.sigma[a1]
        self._node_check(ev.node, (a, a1, a2))
        c = self.closest(a)
        if c is None:
            raise IllegalSweepEvent(f"{ev}: C does not cross that edge")
        if self.token[c] == a:
            new, ends = [a1 ^ 1, a2 ^ 1], [a1, a2]
        else:
            new, ends = [a2, a1], [a2, a1]
        ids = [self._new(h) for h in new]
        i = self.curve.index(c)
        self.curve[i:i + 1] = ids
        self._drop(c)
        for h, cid in zip(ends, ids):
            self._place(h, cid)

    def _apply_PullVertex(self, ev: PullVertex):
        p = self.pattern
        a = ev.half_edge
        if not 0 <= a < len(p.tail) or p.tail[a] != ev.node:
            raise IllegalSweepEvent(f"{ev}: half-edge does not start at the node")
        a1 = p.sigma[a]
        a2 = p.sigma[a1]
        self._node_check(ev.node, (a, a1, a2))
        c1, c2 = self.closest(a1), self.closest(a2)
        if c1 is None or c2 is None or c1 == c2:
            raise IllegalSweepEvent(f"{ev}: C does not cross both other edges next to the node")
        t1, t2 = self.token[c1], self.token[c2]
        if self.succ(c1) == c2 and (t1, t2) == (a1 ^ 1, a2 ^ 1):
            first, new = c1, a
        elif self.succ(c2) == c1 and (t2, t1) == (a2, a1):
            first, new = c2, a ^ 1
        else:
            raise IllegalSweepEvent(f"{ev}: the two crossings are not a consecutive pair around the node")
        cid = self._new(new)
        self._replace_pair(first, [cid])
        self._drop(c1)
        self._drop(c2)
        self._place(a, cid)

    def _lune(self, ev):
        e, pos = ev.edge, ev.pos
        if not 0 <= e < len(self.along):
            raise IllegalSweepEvent(f"{ev}: no such edge")
        lst = self.along[e]
        if not 0 <= pos < len(lst) - 1:
            raise IllegalSweepEvent(f"{ev}: edge {e} has no crossings at {pos} and {pos + 1}")
        a, b = lst[pos], lst[pos + 1]
        if self.token[a] == self.token[b]:
            raise IllegalSweepEvent(f"{ev}: the crossings run the same way, so they bound no bigon")
        if self.succ(a) == b:
            return a, b, a
        if self.succ(b) == a:
            return a, b, b
        raise IllegalSweepEvent(f"{ev}: the crossings are not consecutive along C")

    def _remove_lune(self, a, b, first):
        self._replace_pair(first, [])
        self._drop(a)
        self._drop(b)

    def _apply_KillBump(self, ev: KillBump):
        self._remove_lune(*self._lune(ev))

    def _apply_InverseV(self, ev: InverseV):
        a, b, first = self._lune(ev)
        lst = self.along[ev.edge]
        zig = False
        for q, end in ((lst[ev.pos - 1] if ev.pos > 0 else None, a), (lst[ev.pos + 2] if ev.pos + 2 < len(lst) else None, b)):
            if q is not None and (self.succ(q) == end or self.succ(end) == q):
                zig = True
        if not zig:
            raise IllegalSweepEvent(f"{ev}: the bigon is not next to a third crossing along both C and the edge")
        self._remove_lune(a, b, first)

    def _apply_MakeBump(self, ev: MakeBump):
        p = self.pattern
        e, h = ev.edge, ev.half_edge
        if not 0 <= e < len(self.along) or h >> 1 != e:
            raise IllegalSweepEvent(f"{ev}: the token is not on the edge")
        if not 0 <= ev.after < len(self.curve) or not 0 <= ev.pos <= len(self.along[e]):
            raise IllegalSweepEvent(f"{ev}: position out of range")
        face = p.right(self.token[self.curve[ev.after]])
        if p.left(h) != face:
            raise IllegalSweepEvent(f"{ev}: the arc does not run through a face on that side of the edge")
        c1, c2 = self._new(h), self._new(h ^ 1)
        self.curve[ev.after + 1:ev.after + 1] = [c1, c2]
        lst = self.along[e]
        for order in ((c1, c2), (c2, c1)):
            lst[ev.pos:ev.pos] = order
            if self.planar():
                return
            del lst[ev.pos:ev.pos + 2]
        raise IllegalSweepEvent(f"{ev}: the bump would cross C")

    # -- consistency ----------------------------------------------------------------------
    def planar(self) -> bool:
        """True when consecutive crossings share a face and the arcs of ``C``
        inside every face are pairwise disjoint."""
        p = self.pattern
        n = len(self.curve)
        chord = {}
        for i, c in enumerate(self.curve):
            d = self.curve[(i + 1) % n]
            if p.right(self.token[c]) != p.left(self.token[d]):
                return False
            chord[c, self.token[c]] = i
            chord[d, self.token[d] ^ 1] = i
        for orbit in p.faces:
            stack = []
            for o in orbit:
                lst = self.along[o >> 1]
                for cid in (reversed(lst) if o & 1 else lst):
                    i = chord[cid, o]
                    if stack and stack[-1] == i:
                        stack.pop()
                    else:
                        stack.append(i)
            if stack:
                return False
        return True

    def check(self):
        if not self.curve:
            raise InvariantBroken("C has no crossings left")
        if not self.planar():
            raise InvariantBroken("C is no longer an embedded circle in normal position")
        if self.signed_intersection() != -1:
            raise InvariantBroken("C no longer separates the two boundary circles")


def simulate(pattern: AnnulusPattern, events, position: CurvePosition | None = None, full_check: bool = True, trace=None) -> CurvePosition:
    """Replay ``events`` from ``position`` (default: the starting circle).

    Every event is checked for legality; with ``full_check`` the embedding
    and the separation of the two boundary circles are re-verified after
    every step.  ``trace``, if a list, receives the token sequence after
    each event.
    """
    cur = position.copy() if position is not None else CurvePosition.initial(pattern)
    if full_check:
        cur.check()
    for i, ev in enumerate(events):
        try:
            cur.apply(ev)
            if full_check:
                cur.check()
        except (IllegalSweepEvent, InvariantBroken) as exc:
            raise type(exc)(f"event {i}: {exc}") from None
        if trace is not None:
            trace.append(f"{ev}: {cur.describe()}")
    return cur


def final_position_ok(pattern: AnnulusPattern, c: CurvePosition) -> bool:
    """``C`` hugs the final circle: it crosses each edge at ``E`` once, in
    clockwise order around ``E``, and nothing else."""
    toks = c.tokens()
    legs = list(pattern.end_legs)
    if sorted(toks) != sorted(legs):
        return False
    i = toks.index(legs[0])
    toks = toks[i:] + toks[:i]
    return toks == [legs[0]] + legs[:0:-1]


# -- stage one: push C over a spanning tree ---------------------------------------------

def spanning_tree(pattern: AnnulusPattern):
    """Breadth-first spanning tree of the pattern nodes, entered along
    ``e_start``.  Returns ``(order, arrival)``: nodes in visiting order and,
    for each, its own half-edge of the tree edge it was reached along."""
    p = pattern
    if p.n == 0:
        return [], {}
    s0 = p.start_legs[0]
    x0 = p.head(s0)
    arrival = {x0: s0 ^ 1}
    order = [x0]
    todo = deque([x0])
    while todo:
        x = todo.popleft()
        for h in p.rotation(arrival[x])[1:]:
            y = p.head(h)
            if y < p.n and y not in arrival:
                arrival[y] = h ^ 1
                order.append(y)
                todo.append(y)
    return order, arrival


def _tree_edges(pattern: AnnulusPattern):
    if pattern.n == 0:
        return set()
    _, arrival = spanning_tree(pattern)
    return {pattern.e_start} | {h >> 1 for h in arrival.values()}


def spanning_tree_push(pattern: AnnulusPattern):
    """Push ``C`` over every node, one 2-3 move per node in tree order.

    Returns ``(position, script)``; afterwards ``C`` crosses no tree edge.
    """
    order, arrival = spanning_tree(pattern)
    if len(order) != pattern.n:
        raise DisconnectedGamma("the spanning tree misses some pattern nodes")
    events = [PushVertex(x, arrival[x]) for x in order]
    cur = simulate(pattern, events, full_check=False)
    tree = _tree_edges(pattern)
    if any(cur.along[e] for e in tree):
        raise InvariantBroken("a tree edge is still crossed after the first stage")
    return cur, EventScript(events)


# -- stage two: collapse the dual tree ------------------------------------------------------

def dual_tree_collapse(pattern: AnnulusPattern, position: CurvePosition) -> EventScript:
    """One quadrilateral 2-0 move per face not touching ``E``.

    The faces joined by the non-tree edges (other than those at ``E``) form
    a forest with one face at ``E`` in each tree.  The least-indexed leaf
    other than those faces is swept repeatedly until only they remain.
    """
    p = pattern
    tree = _tree_edges(p)
    if any(position.along[e] for e in tree):
        raise InvariantBroken("dual_tree_collapse needs C pushed over the spanning tree first")
    end_edges = {h >> 1 for h in p.end_legs}
    chords = [e for e in range(p.num_edges) if e not in tree and e not in end_edges]
    adj = [set() for _ in range(p.num_faces)]
    for e in chords:
        f, g = p.face_of[2 * e], p.face_of[2 * e + 1]
        if f == g:
            raise InvariantBroken(f"edge {e} has the same face on both sides")
        adj[f].add(e)
        adj[g].add(e)
    roots = set(p.end_faces())
    heap = [f for f in range(p.num_faces) if len(adj[f]) == 1 and f not in roots]
    heapq.heapify(heap)
    cur = position.copy()
    events = []
    while heap:
        f = heapq.heappop(heap)
        if len(adj[f]) != 1:
            continue
        (e,) = adj[f]
        ev = KillBump(e, 0)
        cur.apply(ev)
        events.append(ev)
        g = p.face_of[2 * e] if p.face_of[2 * e] != f else p.face_of[2 * e + 1]
        adj[f].discard(e)
        adj[g].discard(e)
        if len(adj[g]) == 1 and g not in roots:
            heapq.heappush(heap, g)
    if any(adj):
        raise InvariantBroken("the dual forest did not collapse onto the faces at E")
    return EventScript(events)


# -- expanding a quadrilateral 2-0 move ---------------------------------------------------------

@dataclass(frozen=True)
class Arc:
    """A route for a bump along the boundary of the face it is pushed into.

    ``forward`` follows the face boundary in its own direction.  ``nodes``
    are the nodes the bump has to pass, ``edges`` the edges it visits and
    ``target`` the crossing it ends next to.
    """

    forward: bool
    nodes: tuple
    edges: tuple
    target: int
    half_edges: tuple = ()


def _bump(pattern: AnnulusPattern, c: CurvePosition, edge: int, pos: int):
    """``(first crossing along C, other crossing, side of the edge facing g)``."""
    a, b, first = c._lune(KillBump(edge, pos))
    other = b if first == a else a
    return first, other, c.token[first] ^ 1


def _walk(pattern: AnnulusPattern, c: CurvePosition, edge: int, pos: int, forward: bool):
    p = pattern
    first, other, o = _bump(p, c, edge, pos)
    bump = {first, other}
    if edge == p.e_start:
        return None
    lst = c.along[edge]
    # positions grow towards the head of the even half-edge
    up = (o & 1 == 0) == forward
    nxt = pos + 2 if up else pos - 1
    if 0 <= nxt < len(lst):
        return Arc(forward, (), (edge,), lst[nxt], (o,))
    nodes, edges, hs = [], [edge], [o]
    h = o
    for _ in range(2 * p.num_edges + 1):
        x = p.head(h) if forward else p.tail[h]
        if x >= p.n:
            return None  # the bump may not be pushed over S or E
        nodes.append(x)
        h = p.phi(h) if forward else p.phi_inv(h)
        if h == o:
            return None
        edges.append(h >> 1)
        hs.append(h)
        if h >> 1 == p.e_start:
            return None
        q = c.closest(h if forward else h ^ 1)
        if q is not None:
            if q in bump:
                return None
            return Arc(forward, tuple(nodes), tuple(edges), q, tuple(hs))
    return None


def choose_arc(pattern: AnnulusPattern, c: CurvePosition, edge: int, pos: int) -> Arc:
    """The route for the bump at crossings ``pos``, ``pos + 1`` of ``edge``.

    Both directions along the boundary of the face beyond the bump are
    tried; a route is ruled out if it uses ``e_start`` or runs into ``S``.
    The shorter valid route wins, the forward one on a tie.
    """
    arcs = [a for a in (_walk(pattern, c, edge, pos, True), _walk(pattern, c, edge, pos, False)) if a is not None]
    if not arcs:
        raise NoValidArc(f"no admissible route for the bump on edge {edge} at {pos}")
    return min(arcs, key=lambda a: (len(a.nodes), not a.forward))


def expand_kill_bump(pattern: AnnulusPattern, position: CurvePosition, bump) -> EventScript:
    """Realise a quadrilateral 2-0 move by 2-3 and 3-2 moves and one inverse V-move.

    ``bump`` is a :class:`KillBump` (or an ``(edge, pos)`` pair).  The bump is
    slid node by node along the chosen arc, each node costing a push and a
    pull, until it sits next to the arc's target crossing; the inverse V-move
    then removes it.
    """
    p = pattern
    edge, pos = (bump.edge, bump.pos) if isinstance(bump, KillBump) else bump
    arc = choose_arc(p, position, edge, pos)
    events = []
    hs = arc.half_edges
    for i, x in enumerate(arc.nodes):
        h, h2 = hs[i], hs[i + 1]
        if arc.forward:
            events += [PushVertex(x, h ^ 1), PullVertex(x, h2)]
        else:
            events += [PushVertex(x, h), PullVertex(x, h2 ^ 1)]
    cur = simulate(p, events, position, full_check=False)
    if not arc.nodes:
        events.append(InverseV(edge, pos))
    else:
        e, i = cur.position(arc.target)
        last = hs[-1]
        # the bump arrived from the tail of ``last`` (forward) or its head
        before = (last & 1 == 0) == arc.forward
        events.append(InverseV(e, i - 2 if before else i + 1))
    return EventScript(events)


# -- the whole sweep ----------------------------------------------------------------------------

@dataclass
class SweepReport:
    pattern: AnnulusPattern
    stage1: EventScript
    collapse: EventScript
    expanded: EventScript
    final: CurvePosition
    arcs: list = field(default_factory=list)

    @property
    def unexpanded(self) -> EventScript:
        return EventScript(self.stage1.events + self.collapse.events)

    def summary(self) -> str:
        p = self.pattern
        return "\n".join([
            f"nodes {p.n} edges {p.num_edges} faces {p.num_faces}",
            f"stage 1 pushes {len(self.stage1)}",
            f"stage 2 bumps {len(self.collapse)}",
            f"expanded events {len(self.expanded)} "
            f"(push {self.expanded.count('PushVertex')}, pull {self.expanded.count('PullVertex')}, "
            f"inverse-v {self.expanded.count('InverseV')})",
            f"final crossings {self.final.describe()}",
        ]) + "\n"


def sweep_report(pattern: AnnulusPattern, full_check: bool = True) -> SweepReport:
    """Run both stages, expand every bump and replay the result.

    The position after each expanded bump must equal the position after
    the plain quadrilateral 2-0 move it stands for.
    """
    p = pattern
    cur, stage1 = spanning_tree_push(p)
    collapse = dual_tree_collapse(p, cur)
    expanded = list(stage1.events)
    arcs = []
    for kb in collapse:
        arcs.append(choose_arc(p, cur, kb.edge, kb.pos))
        part = expand_kill_bump(p, cur, kb)
        target = cur.copy().apply(kb)
        cur = simulate(p, part.events, cur, full_check=False)
        if cur.key() != target.key():
            raise InvariantBroken(f"expanding {kb} did not reproduce the 2-0 move")
        expanded += part.events
    final = simulate(p, expanded, full_check=full_check)
    if final.key() != cur.key() or not final_position_ok(p, final):
        raise InvariantBroken("the sweep did not end at the final circle")
    return SweepReport(p, stage1, collapse, EventScript(expanded), final, arcs)


def sweep_membrane(pattern: AnnulusPattern) -> EventScript:
    """The fully expanded sweep: pushes, pulls and inverse V-moves only."""
    return sweep_report(pattern).expanded


# -- patterns from triangulations ------------------------------------------------------------

def _parity(seq) -> int:
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


def _link_graph(tri: Triangulation, skel: Skeleton, v: int):
    """The graph dual to the link of ``v``: one node per corner, one edge per
    glued pair of corner-triangle sides, rotations from an orientation of the
    link."""
    corners = skel.vertex_members[v]
    node = {tc: i for i, tc in enumerate(corners)}
    colour = {corners[0]: 1}
    todo = [corners[0]]
    while todo:
        t, c = todo.pop()
        for f in range(4):
            if f == c:
                continue
            u, _, q = tri.gluing(t, f)
            nxt = (u, q[c])
            if nxt not in colour:
                colour[nxt] = -q.sign * colour[t, c]
                todo.append(nxt)
    half = {}
    tail = []
    for t, c in corners:
        for f in range(4):
            if f == c or (t, c, f) in half:
                continue
            u, g, q = tri.gluing(t, f)
            k = len(tail) // 2
            half[t, c, f] = 2 * k
            half[u, q[c], g] = 2 * k + 1
            tail += [node[t, c], node[u, q[c]]]
    sigma = [0] * len(tail)
    for t, c in corners:
        x, y, z = [w for w in range(4) if w != c]
        if _parity((c, x, y, z)) != colour[t, c]:
            y, z = z, y
        ring = [half[t, c, x], half[t, c, y], half[t, c, z]]
        for i in range(3):
            sigma[ring[i]] = ring[(i + 1) % 3]
    return corners, tail, sigma, half


def _on_edge(skel: Skeleton, k: int, e: int) -> bool:
    t, f = skel.triangle_members[k][0]
    return any(skel.edge_of[t][edge_index(a, b)] == e for a in range(4) for b in range(a + 1, 4) if f not in (a, b))


def extract_pattern(tri: Triangulation, v: int, start_edge: int, end_edge: int) -> AnnulusPattern:
    """The pattern on the boundary of the ball dual to vertex class ``v``.

    The graph is dual to the link of ``v``; its faces are the ends at ``v``
    of the edges of ``tri``.  The face for ``start_edge`` (the membrane) is
    shrunk to ``S`` and the face for ``end_edge`` (the arch neck) to ``E``;
    when an edge has both ends at ``v`` the lower-numbered face is used.
    ``e_start`` is the lowest-numbered edge left at ``S``.  Triangles on the
    membrane edge are exempt from the self-gluing check.
    """
    from .rewriter import ball_self_gluings

    skel = Skeleton(tri)
    if not 0 <= v < skel.num_vertices:
        raise PatternError(f"vertex class {v} out of range")
    if not skel.links[v].is_sphere:
        raise PatternError(f"vertex class {v} is ideal, so it bounds no ball")
    # the membrane sits inside the ball, so its own triangles always meet v twice
    witness = [w for w in ball_self_gluings(tri, v, skel) if not _on_edge(skel, w[0], start_edge) and not _on_edge(skel, w[0], end_edge)]
    if witness:
        raise SelfGluedBall(f"the ball around vertex {v} is glued to itself along triangle {witness[0][0]}", witness[0])
    corners, tail, sigma, half = _link_graph(tri, skel, v)
    names = {h: key for key, h in half.items()}
    n0 = len(corners)
    faces, _ = _face_orbits(sigma)
    if n0 - len(tail) // 2 + len(faces) != 2:
        raise InvariantBroken("the link graph is not a sphere map")

    def edge_end(face):
        h = faces[face][0]
        t, c, f = names[h]
        _, _, fp = names[sigma.index(h)]
        (w,) = [x for x in range(4) if x not in (c, f, fp)]
        return skel.edge_of[t][edge_index(c, w)]

    def face_for(e):
        found = [f for f in range(len(faces)) if edge_end(f) == e]
        if not found:
            raise PatternError(f"edge class {e} has no end at vertex {v}")
        return found[0]

    fs, fe = face_for(start_edge), face_for(end_edge)
    if fs == fe:
        raise PatternError("the start and end faces coincide")
    cycles = []
    for f in (fs, fe):
        orbit = faces[f]
        nodes = [tail[h] for h in orbit]
        if len(set(nodes)) != len(nodes) or len({h >> 1 for h in orbit}) != len(orbit):
            raise PatternError(f"face {f} is not bounded by a simple cycle")
        cycles.append(orbit)
    cyc_nodes = [{tail[h] for h in orbit} for orbit in cycles]
    if cyc_nodes[0] & cyc_nodes[1]:
        raise PatternError("the start and end faces touch")
    boundary = {h >> 1 for orbit in cycles for h in orbit}
    keep_nodes = [x for x in range(n0) if x not in cyc_nodes[0] | cyc_nodes[1]]
    n = len(keep_nodes)
    new_node = {x: i for i, x in enumerate(keep_nodes)}
    for x in cyc_nodes[0]:
        new_node[x] = n
    for x in cyc_nodes[1]:
        new_node[x] = n + 1
    keep_edges = [k for k in range(len(tail) // 2) if k not in boundary]
    new_half = {}
    for i, k in enumerate(keep_edges):
        new_half[2 * k] = 2 * i
        new_half[2 * k + 1] = 2 * i + 1
    ntail = [0] * (2 * len(keep_edges))
    nsigma = [0] * (2 * len(keep_edges))
    for h, nh in new_half.items():
        ntail[nh] = new_node[tail[h]]
        if tail[h] in keep_nodes:
            nsigma[nh] = new_half[sigma[h]]
    for orbit in cycles:
        # walking a face keeps it on the right, so the legs come clockwise
        legs = [new_half[sigma[h]] for h in orbit][::-1]
        for i, h in enumerate(legs):
            nsigma[h] = legs[(i + 1) % len(legs)]
    start = [nh for nh in range(len(ntail)) if ntail[nh] == n]
    return AnnulusPattern(n, ntail, nsigma, e_start=min(h >> 1 for h in start))

