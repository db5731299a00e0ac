"""Brute-force censuses and flip-graph searches.

Nodes of a flip graph are canonical signatures.  Moves out of a node are
tried on the canonical representative of its class, in a fixed order: 2-3
moves by triangle class, then 3-2 by edge class, then 1-4 by tetrahedron,
then 4-1 by vertex class.  Searches expand whole breadth-first levels; with
several workers a level is split across processes and the results are merged
back in frontier order, so the output does not depend on the worker count.
"""

from __future__ import annotations

import random
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

from .errors import CapExceeded, CountMismatch, NotFoundWithinCaps, PreconditionViolated
from .moves import MoveEvent, MoveScript, apply_event, legal_23, legal_32, legal_41
from .perm import ALL_PERMS
from .signature import canonical_signature, from_signature, signature_hex
from .skeleton import Skeleton, classify_vertices, validate
from .triangulation import Triangulation

__all__ = [
    "MOVE_KINDS",
    "CensusEntry",
    "FlipGraph",
    "census_one_tet",
    "census_csv",
    "legal_events",
    "bfs_component",
    "find_path",
    "scramble",
]

MOVE_KINDS = ("23", "32", "14", "41")
INVERSE = {"23": "32", "32": "23", "14": "41", "41": "14"}


# -- one-tetrahedron census ---------------------------------------------------------

@dataclass(frozen=True)
class CensusEntry:
    signature: str
    tri: Triangulation
    counts: tuple  # (V, E, F, T)
    links: tuple  # classification of every vertex link
    all_material: bool


def _one_tet_gluings():
    matchings = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
    for pairs in matchings:
        choices = [[p for p in ALL_PERMS if p[f] == g] for f, g in pairs]
        for picks in product(*choices):
            row = [None] * 4
            for (f, g), p in zip(pairs, picks):
                row[f] = (0, g, p)
                row[g] = (0, f, p.inverse())
            yield Triangulation([row])


def census_one_tet():
    """Every valid closed one-tetrahedron triangulation up to isomorphism,
    ordered by signature."""
    seen = {}
    for tri in _one_tet_gluings():
        skel = Skeleton(tri)
        if not validate(tri, skel):
            continue
        sig = signature_hex(tri)
        if sig in seen:
            continue
        kinds, material, _ = classify_vertices(tri, skel)
        seen[sig] = CensusEntry(
            signature=sig,
            tri=from_signature(sig),
            counts=skel.counts(),
            links=tuple(link.classification for link in skel.links),
            all_material=material == len(kinds),
        )
    return [seen[s] for s in sorted(seen)]


def census_csv(entries) -> str:
    lines = ["signature,V,E,F,T,links,all_material"]
    for e in entries:
        v, ed, f, t = e.counts
        lines.append(f"{e.signature},{v},{ed},{f},{t},{'|'.join(e.links)},{int(e.all_material)}")
    return "\n".join(lines) + "\n"


# -- moves out of a node ------------------------------------------------------------

def legal_events(tri: Triangulation, moves=("23", "32"), skel: Skeleton | None = None):
    skel = skel or Skeleton(tri)
    out = []
    if "23" in moves:
        out.extend(MoveEvent("23", k) for k in range(skel.num_triangles) if legal_23(tri, k, skel))
    if "32" in moves:
        out.extend(MoveEvent("32", e) for e in range(skel.num_edges) if legal_32(tri, e, skel))
    if "14" in moves:
        out.extend(MoveEvent("14", t) for t in range(tri.tet_count))
    if "41" in moves:
        out.extend(MoveEvent("41", v) for v in range(skel.num_vertices) if legal_41(tri, v, skel))
    return out


def _expand(job):
    sig, moves, tet_cap = job
    tri = from_signature(sig)
    out = []
    for ev in legal_events(tri, moves):
        new = apply_event(tri, ev)
        if new.tet_count > tet_cap:
            continue
        out.append((ev, canonical_signature(new)))
    return out


class _Pool:
    """Order-preserving map over a level, in-process for one worker."""

    def __init__(self, workers: int):
        self.workers = max(1, int(workers))
        self.executor = ProcessPoolExecutor(self.workers) if self.workers > 1 else None

    def map(self, jobs):
        if self.executor is None or len(jobs) < 2:
            return [_expand(j) for j in jobs]
        chunk = max(1, len(jobs) // (4 * self.workers))
        return list(self.executor.map(_expand, jobs, chunksize=chunk))

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        if self.executor is not None:
            self.executor.shutdown()


# -- breadth-first closure ----------------------------------------------------------

@dataclass
class FlipGraph:
    nodes: list = field(default_factory=list)  # canonical signatures, in discovery order
    edges: list = field(default_factory=list)  # (source index, MoveEvent, target index)
    moves: tuple = ()
    tet_cap: int = 0
    node_cap: int = 0
    complete: bool = True

    def index(self, sig) -> int:
        return self.nodes.index(sig)

    def to_dot(self) -> str:
        lines = ["digraph flips {"]
        for i, sig in enumerate(self.nodes):
            tri = from_signature(sig)
            lines.append(f'  n{i} [label="{i}: {tri.tet_count} tets"];')
        for a, ev, b in self.edges:
            lines.append(f'  n{a} -> n{b} [label="{ev}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = [f"moves {','.join(self.moves)} tet-cap {self.tet_cap} nodes {len(self.nodes)} edges {len(self.edges)}"]
        lines.extend(f"node {i} {sig.hex()}" for i, sig in enumerate(self.nodes))
        lines.extend(f"edge {a} {b} {ev}" for a, ev, b in self.edges)
        if not self.complete:
            lines.append("incomplete: node cap reached")
        return "\n".join(lines) + "\n"


def _check_moves(moves):
    moves = tuple(moves)
    bad = [m for m in moves if m not in MOVE_KINDS]
    if bad or not moves:
        raise PreconditionViolated(f"unknown move kinds {bad or moves}")
    return moves


def bfs_component(seed: Triangulation, moves=("23", "32"), tet_cap: int | None = None, node_cap: int = 100000, workers: int = 1) -> FlipGraph:
    """Closure of ``seed`` under the legal moves, within the caps.

    Raises :class:`CapExceeded` with the partial graph once ``node_cap`` nodes
    have been found.
    """
    moves = _check_moves(moves)
    if not seed.is_closed() or not validate(seed):
        raise PreconditionViolated("the seed must be closed and valid")
    tet_cap = seed.tet_count + 2 if tet_cap is None else tet_cap
    if tet_cap < 1 or node_cap < 1:
        raise PreconditionViolated("caps must be positive")
    graph = FlipGraph(moves=moves, tet_cap=tet_cap, node_cap=node_cap)
    start = canonical_signature(seed)
    index = {start: 0}
    graph.nodes.append(start)
    frontier = [start]
    with _Pool(workers) as pool:
        while frontier:
            results = pool.map([(s, moves, tet_cap) for s in frontier])
            nxt = []
            for sig, found in zip(frontier, results):
                for ev, target in found:
                    if target not in index:
                        if len(graph.nodes) >= node_cap:
                            graph.complete = False
                            raise CapExceeded(f"node cap {node_cap} reached", partial=graph)
                        index[target] = len(graph.nodes)
                        graph.nodes.append(target)
                        nxt.append(target)
                    graph.edges.append((index[sig], ev, index[target]))
            frontier = nxt
    return graph


# -- paths ----------------------------------------------------------------------------

def _counts(tri: Triangulation):
    _, material, ideal = classify_vertices(tri)
    return material, ideal


def _realise(a: Triangulation, path, moves) -> list:
    """Events that walk ``a`` itself (not its canonical form) along ``path``."""
    events = []
    cur = a
    for target in path[1:]:
        for ev in legal_events(cur, moves):
            new = apply_event(cur, ev)
            if canonical_signature(new) == target:
                events.append(ev)
                cur = new
                break
        else:
            raise AssertionError("path step could not be realised")
    return events


def find_path(a: Triangulation, b: Triangulation, moves=("23", "32"), tet_cap: int | None = None, node_cap: int = 200000, workers: int = 1) -> MoveScript:
    """A shortest move sequence from ``a`` to a triangulation isomorphic to ``b``.

    Bidirectional breadth-first search; the side with the smaller frontier
    grows by a whole level at a time.  Failure within the caps raises
    :class:`NotFoundWithinCaps`, which says nothing about connectivity.
    """
    moves = _check_moves(moves)
    if set(moves) <= {"23", "32"} and _counts(a) != _counts(b):
        raise CountMismatch(f"vertex counts differ: {_counts(a)} vs {_counts(b)}")
    sa, sb = canonical_signature(a), canonical_signature(b)
    if sa == sb:
        return MoveScript(sa, [], ["path"])
    tet_cap = max(a.tet_count, b.tet_count) + 2 if tet_cap is None else tet_cap
    back_moves = tuple(INVERSE[m] for m in moves)
    # parent links: forward[s] is the node s was reached from, backward[s] the node it leads to
    forward = {sa: None}
    backward = {sb: None}
    f_front, b_front = [sa], [sb]
    meet = None
    with _Pool(workers) as pool:
        while f_front and b_front and meet is None:
            grow_forward = len(f_front) <= len(b_front)
            front = f_front if grow_forward else b_front
            mine, other = (forward, backward) if grow_forward else (backward, forward)
            results = pool.map([(s, moves if grow_forward else back_moves, tet_cap) for s in front])
            nxt = []
            for sig, found in zip(front, results):
                for _, target in found:
                    if target in mine:
                        continue
                    mine[target] = sig
                    nxt.append(target)
                    if target in other and meet is None:
                        meet = target
                if meet is not None:
                    break
            if len(forward) + len(backward) > node_cap:
                raise NotFoundWithinCaps(f"node cap {node_cap} reached without meeting")
            if grow_forward:
                f_front = nxt
            else:
                b_front = nxt
    if meet is None:
        raise NotFoundWithinCaps(f"no path within {tet_cap} tetrahedra")
    path = deque([meet])
    s = forward[meet]
    while s is not None:
        path.appendleft(s)
        s = forward[s]
    s = backward[meet]
    while s is not None:
        path.append(s)
        s = backward[s]
    return MoveScript(sa, _realise(a, list(path), moves), ["path"])


# -- scramble harness -------------------------------------------------------------

def scramble(tri: Triangulation, length: int, rng: random.Random, moves=("23", "32"), max_tets: int | None = None):
    """Apply up to ``length`` random legal moves.

    Each step picks a move kind uniformly among the kinds with a legal move
    that keeps the size within ``max_tets`` (default: two more than ``tri``),
    then a move of that kind uniformly.  Returns ``(script, result, largest)``
    where ``largest`` is the most tetrahedra seen.
    """
    moves = _check_moves(moves)
    max_tets = tri.tet_count + 2 if max_tets is None else max_tets
    cur = tri
    largest = tri.tet_count
    events = []
    for _ in range(length):
        by_kind = {}
        for ev in legal_events(cur, moves):
            grow = {"23": 1, "32": -1, "14": 3, "41": -3}[ev.kind]
            if cur.tet_count + grow <= max_tets:
                by_kind.setdefault(ev.kind, []).append(ev)
        if not by_kind:
            break
        kind = rng.choice(sorted(by_kind))
        ev = rng.choice(by_kind[kind])
        cur = apply_event(cur, ev)
        events.append(ev)
        largest = max(largest, cur.tet_count)
    return MoveScript(canonical_signature(tri), events, ["scramble"]), cur, largest
