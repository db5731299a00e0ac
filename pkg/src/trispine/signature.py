"""Canonical signatures and isomorphism tests.

For a start tetrahedron ``t`` and a relabelling ``r`` of its vertices we walk
the triangulation breadth first, numbering tetrahedra as they are reached and
relabelling each newly reached tetrahedron so that the gluing that reached
it reads as the identity.  The walk writes, for every new tetrahedron and
every face, the partner's new index and the gluing permutation in the new
labels.  The signature keeps the least such sequence over all ``24 * n``
starts, so it only depends on the isomorphism class.

Comparison against the best sequence found so far happens while the walk is
running, so most starts are abandoned after a handful of entries.
"""

from __future__ import annotations

import struct

from .perm import ALL_PERMS, IDENTITY, Perm4
from .triangulation import Triangulation

__all__ = [
    "canonical_signature",
    "signature_hex",
    "isomorphic",
    "find_isomorphism",
    "from_signature",
    "canonical_form",
    "random_relabel",
]

_UNGLUED = 0xFFFFFFFF
_NO_PERM = 0xFF


def _walk(glue, start, rho0, best, exact=False):
    """Encode the component of ``start``; abandon as soon as it beats ``best``.

    Returns ``(codes, order, labels)`` or ``None`` when abandoned.  With
    ``exact`` the walk is abandoned on any difference from ``best``.
    """
    order = [start]
    labels = {start: rho0}
    number = {start: 0}
    codes = []
    pos = 0
    deciding = best is not None
    limit = len(best) if best is not None else 0
    k = 0
    while k < len(order):
        t = order[k]
        rho = labels[t]
        rho_inv = rho.inverse()
        row = glue[t]
        for nf in range(4):
            g = row[rho_inv[nf]]
            if g is None:
                a, b = _UNGLUED, _NO_PERM
            else:
                u, _, p = g
                j = number.get(u)
                if j is None:
                    j = len(order)
                    number[u] = j
                    order.append(u)
                    labels[u] = rho * p.inverse()
                    a, b = j, 0  # identity is ALL_PERMS[0]
                else:
                    a, b = j, (labels[u] * p * rho_inv).index
            if deciding:
                if pos >= limit:
                    return None
                ba, bb = best[pos], best[pos + 1]
                if a != ba or b != bb:
                    if exact or (a, b) > (ba, bb):
                        return None
                    deciding = False
            codes.append(a)
            codes.append(b)
            pos += 2
        k += 1
    if exact and pos != limit:
        return None
    return codes, order, labels


def _component_best(glue, comp):
    best = None
    best_start = None
    for t in comp:
        for rho in ALL_PERMS:
            res = _walk(glue, t, rho, best)
            if res is not None:
                best = res[0]
                best_start = (t, rho)
    return best, best_start


def _pack(n, codes) -> bytes:
    out = [struct.pack(">I", n)]
    for i in range(0, len(codes), 2):
        out.append(struct.pack(">IB", codes[i], codes[i + 1]))
    return b"".join(out)


def canonical_signature(tri: Triangulation) -> bytes:
    """Canonical byte string; equal exactly for isomorphic triangulations."""
    glue = tri.table
    parts = []
    for comp in tri.components():
        codes, _ = _component_best(glue, comp)
        parts.append(_pack(len(comp), codes))
    parts.sort()
    return struct.pack(">I", len(parts)) + b"".join(parts)


def signature_hex(tri: Triangulation) -> str:
    return canonical_signature(tri).hex()


def canonical_form(tri: Triangulation) -> Triangulation:
    """The triangulation rebuilt in its canonical labelling."""
    return from_signature(canonical_signature(tri))


def from_signature(sig) -> Triangulation:
    """Decode a signature (bytes or hex string) back into a triangulation."""
    if isinstance(sig, str):
        sig = bytes.fromhex(sig)
    (ncomp,) = struct.unpack_from(">I", sig, 0)
    off = 4
    rows = []
    for _ in range(ncomp):
        (n,) = struct.unpack_from(">I", sig, off)
        off += 4
        base = len(rows)
        comp_rows = [[None] * 4 for _ in range(n)]
        for t in range(n):
            for f in range(4):
                a, b = struct.unpack_from(">IB", sig, off)
                off += 5
                if a == _UNGLUED:
                    continue
                p = ALL_PERMS[b]
                comp_rows[t][f] = (base + a, p[f], p)
        rows.extend(comp_rows)
    if off != len(sig):
        raise ValueError("trailing bytes in signature")
    return Triangulation(rows)


def isomorphic(a: Triangulation, b: Triangulation) -> bool:
    if a.tet_count != b.tet_count:
        return False
    if a.tet_count == 0:
        return True
    if not a.is_connected() or not b.is_connected():
        return canonical_signature(a) == canonical_signature(b)
    target = _walk(a.table, 0, IDENTITY, None)[0]
    glue = b.table
    for t in range(b.tet_count):
        for rho in ALL_PERMS:
            if _walk(glue, t, rho, target, exact=True) is not None:
                return True
    return False


def find_isomorphism(a: Triangulation, b: Triangulation):
    """Return ``(tet_map, vertex_perms)`` carrying ``a`` onto ``b``, or ``None``.

    Only connected triangulations are supported.
    """
    if a.tet_count != b.tet_count or not a.is_connected() or not b.is_connected():
        return None
    if a.tet_count == 0:
        return [], []
    codes, order_a, labels_a = _walk(a.table, 0, IDENTITY, None)
    for t in range(b.tet_count):
        for rho in ALL_PERMS:
            res = _walk(b.table, t, rho, codes, exact=True)
            if res is None:
                continue
            _, order_b, labels_b = res
            tet_map = [0] * a.tet_count
            perms = [IDENTITY] * a.tet_count
            for ta, tb in zip(order_a, order_b):
                tet_map[ta] = tb
                perms[ta] = labels_b[tb].inverse() * labels_a[ta]
            return tet_map, perms
    return None


def random_relabel(tri: Triangulation, rng) -> Triangulation:
    order = list(range(tri.tet_count))
    rng.shuffle(order)
    perms = [Perm4(rng.sample(range(4), 4)) for _ in range(tri.tet_count)]
    return tri.relabel(order, perms)
