"""Derived moves compiled to 2-3/3-2/1-4/4-1 scripts, and their dual spines.

Run: python3 demos/macros_and_spines.py
"""

from __future__ import annotations

from trispine.macros import arch_with_membrane, barycentric, stellar_face, stellar_face_direct, v_move
from trispine.signature import isomorphic
from trispine.skeleton import Skeleton
from trispine.spine import duality_report, dualize
from trispine.triangulation import double_tetrahedron

base = double_tetrahedron()
print("double tetrahedron:", Skeleton(base).counts(), "(V, E, F, T)")
print(duality_report(dualize(base)))

r = stellar_face(base, 0)
print("stellar subdivision of a triangle, as moves:")
print(r.script.to_text(), end="")
print("matches the direct subdivision:", isomorphic(r.output, stellar_face_direct(base, 0)))

r = v_move(base, 0, 0)
print("\nV-move:", " ".join(ev.kind for ev in r.script.events), "->", r.output.tet_count, "tets")

r = arch_with_membrane(base, 0)
skel = Skeleton(r.output)
print("arch with membrane:", " ".join(ev.kind for ev in r.script.events))
print("  membrane edge degree", len(skel.edge_members[r.landmarks["membrane"]]),
      "| neck edge degree", len(skel.edge_members[r.landmarks["neck"]]))

r = barycentric(base)
print(f"\nbarycentric subdivision by moves: {len(r.script.events)} events, {r.output.tet_count} tets")
