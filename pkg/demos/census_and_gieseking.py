"""Every closed one-tetrahedron triangulation, and why none of them can move.

Run: python3 demos/census_and_gieseking.py
"""

from __future__ import annotations

from trispine.explorer import census_one_tet, legal_events
from trispine.skeleton import Skeleton
from trispine.triangulation import gieseking, serialize

print("Gluing the four faces of one tetrahedron in pairs, keeping the valid results:\n")
for entry in census_one_tet():
    v, e, f, t = entry.counts
    kind = "closed manifold" if entry.all_material else "ideal"
    print(f"  V={v} E={e} F={f} T={t}  links {', '.join(entry.links):<16} {kind}")

closed = [e for e in census_one_tet() if e.all_material]
print(f"\n{len(closed)} closed classes; moves available on them:",
      sum(len(legal_events(e.tri, ("23", "32"))) for e in closed))

print("\nThe ideal class is the Gieseking manifold:")
print(serialize(gieseking()), end="")
link = Skeleton(gieseking()).links[0]
print(f"its vertex link is a {link.classification} (chi {link.euler_characteristic}, orientable {link.orientable})")
