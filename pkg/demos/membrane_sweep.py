"""Sweeping a circle across an annulus pattern.

Stage one pushes the circle over a spanning tree of the pattern; stage two
kills one bump per face, and every bump is expanded into pushes, pulls and
a final inverse V-move.

Run: python3 demos/membrane_sweep.py
"""

from __future__ import annotations

import random

from trispine.generators import random_pattern
from trispine.sweep import format_pattern, simulate, sweep_report

p = random_pattern(random.Random(1), 6)
print(format_pattern(p))
r = sweep_report(p)
print(r.summary())
for kb, arc in zip(r.collapse, r.arcs):
    route = " ".join(map(str, arc.nodes)) or "(next to its target)"
    print(f"{kb}: slides past nodes {route}")

trace = []
simulate(p, r.expanded.events, trace=trace)
print("\ncrossings after each event:")
for line in trace:
    print(" ", line)
