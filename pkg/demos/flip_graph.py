"""Scramble a small triangulation with random 2-3/3-2 moves and find the way back.

Run: python3 demos/flip_graph.py
"""

from __future__ import annotations

import random

from trispine.explorer import bfs_component, find_path, scramble
from trispine.moves import replay
from trispine.signature import isomorphic
from trispine.generators import random_closed_valid
from trispine.triangulation import double_tetrahedron

base = double_tetrahedron()
graph = bfs_component(base, tet_cap=4)
print(f"double tetrahedron, at most 4 tets: {len(graph.nodes)} classes, {len(graph.edges)} moves")

rng = random.Random(0)
base = random_closed_valid(3, rng)
script, target, largest = scramble(base, 20, rng)
print(f"\na random 3-tet triangulation scrambled with {len(script.events)} moves (largest {largest} tets)")
path = find_path(base, target, tet_cap=largest + 2)
print(f"shortest way there: {' '.join(str(ev) for ev in path.events)}")
print("replays to the target:", isomorphic(replay(base, path), target))
