"""Lifting a move sequence above a floor on the number of material vertices.

A generated script removes a vertex (4-1), wanders with 2-3/3-2 moves and
puts a vertex back (1-4), so its material count dips by one.  The rewriter
parks a triangular pillow beside the moves so the count never drops.

Run: python3 demos/floor_rewrite.py
"""

from __future__ import annotations

import random

from trispine.generators import random_dip_script
from trispine.moves import replay
from trispine.rewriter import floor_report, pillow_rewrite
from trispine.signature import canonical_signature

base, script = random_dip_script(random.Random(11), n=2, adversarial=True)
before = floor_report(base, script)
print("original:", " ".join(str(ev) for ev in script.events))
print("material counts:", before)

k = before[0]
out = pillow_rewrite(base, script, k)
after = floor_report(base, out)
print(f"\nrewritten above floor {k}: {len(out.events)} events")
print("material counts:", after)
same = canonical_signature(replay(base, out)) == canonical_signature(replay(base, script))
print("same endpoint:", same)
