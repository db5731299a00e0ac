"""Singular triangulations of 3-manifolds and pseudo-manifolds.

The core pieces are :class:`Triangulation` (a gluing table), :class:`Skeleton`
(vertex, edge and triangle classes), the bistellar moves in :mod:`trispine.moves`
and the canonical signatures in :mod:`trispine.signature`.
"""

from __future__ import annotations

from .errors import TriSpineError
from .moves import MoveEvent, MoveScript, apply_event, replay
from .signature import canonical_signature, isomorphic, signature_hex
from .skeleton import Skeleton, validate
from .triangulation import Triangulation, double_tetrahedron, figure_eight, gieseking, parse, serialize

__version__ = "0.1.0"

__all__ = [
    "Triangulation",
    "Skeleton",
    "MoveEvent",
    "MoveScript",
    "TriSpineError",
    "apply_event",
    "replay",
    "canonical_signature",
    "signature_hex",
    "isomorphic",
    "validate",
    "parse",
    "serialize",
    "gieseking",
    "double_tetrahedron",
    "figure_eight",
]
