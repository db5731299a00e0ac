"""Exception types.  Each carries a stable ``code`` used by the command line."""

from __future__ import annotations


class TriSpineError(Exception):
    code = "E_GENERIC"


class ParseError(TriSpineError, ValueError):
    code = "E_PARSE"


class IllegalMove(TriSpineError):
    code = "E_ILLEGAL_MOVE"

    def __init__(self, message: str, event_index: int | None = None):
        if event_index is not None:
            message = f"event {event_index}: {message}"
        super().__init__(message)
        self.event_index = event_index


class SignatureMismatch(TriSpineError):
    code = "E_SIGNATURE_MISMATCH"


class PillowSelfGlued(IllegalMove):
    code = "E_PILLOW_SELF_GLUED"


class PreconditionViolated(TriSpineError):
    code = "E_PRECONDITION"


class InvariantBroken(TriSpineError):
    code = "E_INVARIANT"


class SelfGluedBall(TriSpineError):
    code = "E_SELF_GLUED_BALL"

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotFoundWithinCaps(TriSpineError):
    code = "E_NOT_FOUND_WITHIN_CAPS"


class CountMismatch(TriSpineError):
    code = "E_COUNT_MISMATCH"


class CapExceeded(TriSpineError):
    code = "E_CAP_EXCEEDED"

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class DisconnectedGamma(TriSpineError):
    code = "E_DISCONNECTED_GAMMA"


class NoValidArc(TriSpineError):
    code = "E_NO_VALID_ARC"


class PatternError(TriSpineError, ValueError):
    code = "E_PATTERN"


class IllegalSweepEvent(TriSpineError):
    code = "E_ILLEGAL_SWEEP_EVENT"
