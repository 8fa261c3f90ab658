"""Exception hierarchy.

Every domain error carries a short upper-case ``code`` that the command line
prints verbatim (exit status 65).
"""


class MStableError(Exception):
    code = "DOMAIN_ERROR"

    def __init__(self, message="", code=None):
        if code is not None:
            self.code = code
        super().__init__(message or self.code)


class SpaceMismatch(MStableError):
    code = "SPACE_MISMATCH"


class InvalidSpace(MStableError):
    code = "INVALID_SPACE"


class InvalidIndex(MStableError):
    code = "INVALID_INDEX"


class InvalidMarkSet(MStableError):
    code = "INVALID_MARKSET"


class EnumerationCapExceeded(MStableError):
    code = "ENUM_CAP_EXCEEDED"


class NotBig(MStableError):
    code = "NOT_BIG"


class DualGraphError(MStableError):
    code = "INVALID_GRAPH"


class PreconditionViolated(MStableError):
    code = "PRECONDITION_VIOLATED"


class StrataError(MStableError):
    code = "INVALID_PARTITION"


class InvariantBreach(MStableError):
    """Internal consistency failure; mapped to exit status 70."""

    code = "INVARIANT_BREACH"
