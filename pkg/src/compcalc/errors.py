"""Exception types shared across the package."""


class CompCalcError(Exception):
    """Base class for all errors raised by compcalc."""


class RingMismatchError(CompCalcError, ValueError):
    """Operands belong to different coefficient rings or model contexts."""


class DegreeError(CompCalcError, ValueError):
    """An element's degree violates an operation's precondition."""


class PositionError(CompCalcError, IndexError):
    """A composition position or auxiliary index is out of range."""


class FormatError(CompCalcError, ValueError):
    """Malformed serialized data (scalar strings, JSON files, tree text)."""


class NonAssociativeError(CompCalcError, ValueError):
    """A multiplication expected to be associative is not."""
