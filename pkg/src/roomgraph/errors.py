"""Exception types raised across the package."""


class RoomGraphError(Exception):
    """Base class for all package errors."""


class ConfigParseError(RoomGraphError, ValueError):
    pass


class RoomRangeError(RoomGraphError, ValueError):
    pass


class IndexOutOfRangeError(RoomGraphError, IndexError):
    pass


class VertexBoundError(RoomGraphError, OverflowError):
    """M**N exceeds the bound for explicit (enumerated) operations."""


class DomainMismatchError(RoomGraphError, ValueError):
    pass


class NoDerangementError(RoomGraphError, ValueError):
    """The requested derangement does not exist (domain too small or bad pin)."""


class OddPermutationError(RoomGraphError, ValueError):
    pass


class UnsupportedSizeError(RoomGraphError, ValueError):
    pass


class NotFactorableError(RoomGraphError, ValueError):
    """Odd permutations of three objects are not products of derangements."""


class PreconditionError(RoomGraphError, ValueError):
    pass


class NoPredecessorError(RoomGraphError, ValueError):
    pass
