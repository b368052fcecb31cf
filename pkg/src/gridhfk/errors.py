"""Exception types shared by the library and the command line."""


class GridHFKError(Exception):
    """Base class for all domain errors raised by gridhfk."""


class GridSyntaxError(GridHFKError):
    """The diagram or move-script text could not be parsed."""


class ValidationError(GridHFKError):
    """A grid diagram violates the one-X-one-O-per-row-and-column rules."""


class IllegalMove(GridHFKError):
    """A grid move cannot be applied to the given diagram."""


class LimitExceeded(GridHFKError):
    """A computation would exceed a configured size bound."""


class NotAKnot(GridHFKError):
    """The operation needs a one-component diagram."""


class NotACommutationPair(GridHFKError):
    """Two diagrams are not related by a single commutation move."""


class UnsupportedType(GridHFKError):
    """A (de)stabilization type that the transport code does not handle directly."""


class CycleCheckFailed(GridHFKError):
    """A canonical generator failed the cycle test.

    This points at a convention bug in the implementation, never at bad input.
    """


class DimensionMismatch(GridHFKError):
    """Matrix or vector dimensions do not agree."""
