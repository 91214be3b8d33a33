"""Shared exception types."""


class ParameterRangeError(ValueError):
    """An argument lies outside the range the implementation supports."""


class PrecisionLossError(ArithmeticError):
    """A series or quadrature failed to converge within its iteration cap."""


class NormalizationError(ArithmeticError):
    """A normalization denominator vanished (dark fringe, degenerate scan)."""
