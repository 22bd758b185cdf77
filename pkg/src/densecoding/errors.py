"""Exception types raised by the library."""


class DenseCodingError(Exception):
    """Base class for all library errors."""


class InvalidParameter(DenseCodingError, ValueError):
    pass


class InvalidDimensions(DenseCodingError, ValueError):
    pass


class NotHermitian(DenseCodingError, ValueError):
    pass


class NotXState(DenseCodingError, ValueError):
    pass


class InvalidDensityMatrix(DenseCodingError, ValueError):
    """A matrix violates Hermiticity, unit trace or positivity."""


class NotConverged(DenseCodingError, ArithmeticError):
    pass


class PostSelectionImpossible(DenseCodingError, ArithmeticError):
    """The heralded measurement branch has (numerically) zero probability."""
