"""Exception types raised by projprod."""


class ProjProdError(Exception):
    """Base class for all projprod errors."""


class ShapeError(ProjProdError, ValueError):
    """Operands have incompatible dimensions."""


class DegenerateInputError(ProjProdError, ValueError):
    """Input is singular, rank deficient, or otherwise degenerate."""


class NumericError(ProjProdError, ArithmeticError):
    """Input contains NaN or infinite entries."""


class FormatError(ProjProdError, ValueError):
    """A PT3 file is malformed or truncated."""
