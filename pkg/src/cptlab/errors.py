"""Exception hierarchy shared by the symbolic and numerical layers."""


class CPTLabError(Exception):
    """Base class for every error raised by :mod:`cptlab`."""


class ParityViolation(CPTLabError, ValueError):
    """sigma has an odd part or alpha has an even part."""


class NonRealCoefficient(CPTLabError, ValueError):
    """A coefficient that must be real carries an imaginary part."""


class EvenGridSize(CPTLabError, ValueError):
    pass


class NonPositiveWidth(CPTLabError, ValueError):
    pass


class NumericalError(CPTLabError, ArithmeticError):
    """Failure of a numerical kernel (mapped to exit code 3 by the CLI)."""


class SingularMatrix(NumericalError):
    pass


class NoConvergence(NumericalError):
    """QR/QL iteration exceeded its budget.

    ``partial`` holds whatever eigenvalues had converged (may be None).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotHermitian(CPTLabError, ValueError):
    pass


class DegenerateLevel(NumericalError):
    """Biorthogonal normalization <phi_L|phi_R> is (numerically) zero."""
