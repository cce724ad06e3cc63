"""Exception types raised by fracphase."""


class FracPhaseError(ValueError):
    """Base class for all library errors."""


class GridTooSmallError(FracPhaseError):
    """The grid does not cover the effective support of the signal."""


class GridMismatchError(FracPhaseError):
    """Two objects that must share a grid do not."""


class AsymmetricGridError(FracPhaseError):
    """An operation that needs a grid symmetric about zero got another one."""


class NotSymplecticError(FracPhaseError):
    """A 2x2 matrix does not have unit determinant."""


class DegenerateAnglesError(FracPhaseError):
    """Angles coincide modulo pi, or violate the required ordering."""


class InfeasibleTargetsError(FracPhaseError):
    """No lower-triangular symplectic matrix reaches the requested lines."""


class NonRationalAngleError(FracPhaseError):
    """An angle difference is not known to be a rational multiple of pi."""
