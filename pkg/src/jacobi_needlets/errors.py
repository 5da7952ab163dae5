"""Exception types raised by the package."""


class NeedletError(Exception):
    """Base class for all errors raised here."""


class ParameterError(NeedletError, ValueError):
    """Invalid Jacobi exponents or other construction parameters."""


class DomainError(NeedletError, ValueError):
    """An argument lies outside the domain of the function."""


class SingularityError(DomainError):
    """A negative weight exponent meets its singular endpoint."""


class ConvergenceError(NeedletError, RuntimeError):
    """The tridiagonal eigensolver exceeded its iteration cap."""


class QuadratureOrderError(NeedletError, ValueError):
    """A quadrature rule is too small to integrate the requested product exactly."""


class DegreeOverflowError(NeedletError, ValueError):
    """An expansion has higher degree than a frame can represent exactly."""
