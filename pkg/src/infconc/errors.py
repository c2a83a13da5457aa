"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested function."""


class ConvergenceError(ArithmeticError):
    """An iterative evaluation (series, continued fraction, quadrature) did not converge."""
