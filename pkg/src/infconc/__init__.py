"""Infimum concentration, anti-concentration and mean-threshold functions
for the Laplace and Student's t families."""

__version__ = "0.1.0"

from .errors import ConvergenceError, DomainError

__all__ = ["ConvergenceError", "DomainError", "__version__"]
