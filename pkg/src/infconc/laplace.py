"""Laplace family: distribution function and the closed-form infima C, T, H.

With E(X) = mu and Var(X) = 2 b^2 the three infima over (mu, b) are
parameter free:

    C(y) = 1/2 if y == 1 else 0
    T(y) = 1 - exp(-sqrt(2) y)
    H(y) = exp(-sqrt(2) y)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "LaplaceParams",
    "laplace_cdf",
    "laplace_C",
    "laplace_T",
    "laplace_H",
    "deviation_probability",
    "Y_ONE_TOL",
]

SQRT2 = math.sqrt(2.0)
# C is discontinuous at y = 1; floating inputs within this distance count as 1
Y_ONE_TOL = 1e-12


@dataclass(frozen=True)
class LaplaceParams:
    mu: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not (self.b > 0.0 and math.isfinite(self.b)):
            raise DomainError(f"Laplace scale must be finite and > 0, got b={self.b!r}")
        if not math.isfinite(self.mu):
            raise DomainError(f"Laplace location must be finite, got mu={self.mu!r}")

    @property
    def mean(self) -> float:
        return self.mu

    @property
    def variance(self) -> float:
        return 2.0 * self.b * self.b


def laplace_cdf(p: LaplaceParams, x: float) -> float:
    """P(X <= x) for X ~ Laplace(mu, b)."""
    z = (x - p.mu) / p.b
    if z < 0.0:
        return 0.5 * math.exp(z)
    return 1.0 - 0.5 * math.exp(-z)


def _check_y(y: float) -> None:
    if not (y > 0.0 and math.isfinite(y)):
        raise DomainError(f"y must be finite and > 0, got {y!r}")


def laplace_C(y: float) -> float:
    """inf over (mu, b) of P(X <= y E X)."""
    _check_y(y)
    return 0.5 if abs(y - 1.0) <= Y_ONE_TOL else 0.0


def laplace_T(y: float) -> float:
    """inf over (mu, b) of P(|X - mu| <= y sd(X))."""
    _check_y(y)
    return -math.expm1(-SQRT2 * y)


def laplace_H(y: float) -> float:
    """inf over (mu, b) of P(|X - mu| >= y sd(X))."""
    _check_y(y)
    return math.exp(-SQRT2 * y)


def deviation_probability(p: LaplaceParams, y: float) -> float:
    """P(|X - mu| <= sqrt(2) b y) evaluated through :func:`laplace_cdf`.

    Used to show that T does not depend on the parameters.
    """
    _check_y(y)
    half = SQRT2 * p.b * y
    return laplace_cdf(p, p.mu + half) - laplace_cdf(p, p.mu - half)
