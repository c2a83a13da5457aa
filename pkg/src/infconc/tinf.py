"""Infima of the concentration and anti-concentration probabilities over
the Student's t family.

For X_v ~ t(v), v = 3, 4, ..., the per-v probability

    J_v(y) = P(|X_v| <= y sqrt(v/(v-2))) = 2 F_v(y sqrt(v/(v-2))) - 1

is eventually monotone in v. The sign of G(v, y) - 1, where

    G(v, y) = v * integral_1^{sqrt(v/(v-2))} ((v + y^2)/(v + y^2 x^2))^((v+1)/2) dx,

decides whether J_{v+2} < J_v (G > 1) or J_{v+2} > J_v (G < 1). The
constant ledger gives a degrees-of-freedom threshold v0(y) past which that
sign is fixed, so T(y) = inf_v J_v and H(y) = inf_v (1 - J_v) reduce to a
finite scan plus, where appropriate, the normal limit.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Literal, Union

from scipy import integrate

from .errors import ConvergenceError, DomainError
from .special_functions import normal_cdf, t_central_tail

__all__ = [
    "Branch",
    "ThresholdY",
    "RemainderConstants",
    "ConstantLedger",
    "QuadratureSpec",
    "InfimumResult",
    "LIMIT",
    "SQRT3_TOL",
    "VBAR0_SQRT3",
    "J_TOL",
    "remainder_constants",
    "constants_ledger",
    "scan_bound",
    "u_minus_one",
    "threshold",
    "J",
    "central_and_tail",
    "G",
    "G_with_error",
    "theorem_C",
    "classify_branch",
    "search_min",
    "theorem_T",
    "theorem_H",
]

SQRT3_TOL = 1e-12
VBAR0_SQRT3 = 1318.4
LIMIT = "limit"
# absolute accuracy budget for J_v and 1 - J_v
J_TOL = 1e-13

Objective = Literal["T", "H"]


class Branch(str, Enum):
    LE_ONE = "y<=1"
    BELOW_SQRT3 = "1<y<sqrt3"
    SQRT3 = "y=sqrt3"
    ABOVE_SQRT3 = "y>sqrt3"


@dataclass(frozen=True)
class ThresholdY:
    """Deviation multiple y > 0, optionally pinned to exactly sqrt(3).

    ``exact_sqrt3`` forces the y = sqrt(3) branch and uses a = 3 exactly,
    which a binary64 ``y`` cannot represent.
    """

    y: float
    exact_sqrt3: bool = False

    def __post_init__(self):
        if not (self.y > 0.0 and math.isfinite(self.y)):
            raise DomainError(f"y must be finite and > 0, got {self.y!r}")

    @classmethod
    def sqrt3(cls) -> "ThresholdY":
        return cls(math.sqrt(3.0), exact_sqrt3=True)

    @classmethod
    def parse(cls, text: str) -> "ThresholdY":
        """Accept a decimal literal or the symbol ``sqrt3``."""
        if text.strip().lower() in ("sqrt3", "sqrt(3)"):
            return cls.sqrt3()
        return cls(float(text))

    @property
    def a(self) -> float:
        return 3.0 if self.exact_sqrt3 else self.y * self.y

    @property
    def is_sqrt3(self) -> bool:
        return self.exact_sqrt3 or abs(self.a - 3.0) <= SQRT3_TOL

    def __str__(self) -> str:
        return "sqrt3" if self.exact_sqrt3 else repr(self.y)


YLike = Union[float, ThresholdY]


def _as_y(y: YLike) -> ThresholdY:
    return y if isinstance(y, ThresholdY) else ThresholdY(float(y))


@dataclass(frozen=True)
class RemainderConstants:
    C1: float
    C2: float
    C3: float
    V1: float
    V2: float
    V3: float


@dataclass(frozen=True)
class ConstantLedger:
    C0: float
    C1: float
    C2: float
    C3: float
    V0: float
    V1: float
    V2: float
    V3: float
    v0: float

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("C0", "C1", "C2", "C3", "V0", "V1", "V2", "V3", "v0")}


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class InfimumResult:
    """Value of T or H together with where the infimum is attained.

    ``attained_at`` is an integer v or :data:`LIMIT` (v -> infinity).
    ``scan_value``/``scan_argmin`` keep the finite-scan minimum even when
    the normal limit wins; both are None when no scan was needed.
    """

    value: float
    attained_at: Union[int, str]
    branch: Branch
    search_bound: int | None
    scan_value: float | None = None
    scan_argmin: int | None = None
    limit_value: float | None = None

    @property
    def is_limit(self) -> bool:
        return self.attained_at == LIMIT

    @property
    def at_boundary(self) -> bool:
        """True when the minimum sits on the artificial scan bound."""
        return self.search_bound is not None and self.attained_at == self.search_bound


# --- constant ledger -------------------------------------------------------

def remainder_constants(y: YLike) -> RemainderConstants:
    """C1, C2, C3, V1, V2, V3 for the given y (defined for every y > 0)."""
    t = _as_y(y)
    a = t.a
    yy = t.y
    C1 = 2.0 * a**3 + 0.75 * a**2
    C2 = (
        2.25 * C1
        + 25.0 / 32.0 * a**4
        + 1.5 * (C1 ** (2.0 / 3.0) * a ** (4.0 / 3.0) + C1 ** (1.0 / 3.0) * a ** (8.0 / 3.0))
    )
    C3 = 13.0 / 3.0 * a**2 + 18.0 * a + 2.0 * C2 + 11.0
    V1 = max(100.0, 8.0 * a)
    V2 = max(V1, 1.5 * a**2, math.sqrt(2.0 * C1))
    V3 = max(V2, 2.0 + 2.0 * a / (1.0 + 2.0 * yy), 2.0 + 2.0 * a**2 / (1.0 + 2.0 * a))
    return RemainderConstants(C1, C2, C3, V1, V2, V3)


def constants_ledger(y: YLike) -> ConstantLedger:
    """Full ledger including the scan threshold v0(y).

    Raises ZeroDivisionError at y = sqrt(3), where v0 is undefined and
    the fixed threshold :data:`VBAR0_SQRT3` applies instead.
    """
    t = _as_y(y)
    rc = remainder_constants(t)
    gap = abs(t.a - 3.0)
    if t.exact_sqrt3 or gap <= SQRT3_TOL:
        raise ZeroDivisionError("v0(y) is undefined at y = sqrt(3); use VBAR0_SQRT3")
    v0 = max(rc.V3, 2.0 * rc.C3 / gap + 1.0)
    return ConstantLedger(3.0, rc.C1, rc.C2, rc.C3, 100.0, rc.V1, rc.V2, rc.V3, v0)


def scan_bound(y: YLike) -> int:
    """Largest v examined by the finite scans: [v0(y)] + 3 (1321 at sqrt 3)."""
    t = _as_y(y)
    if classify_branch(t) is Branch.LE_ONE:
        return 4
    if t.is_sqrt3:
        return math.floor(VBAR0_SQRT3) + 3
    return math.floor(constants_ledger(t).v0) + 3


# --- per-v probabilities ---------------------------------------------------

def u_minus_one(v: float) -> float:
    """sqrt(v/(v-2)) - 1 without cancellation."""
    return math.expm1(-0.5 * math.log1p(-2.0 / v))


def threshold(v: float, y: YLike) -> float:
    """y sqrt(v/(v-2)), the one-standard-deviation-scaled cut-off."""
    t = _as_y(y)
    scale = 1.0 + 2.0 / (v - 2.0)
    if t.exact_sqrt3:
        return math.sqrt(3.0 * scale)
    return t.y * math.sqrt(scale)


def central_and_tail(v: float, y: YLike) -> tuple[float, float]:
    """(J_v, 1 - J_v) each evaluated directly."""
    if not v > 2.0:
        raise DomainError(f"v must exceed 2, got {v!r}")
    return t_central_tail(v, threshold(v, y))


def J(v: float, y: YLike) -> float:
    """J_v(y) = 2 F_v(y sqrt(v/(v-2))) - 1."""
    return central_and_tail(v, y)[0]


def G_with_error(v: float, y: YLike, q: QuadratureSpec | None = None) -> tuple[float, float]:
    """(G(v, y), estimated absolute error) by adaptive Gauss-Kronrod quadrature.

    Integrates over m = x - 1 in [0, L(v)], evaluating the integrand as
    exp(((v+1)/2) * (log1p(a/v) - log1p(a (1+m)^2 / v))).
    """
    q = q or QuadratureSpec()
    if not v >= 3.0:
        raise DomainError(f"G requires v >= 3, got {v!r}")
    a = _as_y(y).a
    half = 0.5 * (v + 1.0)
    base = math.log1p(a / v)

    def integrand(m: float) -> float:
        return v * math.exp(half * (base - math.log1p(a * (1.0 + m) ** 2 / v)))

    upper = u_minus_one(v)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err, _info, *msg = integrate.quad(
            integrand, 0.0, upper,
            epsabs=q.abs_tol, epsrel=q.rel_tol, limit=q.max_subdivisions, full_output=1,
        )
    if msg:
        raise ConvergenceError(f"G({v!r}, {y}) quadrature failed: {msg[0]}")
    if err > max(q.abs_tol, q.rel_tol * abs(val)):
        raise ConvergenceError(f"G({v!r}, {y}) quadrature error {err:.3g} above tolerance")
    return val, err


def G(v: float, y: YLike, q: QuadratureSpec | None = None) -> float:
    """Quadrature criterion: G > 1 iff J_{v+2} < J_v."""
    return G_with_error(v, y, q)[0]


# --- theorem -------------------------------------------------------------------

def theorem_C(y: float) -> float:
    """inf_v P(X_v <= y E X_v) = P(X_v <= 0) = 1/2."""
    _as_y(y)
    return 0.5


def classify_branch(y: YLike) -> Branch:
    t = _as_y(y)
    if t.is_sqrt3:
        return Branch.SQRT3
    if t.y <= 1.0:
        return Branch.LE_ONE
    if t.a < 3.0:
        return Branch.BELOW_SQRT3
    return Branch.ABOVE_SQRT3


def _chunk_min(t: ThresholdY, objective: Objective, lo: int, hi: int) -> tuple[float, int]:
    idx = 0 if objective == "T" else 1
    best = (math.inf, -1)
    for v in range(lo, hi):
        val = central_and_tail(v, t)[idx]
        if val < best[0]:
            best = (val, v)
    return best


def search_min(y: YLike, v_max: int, objective: Objective, threads: int = 1) -> tuple[float, int]:
    """Minimum of the T- or H-objective over integer v in [3, v_max].

    Returns (value, smallest minimising v). Work is split into contiguous
    chunks; the reduction is a min over (value, v) pairs, so the answer is
    the same for every ``threads``.
    """
    if objective not in ("T", "H"):
        raise DomainError(f"objective must be 'T' or 'H', got {objective!r}")
    v_max = int(v_max)
    if v_max < 3:
        raise DomainError(f"v_max must be >= 3, got {v_max}")
    t = _as_y(y)
    threads = max(1, int(threads))
    n = v_max - 2
    if threads == 1 or n < 2 * threads:
        return _chunk_min(t, objective, 3, v_max + 1)
    step = -(-n // threads)
    edges = [(lo, min(lo + step, v_max + 1)) for lo in range(3, v_max + 1, step)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda e: _chunk_min(t, objective, *e), edges))
    return min(parts)


def _normal_central(t: ThresholdY) -> float:
    return 1.0 - 2.0 * normal_cdf(-t.y)


def _normal_tail(t: ThresholdY) -> float:
    return 2.0 * normal_cdf(-t.y)


def _scan_limit(t: ThresholdY, v_max: int | None) -> int:
    return scan_bound(t) if v_max is None else int(v_max)


def _finite_or_limit(branch, bound, scan, limit) -> InfimumResult:
    # a finite v wins exact ties with the limit
    val, v = scan
    if val <= limit:
        return InfimumResult(val, v, branch, bound, val, v, limit)
    return InfimumResult(limit, LIMIT, branch, bound, val, v, limit)


def theorem_T(y: YLike, threads: int = 1, v_max: int | None = None) -> InfimumResult:
    """T(y) = inf over v >= 3 of P(|X_v| <= y sd(X_v)).

    ``v_max`` overrides the scan bound [v0(y)] + 3 in the scanning branches;
    outside that bound the result carries no guarantee.
    """
    t = _as_y(y)
    branch = classify_branch(t)
    if branch is Branch.LE_ONE:
        limit = _normal_central(t)
        return InfimumResult(limit, LIMIT, branch, None, limit_value=limit)
    bound = _scan_limit(t, v_max)
    scan = search_min(t, bound, "T", threads)
    if branch is Branch.ABOVE_SQRT3:
        return InfimumResult(scan[0], scan[1], branch, bound, scan[0], scan[1])
    return _finite_or_limit(branch, bound, scan, _normal_central(t))


def theorem_H(y: YLike, threads: int = 1, v_max: int | None = None) -> InfimumResult:
    """H(y) = inf over v >= 3 of P(|X_v| >= y sd(X_v))."""
    t = _as_y(y)
    branch = classify_branch(t)
    if branch is Branch.LE_ONE:
        bound = 4
    else:
        bound = _scan_limit(t, v_max)
    scan = search_min(t, bound, "H", threads)
    if branch is Branch.ABOVE_SQRT3:
        return _finite_or_limit(branch, bound, scan, _normal_tail(t))
    return InfimumResult(scan[0], scan[1], branch, bound, scan[0], scan[1])
