"""Scalar special functions: log-gamma, normal CDF, regularized incomplete
beta, Gauss hypergeometric series and the Student's t CDF.

Everything here is plain binary64 arithmetic on Python floats.
"""

from __future__ import annotations

import math

from .errors import ConvergenceError, DomainError

__all__ = [
    "log_gamma",
    "log_gamma_ratio",
    "log_beta",
    "normal_cdf",
    "reg_inc_beta",
    "gauss_2f1",
    "student_t_cdf",
    "t_central_tail",
    "t_cdf_hypergeometric",
]

SQRT2 = math.sqrt(2.0)
LN10 = math.log(10.0)

# Stirling series coefficients B_{2k} / (2k (2k-1)), k = 1..7
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
)
_STIRLING_MIN = 10.0

_BETACF_MAXIT = 20000
_BETACF_EPS = 1e-15
_FPMIN = 1e-300

SERIES_REL_TOL = 1e-16
SERIES_ABS_TOL = 1e-300
SERIES_MAX_TERMS = 100_000


def log_gamma(x: float) -> float:
    """Natural logarithm of the gamma function for x > 0."""
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"log_gamma requires a finite x > 0, got {x!r}")
    return math.lgamma(x)


def _stirling_tail(x: float) -> float:
    # lnΓ(x) - [(x - 1/2) ln x - x + ln(2π)/2], valid for x >= 10
    inv = 1.0 / x
    inv2 = inv * inv
    acc = 0.0
    for coef in reversed(_STIRLING):
        acc = acc * inv2 + coef
    return acc * inv


def log_gamma_ratio(x: float, d: float) -> float:
    """ln Γ(x + d) - ln Γ(x) without cancellation when x is large.

    For x >= 10 the difference is assembled from Stirling's series so the
    O(x ln x) leading parts cancel analytically instead of in floating point.
    """
    if not x > 0.0 or not x + d > 0.0:
        raise DomainError(f"log_gamma_ratio requires x > 0 and x + d > 0, got {x!r}, {d!r}")
    if x < _STIRLING_MIN or x + d < _STIRLING_MIN:
        return math.lgamma(x + d) - math.lgamma(x)
    main = d * math.log(x) + (x + d - 0.5) * math.log1p(d / x) - d
    return main + (_stirling_tail(x + d) - _stirling_tail(x))


def log_beta(a: float, b: float) -> float:
    """ln B(a, b) = ln Γ(a) + ln Γ(b) - ln Γ(a + b)."""
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"log_beta requires a, b > 0, got {a!r}, {b!r}")
    big, small = (a, b) if a >= b else (b, a)
    return math.lgamma(small) - log_gamma_ratio(big, small)


def normal_cdf(x: float) -> float:
    """Standard normal distribution function Φ(x), via erfc for tail accuracy."""
    if math.isnan(x):
        raise DomainError("normal_cdf of NaN")
    return 0.5 * math.erfc(-x / SQRT2)


def _betacf(a: float, b: float, x: float) -> float:
    # modified Lentz evaluation of the incomplete beta continued fraction
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _BETACF_MAXIT + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETACF_EPS:
            return h
    raise ConvergenceError(
        f"incomplete beta continued fraction did not converge in {_BETACF_MAXIT} iterations "
        f"(a={a!r}, b={b!r}, x={x!r})"
    )


def _log_pair(x: float, xc: float) -> tuple[float, float]:
    # (ln x, ln(1-x)) using whichever of x, xc is the accurate small quantity
    lnx = math.log1p(-xc) if x > 0.5 else math.log(x)
    lnxc = math.log1p(-x) if xc > 0.5 else math.log(xc)
    return lnx, lnxc


def _inc_beta_pair(a: float, b: float, x: float, xc: float) -> tuple[float, float]:
    """(I_x(a, b), 1 - I_x(a, b)) with x + xc = 1 supplied by the caller.

    Passing the complement separately keeps full relative accuracy when x is
    within rounding of 1, which is the usual situation for t tail areas at
    large degrees of freedom.
    """
    if x <= 0.0:
        return 0.0, 1.0
    if xc <= 0.0:
        return 1.0, 0.0
    lnx, lnxc = _log_pair(x, xc)
    if x < (a + 1.0) / (a + b + 2.0):
        front = math.exp(a * lnx + b * lnxc - log_beta(a, b))
        val = front * _betacf(a, b, x) / a
        return val, 1.0 - val
    front = math.exp(b * lnxc + a * lnx - log_beta(a, b))
    comp = front * _betacf(b, a, xc) / b
    return 1.0 - comp, comp


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b).

    Continued fraction with the symmetry swap I_x(a,b) = 1 - I_{1-x}(b,a)
    when x > (a+1)/(a+b+2).
    """
    if not (a > 0.0 and b > 0.0) or math.isinf(a) or math.isinf(b):
        raise DomainError(f"reg_inc_beta requires finite a, b > 0, got {a!r}, {b!r}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"reg_inc_beta requires 0 <= x <= 1, got {x!r}")
    return _inc_beta_pair(a, b, x, 1.0 - x)[0]


def _hyp_series(a: float, b: float, c: float, z: float, log_scale: float = 0.0) -> float:
    # exp(log_scale) * sum_j (a)_j (b)_j / (c)_j z^j / j!, rescaled against overflow
    s = 1.0
    t = 1.0
    shift = 0.0
    for j in range(SERIES_MAX_TERMS):
        ratio = (a + j) * (b + j) / ((c + j) * (j + 1.0)) * z
        t *= ratio
        s += t
        if abs(s) > 1e280:
            s *= 1e-280
            t *= 1e-280
            shift += 280.0 * LN10
        if t == 0.0:
            break
        small = abs(t) <= SERIES_REL_TOL * abs(s) or abs(t) < SERIES_ABS_TOL
        if small:
            nxt = (a + j + 1) * (b + j + 1) / ((c + j + 1) * (j + 2.0)) * z
            if abs(nxt) < 1.0:
                break
    else:
        raise ConvergenceError(
            f"hypergeometric series did not converge in {SERIES_MAX_TERMS} terms "
            f"(a={a!r}, b={b!r}, c={c!r}, z={z!r})"
        )
    return s * math.exp(shift + log_scale)


def gauss_2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric function F(a, b; c; z) for |z| < 1.

    Summed from its power series. For negative z with nonnegative
    parameters the alternating series is first mapped through the Pfaff
    transformation onto w = z/(z-1) in (0, 1/2), where every term is
    positive: F(a,b;c;z) = (1-z)^(-b) F(c-a, b; c; w).
    """
    if not abs(z) < 1.0:
        raise DomainError(f"gauss_2f1 series requires |z| < 1, got z={z!r}")
    if c <= 0.0 and c == math.floor(c):
        raise DomainError(f"gauss_2f1 undefined for non-positive integer c={c!r}")
    if z == 0.0:
        return 1.0
    if z < 0.0:
        w = z / (z - 1.0)
        log1mz = math.log1p(-z)
        if c - a >= 0.0 and b >= 0.0:
            return _hyp_series(c - a, b, c, w, -b * log1mz)
        if a >= 0.0 and c - b >= 0.0:
            return _hyp_series(a, c - b, c, w, -a * log1mz)
    return _hyp_series(a, b, c, z)


def _check_dof(v: float) -> None:
    if not v >= 3.0 or math.isinf(v):
        raise DomainError(f"degrees of freedom must satisfy 3 <= v < inf, got {v!r}")


def t_central_tail(v: float, t: float) -> tuple[float, float]:
    """(P(|X_v| <= t), P(|X_v| > t)) for t >= 0, each to full relative accuracy.

    P(|X_v| > t) = I_{v/(v+t^2)}(v/2, 1/2).
    """
    _check_dof(v)
    if not t >= 0.0 or math.isinf(t):
        raise DomainError(f"t_central_tail requires finite t >= 0, got {t!r}")
    t2 = t * t
    denom = v + t2
    tail, central = _inc_beta_pair(0.5 * v, 0.5, v / denom, t2 / denom)
    return central, tail


def student_t_cdf(v: float, x: float) -> float:
    """Distribution function F_v(x) of Student's t with v >= 3 degrees of freedom."""
    _check_dof(v)
    if not math.isfinite(x):
        raise DomainError(f"student_t_cdf requires finite x, got {x!r}")
    central, tail = t_central_tail(v, abs(x))
    half_tail = 0.5 * tail
    return 1.0 - half_tail if x >= 0.0 else half_tail


def t_cdf_hypergeometric(v: float, x: float) -> float:
    """F_v(x) from the hypergeometric representation, valid for x^2 < v.

    1/2 + x Γ((v+1)/2) F(1/2, (v+1)/2; 3/2; -x^2/v) / (sqrt(vπ) Γ(v/2)).
    Kept as an independent cross-check of :func:`student_t_cdf`.
    """
    _check_dof(v)
    if not x * x < v:
        raise DomainError(f"hypergeometric form needs x^2 < v, got x={x!r}, v={v!r}")
    lead = math.exp(log_gamma_ratio(0.5 * v, 0.5)) / math.sqrt(v * math.pi)
    return 0.5 + x * lead * gauss_2f1(0.5, 0.5 * (v + 1.0), 1.5, -x * x / v)
