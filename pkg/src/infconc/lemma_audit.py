"""Numerical audit of the remainder bounds behind the scan thresholds.

Each check measures a remainder directly, as the difference between an
accurate binary64 evaluation and the leading terms of its expansion, and
compares it with the claimed bound. Checks that go through quadrature add
the quadrature error estimate to the measured side. Records follow one
convention: ``slack = bound - measured`` and the check passes iff ``slack > 0``.

Check ids:

    L-expansion       |L(v) - 1/v - 3/(2v^2)|                 < 3 / v^3,      v >= 100
    logf-expansion    v^2 |ln f - E0 - E1/v|                  < C1(y),        v >= V1(y)
    f-expansion       v^2 |f e^{-E0} - 1 - E1/v|              < C2(y),        v >= V2(y)
    G-expansion       |G - 1 - (3 - a)/(2v)|                  < C3(y) / v^2,  v >= V3(y)
    sqrt3-G-above-1   1 - G(v, sqrt3)                         < 0,            v >= 1318.4
    sqrt3-G-floor     1 + (5v - 4 d3)/(4v^3) - G(v, sqrt3)    < 0
    sqrt3-L-fourth    |L(v) - 1/v - 3/(2v^2) - 5/(2v^3)|      < d0 / v^4,     v >= 100
    sqrt3-logf        R1 at a = 3                             < d1
    sqrt3-f           R2 at a = 3                             < d2
    contiguous        hypergeometric contiguous-relation residual
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .errors import DomainError
from .special_functions import gauss_2f1
from .tinf import (
    VBAR0_SQRT3,
    QuadratureSpec,
    ThresholdY,
    YLike,
    G_with_error,
    _as_y,
    remainder_constants,
    u_minus_one,
)

__all__ = [
    "CheckRecord",
    "AuditReport",
    "Sqrt3Ledger",
    "SQRT3_LEDGER",
    "C0",
    "V0",
    "check_L_expansion",
    "check_L_expansion_fourth",
    "check_logf_expansion",
    "check_f_expansion",
    "check_G_expansion",
    "check_sqrt3_threshold",
    "check_sqrt3_floor",
    "contiguous_identity_residual",
    "check_contiguous_identity",
    "audit_points",
    "run_audit",
    "PRESETS",
]

C0 = 3.0
V0 = 100.0

AUDIT_Y = (1.2, 1.5, 2.0, 2.5, 3.0, 5.0)
V_MULTIPLES = (1.0, 1.5, 4.0, 20.0, 100.0)

# G - 1 shrinks like 1/v^2, so audits integrate far below the default tolerance
AUDIT_QUAD = QuadratureSpec(abs_tol=1e-15, rel_tol=5e-14, max_subdivisions=200)

PRESETS = {
    "quick": {"y": (1.5, 3.0), "mult": (1.0, 4.0, 100.0)},
    "full": {"y": AUDIT_Y, "mult": V_MULTIPLES},
}


@dataclass(frozen=True)
class CheckRecord:
    lemma: str
    point: tuple
    bound: float
    measured: float

    @property
    def slack(self) -> float:
        return self.bound - self.measured

    @property
    def passed(self) -> bool:
        return self.slack > 0.0

    def as_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "point": dict(self.point),
            "bound": self.bound,
            "measured": self.measured,
            "slack": self.slack,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class AuditReport:
    checks: tuple[CheckRecord, ...] = field(default_factory=tuple)

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckRecord]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {"all_pass": self.all_pass, "checks": [c.as_dict() for c in self.checks]}


@dataclass(frozen=True)
class Sqrt3Ledger:
    """Constants for the a = 3 refinement, each recomputed from its definition."""

    d0: float = 5.0
    d1: float = 243.0 / 4.0
    Vp1: float = 100.0

    @property
    def d2(self) -> float:
        d1 = self.d1
        return (
            9.0 / 4.0 * d1
            + 25.0 / 32.0 * 3.0**4
            + 1.5 * (d1 ** (2.0 / 3.0) * 3.0 ** (4.0 / 3.0) + d1 ** (1.0 / 3.0) * 3.0 ** (8.0 / 3.0))
        )

    @property
    def d3(self) -> float:
        return 80.0 + (self.d0 + 87.0 / 2.0) + 128.0 + 18.0 + (16.0 * self.d1 + 1775.0) / 2.0

    @property
    def Vp2(self) -> float:
        return max(self.Vp1, math.floor(9.0 / (2.0 / 7.0 ** (1.0 / 3.0) - 1.0)) + 1.0)

    @property
    def vbar0(self) -> float:
        return max(self.Vp2, 4.0 * self.d3 / 5.0)


SQRT3_LEDGER = Sqrt3Ledger()


# --- expansion pieces --------------------------------------------------------

def _E0(a: float, x: float) -> float:
    return 0.5 * a * (1.0 - x * x)


def _E1(a: float, x: float) -> float:
    x2 = x * x
    return 0.25 * a * a * (x2 * x2 - 1.0) - 0.5 * a * (x2 - 1.0)


def _log_f(v: float, a: float, x: float) -> float:
    return 0.5 * (v + 1.0) * (math.log1p(a / v) - math.log1p(a * x * x / v))


def _R1(v: float, a: float, x: float) -> float:
    return v * v * (_log_f(v, a, x) - _E0(a, x) - _E1(a, x) / v)


def _R2(v: float, a: float, x: float) -> float:
    return v * v * (math.expm1(_log_f(v, a, x) - _E0(a, x)) - _E1(a, x) / v)


def _check_x(v: float, x: float) -> None:
    u = 1.0 + u_minus_one(v)
    if not (1.0 <= x <= u * (1.0 + 4e-16)):
        raise DomainError(f"x must lie in [1, sqrt(v/(v-2))] = [1, {u!r}], got {x!r}")


def _pt(**kw) -> tuple:
    return tuple(sorted(kw.items()))


# --- lemma checks -------------------------------------------------------------

def check_L_expansion(v: float) -> CheckRecord:
    """|L(v) - 1/v - 3/(2 v^2)| < C0 / v^3 for v >= 100."""
    if not v >= V0:
        raise DomainError(f"check requires v >= {V0}, got {v!r}")
    r0 = u_minus_one(v) - 1.0 / v - 1.5 / (v * v)
    return CheckRecord("L-expansion", _pt(v=v), C0 / v**3, abs(r0))


def check_L_expansion_fourth(v: float, led: Sqrt3Ledger = SQRT3_LEDGER) -> CheckRecord:
    """|L(v) - 1/v - 3/(2v^2) - 5/(2v^3)| < d0 / v^4 for v >= 100."""
    if not v >= led.Vp1:
        raise DomainError(f"check requires v >= {led.Vp1}, got {v!r}")
    r0 = u_minus_one(v) - 1.0 / v - 1.5 / (v * v) - 2.5 / v**3
    return CheckRecord("sqrt3-L-fourth", _pt(v=v), led.d0 / v**4, abs(r0))


def check_logf_expansion(v: float, y: YLike, x: float) -> CheckRecord:
    """v^2 |ln f(v,x) - E0(x) - E1(x)/v| < C1 for v >= V1(y)."""
    t = _as_y(y)
    rc = remainder_constants(t)
    if not v >= rc.V1:
        raise DomainError(f"check requires v >= V1 = {rc.V1!r}, got {v!r}")
    _check_x(v, x)
    lemma = "sqrt3-logf" if t.exact_sqrt3 else "logf-expansion"
    return CheckRecord(lemma, _pt(v=v, y=str(t), x=x), rc.C1, abs(_R1(v, t.a, x)))


def check_f_expansion(v: float, y: YLike, x: float) -> CheckRecord:
    """v^2 |f(v,x) e^{-E0(x)} - 1 - E1(x)/v| < C2 for v >= V2(y)."""
    t = _as_y(y)
    rc = remainder_constants(t)
    if not v >= rc.V2:
        raise DomainError(f"check requires v >= V2 = {rc.V2!r}, got {v!r}")
    _check_x(v, x)
    lemma = "sqrt3-f" if t.exact_sqrt3 else "f-expansion"
    return CheckRecord(lemma, _pt(v=v, y=str(t), x=x), rc.C2, abs(_R2(v, t.a, x)))


def check_G_expansion(v: float, y: YLike, q: QuadratureSpec | None = None) -> CheckRecord:
    """|G(v,y) - 1 - (3-a)/(2v)| < C3 / v^2 for v >= V3(y)."""
    t = _as_y(y)
    rc = remainder_constants(t)
    if not v >= rc.V3:
        raise DomainError(f"check requires v >= V3 = {rc.V3!r}, got {v!r}")
    g, err = G_with_error(v, t, q or AUDIT_QUAD)
    rg = g - 1.0 - (3.0 - t.a) / (2.0 * v)
    return CheckRecord("G-expansion", _pt(v=v, y=str(t)), rc.C3 / (v * v), abs(rg) + err)


def check_sqrt3_threshold(v: float, q: QuadratureSpec | None = None) -> CheckRecord:
    """G(v, sqrt 3) > 1 for v >= 1318.4, recorded as 1 - G < 0."""
    if not v >= VBAR0_SQRT3:
        raise DomainError(f"check requires v >= {VBAR0_SQRT3}, got {v!r}")
    g, err = G_with_error(v, ThresholdY.sqrt3(), q or AUDIT_QUAD)
    return CheckRecord("sqrt3-G-above-1", _pt(v=v), 0.0, 1.0 - g + err)


def check_sqrt3_floor(v: float, q: QuadratureSpec | None = None,
                      led: Sqrt3Ledger = SQRT3_LEDGER) -> CheckRecord:
    """G(v, sqrt 3) > 1 + (5v - 4 d3)/(4 v^3), recorded as floor - G < 0."""
    if not v >= VBAR0_SQRT3:
        raise DomainError(f"check requires v >= {VBAR0_SQRT3}, got {v!r}")
    g, err = G_with_error(v, ThresholdY.sqrt3(), q or AUDIT_QUAD)
    floor = 1.0 + (5.0 * v - 4.0 * led.d3) / (4.0 * v**3)
    return CheckRecord("sqrt3-G-floor", _pt(v=v), 0.0, floor - g + err)


def contiguous_identity_residual(v: float, y: YLike) -> float:
    """Residual of the contiguous relation linking the (v+3)/2 and (v+1)/2 series."""
    t = _as_y(y)
    a = t.a
    if not a < v:
        raise DomainError(f"contiguous relation needs y^2 < v, got y^2={a!r}, v={v!r}")
    z = -a / v
    upper = 0.5 * (v + 1.0) * gauss_2f1(0.5, 0.5 * (v + 3.0), 1.5, z)
    lower = 0.5 * v * gauss_2f1(0.5, 0.5 * (v + 1.0), 1.5, z)
    closed = 0.5 * math.exp(-0.5 * (v + 1.0) * math.log1p(a / v))
    return abs(upper - lower - closed)


def check_contiguous_identity(v: float, y: YLike, tol: float = 1e-10) -> CheckRecord:
    return CheckRecord("contiguous", _pt(v=v, y=str(_as_y(y))), tol, contiguous_identity_residual(v, y))


# --- grids ----------------------------------------------------------------------

def _x_points(v: float) -> tuple[float, float, float]:
    u = 1.0 + u_minus_one(v)
    return (1.0, 0.5 * (1.0 + u), u)


def audit_points(preset: str = "full") -> list[Callable[[], CheckRecord]]:
    """Deferred checks for a preset, in report order."""
    if preset not in PRESETS:
        raise DomainError(f"unknown audit preset {preset!r}; choose from {sorted(PRESETS)}")
    ys = PRESETS[preset]["y"]
    mult = PRESETS[preset]["mult"]
    jobs: list[Callable[[], CheckRecord]] = []

    jobs += [lambda v=V0 * k: check_L_expansion(v) for k in mult]
    for y in ys:
        rc = remainder_constants(y)
        for k in mult:
            v = rc.V1 * k
            jobs += [lambda v=v, y=y, x=x: check_logf_expansion(v, y, x) for x in _x_points(v)]
    for y in ys:
        rc = remainder_constants(y)
        for k in mult:
            v = rc.V2 * k
            jobs += [lambda v=v, y=y, x=x: check_f_expansion(v, y, x) for x in _x_points(v)]
    for y in ys:
        rc = remainder_constants(y)
        jobs += [lambda v=rc.V3 * k, y=y: check_G_expansion(v, y) for k in mult]

    led = SQRT3_LEDGER
    s3 = ThresholdY.sqrt3()
    jobs += [lambda v=led.Vp1 * k: check_L_expansion_fourth(v) for k in mult]
    for k in mult:
        v = led.Vp1 * k
        jobs += [lambda v=v, x=x: check_logf_expansion(v, s3, x) for x in _x_points(v)]
        jobs += [lambda v=v, x=x: check_f_expansion(v, s3, x) for x in _x_points(v)]
    jobs += [lambda v=VBAR0_SQRT3 * k: check_sqrt3_threshold(v) for k in mult]
    jobs += [lambda v=VBAR0_SQRT3 * k: check_sqrt3_floor(v) for k in mult]

    for v in (3.0, 5.0, 10.0, 50.0, 200.0):
        for y in (0.5, 1.0, 2.0):
            if y * y < v - 2.0:
                jobs.append(lambda v=v, y=y: check_contiguous_identity(v, y))
    if preset == "full":
        jobs.append(lambda: check_contiguous_identity(1e4, 2.0, tol=1e-9))
    return jobs


def run_audit(preset: str = "full", threads: int = 1) -> AuditReport:
    """Evaluate every check of a preset; order of the report never depends on ``threads``."""
    jobs = audit_points(preset)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            checks = list(pool.map(lambda f: f(), jobs))
    else:
        checks = [f() for f in jobs]
    return AuditReport(tuple(checks))


def summarize(report: AuditReport) -> dict[str, tuple[int, int, float]]:
    """Per check id: (n_checks, n_passed, min slack ratio).

    The ratio is slack / bound, or the raw slack where the bound is zero.
    """
    out: dict[str, tuple[int, int, float]] = {}
    for c in report.checks:
        n, ok, worst = out.get(c.lemma, (0, 0, math.inf))
        ratio = c.slack / c.bound if c.bound else c.slack
        out[c.lemma] = (n + 1, ok + c.passed, min(worst, ratio))
    return out

