"""Monte-Carlo and direct-quadrature oracles for the analytic modules.

Sample streams are built from fixed-size blocks. Block ``b`` of seed ``s``
is drawn from its own Philox-4x64-10 generator keyed by ``(b << 64) | s``
and is always generated in full before slicing, so any window of a stream
depends only on (seed, position). That makes streams partitionable:

    stream(seed, n) == stream(seed, k) ++ stream(seed, n - k, start=k)

and lets blocks be produced on several threads without changing a single
bit of the result.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate, stats

from .errors import ConvergenceError, DomainError
from .laplace import LaplaceParams, laplace_cdf

__all__ = [
    "RNG_ALGORITHM",
    "BLOCK_SIZE",
    "McEstimate",
    "sample_laplace",
    "sample_student_t",
    "estimate_laplace_T",
    "estimate_t_central",
    "cdf_by_density_quadrature",
    "ks_uniformity",
]

RNG_ALGORITHM = "numpy.random.Philox-4x64-10/block-keyed-65536"
BLOCK_SIZE = 1 << 16
SEED_MAX = (1 << 64) - 1
# shift so uniforms from Generator.random (multiples of 2^-53 in [0, 1)) land in (0, 1)
_HALF_ULP = 2.0 ** -54

DENSITY_ABS_ERR = 1e-11


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    n: int
    std_err: float
    seed: int
    algorithm: str = RNG_ALGORITHM

    @classmethod
    def from_count(cls, hits: int, n: int, seed: int) -> "McEstimate":
        p = hits / n
        return cls(p_hat=p, n=n, std_err=math.sqrt(p * (1.0 - p) / n), seed=seed)

    def within(self, target: float, k: float = 4.0) -> bool:
        """True when |p_hat - target| <= k standard errors.

        A zero standard error (all hits or all misses) only accepts an exact match.
        """
        return abs(self.p_hat - target) <= k * self.std_err

    def as_dict(self) -> dict:
        return asdict(self)


def _check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise DomainError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise DomainError(f"seed must fit in 64 unsigned bits, got {seed}")
    return seed


def _check_count(n: int, start: int) -> None:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"sample size must be an integer >= 1, got {n!r}")
    if start < 0:
        raise DomainError(f"stream offset must be >= 0, got {start!r}")


def _block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=(block << 64) | seed))


def _stream(block_fn, n: int, seed: int, start: int, threads: int) -> np.ndarray:
    first = start // BLOCK_SIZE
    last = (start + n - 1) // BLOCK_SIZE
    blocks = range(first, last + 1)

    def make(b: int) -> np.ndarray:
        return block_fn(_block_generator(seed, b))

    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(make, blocks))
    else:
        parts = [make(b) for b in blocks]
    whole = np.concatenate(parts)
    off = start - first * BLOCK_SIZE
    return whole[off:off + n]


def _laplace_block(p: LaplaceParams):
    def block(gen: np.random.Generator) -> np.ndarray:
        u = gen.random(BLOCK_SIZE) + _HALF_ULP
        # inverse of the Laplace distribution function, split at the median
        low = u < 0.5
        x = np.empty_like(u)
        x[low] = p.mu + p.b * np.log(2.0 * u[low])
        x[~low] = p.mu - p.b * np.log(2.0 * (1.0 - u[~low]))
        return x
    return block


def sample_laplace(p: LaplaceParams, n: int, seed: int, start: int = 0,
                   threads: int = 1) -> np.ndarray:
    """``n`` Laplace(mu, b) draws by inverse CDF, from position ``start`` of the seed's stream."""
    if not isinstance(p, LaplaceParams):
        raise DomainError("sample_laplace expects LaplaceParams")
    _check_count(n, start)
    return _stream(_laplace_block(p), n, _check_seed(seed), start, threads)


def _t_block(v: float):
    def block(gen: np.random.Generator) -> np.ndarray:
        z = gen.standard_normal(BLOCK_SIZE)
        w = gen.chisquare(v, BLOCK_SIZE)
        return z / np.sqrt(w / v)
    return block


def sample_student_t(v: float, n: int, seed: int, start: int = 0,
                     threads: int = 1) -> np.ndarray:
    """``n`` Student-t draws as N(0,1) / sqrt(chi2_v / v)."""
    if not (v >= 3.0 and math.isfinite(v)):
        raise DomainError(f"degrees of freedom must satisfy 3 <= v < inf, got {v!r}")
    _check_count(n, start)
    return _stream(_t_block(float(v)), n, _check_seed(seed), start, threads)


def estimate_laplace_T(p: LaplaceParams, y: float, n: int, seed: int,
                       threads: int = 1) -> McEstimate:
    """Empirical P(|X - mu| <= y sd(X)) for X ~ Laplace(mu, b)."""
    if not (y > 0.0 and math.isfinite(y)):
        raise DomainError(f"y must be finite and > 0, got {y!r}")
    x = sample_laplace(p, n, seed, threads=threads)
    hits = int(np.count_nonzero(np.abs(x - p.mu) <= math.sqrt(p.variance) * y))
    return McEstimate.from_count(hits, n, seed)


def estimate_t_central(v: float, t: float, n: int, seed: int,
                       threads: int = 1) -> McEstimate:
    """Empirical P(|X_v| <= t)."""
    if not (t >= 0.0 and math.isfinite(t)):
        raise DomainError(f"t must be finite and >= 0, got {t!r}")
    x = sample_student_t(v, n, seed, threads=threads)
    hits = int(np.count_nonzero(np.abs(x) <= t))
    return McEstimate.from_count(hits, n, seed)


def cdf_by_density_quadrature(v: float, x: float) -> float:
    """F_v(x) = 1/2 + sign(x) * integral of the t density over [0, |x|].

    The normalizing constant comes straight from math.lgamma, independent of
    the cancellation-free ratio used by the analytic modules.
    """
    if not (v >= 3.0 and math.isfinite(v)):
        raise DomainError(f"degrees of freedom must satisfy 3 <= v < inf, got {v!r}")
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    if x == 0.0:
        return 0.5
    log_norm = math.lgamma(0.5 * (v + 1.0)) - math.lgamma(0.5 * v) - 0.5 * math.log(v * math.pi)
    expo = -0.5 * (v + 1.0)

    def density(s: float) -> float:
        return math.exp(log_norm + expo * math.log1p(s * s / v))

    val, err, _info, *msg = integrate.quad(
        density, 0.0, abs(x), epsabs=1e-13, epsrel=1e-13, limit=200, full_output=1,
    )
    if err > DENSITY_ABS_ERR:
        detail = msg[0] if msg else f"error estimate {err:.3g}"
        raise ConvergenceError(f"density quadrature for F_{v}({x}) failed: {detail}")
    return 0.5 + math.copysign(val, x)


def ks_uniformity(p: LaplaceParams, n: int, seed: int, alpha: float = 1e-3) -> tuple[float, float]:
    """(KS statistic, critical value) for laplace_cdf applied to inverse-CDF draws.

    The draws are uniform on [0, 1] iff the sampler inverts the distribution
    function correctly.
    """
    u = np.array([laplace_cdf(p, float(s)) for s in sample_laplace(p, n, seed)])
    stat = float(stats.kstest(u, "uniform").statistic)
    crit = float(stats.kstwo.ppf(1.0 - alpha, n))
    return stat, crit
