"""Location/dispersion estimates and Student-t confidence intervals.

The per-gene interval used by the confidence-interval crossover is the
bilateral t interval: mean +/- t_{n-1,(1+confidence)/2} * s / sqrt(n), with s
the sample (n-1 denominator) standard deviation. The t quantile is computed
numerically from the regularized incomplete beta function and inverted by
bisection, so any sample size works without tables.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "SampleStats",
    "ConfidenceInterval",
    "sample_stats",
    "t_cdf",
    "t_quantile",
    "confidence_interval",
]

_BETA_EPS = 1e-15
_BETA_MAXIT = 300
_TINY = 1e-300


@dataclass(frozen=True)
class SampleStats:
    """Sample mean and standard deviation (n-1 denominator) of n values."""

    mean: float
    stddev: float
    count: int


@dataclass(frozen=True)
class ConfidenceInterval:
    """Symmetric interval [lower, upper] centered on the sample mean."""

    lower: float
    center: float
    upper: float


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (Lentz's method)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _BETA_MAXIT + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETA_EPS:
            return h
    raise RuntimeError(f"incomplete beta continued fraction failed to converge for a={a}, b={b}, x={x}")


def _betai(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if x < 0.0 or x > 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_bt = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    bt = math.exp(ln_bt)
    # use the fraction on the side where it converges fast
    if x < (a + 1.0) / (a + b + 2.0):
        return bt * _betacf(a, b, x) / a
    return 1.0 - bt * _betacf(b, a, 1.0 - x) / b


def t_cdf(x: float, df: int) -> float:
    """CDF of Student's t distribution with df degrees of freedom."""
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    if x == 0.0:
        return 0.5
    tail = 0.5 * _betai(0.5 * df, 0.5, df / (df + x * x))
    return 1.0 - tail if x > 0.0 else tail


@lru_cache(maxsize=None)
def _t_quantile_upper(df: int, prob: float) -> float:
    """Quantile for prob in (0.5, 1), by bisection on the monotone CDF."""
    hi = 1.0
    while t_cdf(hi, df) < prob:
        hi *= 2.0
        if hi > 1e300:
            raise RuntimeError(f"t quantile bracket expansion failed for df={df}, prob={prob}")
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if t_cdf(mid, df) < prob:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def t_quantile(df: int, prob: float) -> float:
    """Inverse CDF of Student's t distribution.

    Returns q such that t_cdf(q, df) == prob to within 1e-9. The q for
    prob < 0.5 is the exact negation of the mirrored upper quantile.
    """
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    if not 0.0 < prob < 1.0:
        raise ValueError(f"prob must lie strictly inside (0, 1), got {prob}")
    if prob == 0.5:
        return 0.0
    if prob < 0.5:
        return -_t_quantile_upper(df, 1.0 - prob)
    return _t_quantile_upper(df, prob)


def sample_stats(values) -> SampleStats:
    """Mean and sample standard deviation of at least two values."""
    vals = [float(v) for v in values]
    n = len(vals)
    if n < 2:
        raise ValueError(f"need at least two values for dispersion estimates, got {n}")
    lo = min(vals)
    hi = max(vals)
    if lo == hi:
        # constant sample: force the exact answer instead of accumulating
        # rounding residue through the sums
        return SampleStats(mean=lo, stddev=0.0, count=n)
    mean = math.fsum(vals) / n
    var = math.fsum((v - mean) ** 2 for v in vals) / (n - 1)
    return SampleStats(mean=mean, stddev=math.sqrt(var), count=n)


def confidence_interval(values, confidence: float) -> ConfidenceInterval:
    """Bilateral t confidence interval for the mean of the values.

    Half-width is t_{n-1,(1+confidence)/2} * stddev / sqrt(n); a constant
    sample degenerates to the point interval [c, c].
    """
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must lie strictly inside (0, 1), got {confidence}")
    stats = sample_stats(values)
    q = t_quantile(stats.count - 1, 0.5 * (1.0 + confidence))
    half = q * stats.stddev / math.sqrt(stats.count)
    return ConfidenceInterval(
        lower=stats.mean - half,
        center=stats.mean,
        upper=stats.mean + half,
    )
