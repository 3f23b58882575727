"""Welch's t-test and the small numeric helpers the experiment harness needs."""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

from scipy.special import betainc


class WelchResult(NamedTuple):
    t: float
    df: float
    p: float
    degenerate: bool = False


def mean(xs: Sequence[float]) -> float:
    return sum(xs) / len(xs)


def sample_sd(xs: Sequence[float]) -> float:
    """Bessel-corrected (n-1) sample standard deviation."""
    n = len(xs)
    if n < 2:
        raise ValueError("need at least two observations")
    m = mean(xs)
    return math.sqrt(sum((x - m) ** 2 for x in xs) / (n - 1))


def student_t_two_sided_p(t: float, df: float) -> float:
    """Two-sided tail probability of Student's t via the regularized incomplete beta."""
    if df <= 0:
        raise ValueError("df must be positive")
    if math.isinf(t):
        return 0.0
    x = df / (df + t * t)
    return float(betainc(df / 2.0, 0.5, x))


def welch_t(a: Sequence[float], b: Sequence[float]) -> WelchResult:
    """Two-sided Welch's t-test for unequal variances.

    Degenerate samples (both variances zero) yield t = 0, p = 1 when the means
    agree, and an infinite t with p = 0 and the degenerate flag set when they
    differ.
    """
    na, nb = len(a), len(b)
    if na < 2 or nb < 2:
        raise ValueError("welch_t needs at least two observations per sample")
    ma, mb = mean(a), mean(b)
    va = sum((x - ma) ** 2 for x in a) / (na - 1)
    vb = sum((x - mb) ** 2 for x in b) / (nb - 1)
    if va == 0.0 and vb == 0.0:
        if ma == mb:
            return WelchResult(t=0.0, df=float(na + nb - 2), p=1.0)
        t = math.inf if ma > mb else -math.inf
        return WelchResult(t=t, df=float(na + nb - 2), p=0.0, degenerate=True)
    sa, sb = va / na, vb / nb
    pooled = sa + sb
    t = (ma - mb) / math.sqrt(pooled)
    df = pooled * pooled / (sa * sa / (na - 1) + sb * sb / (nb - 1))
    return WelchResult(t=t, df=df, p=student_t_two_sided_p(t, df))


def significance_stars(p: float) -> str:
    """Conventional significance marks: * / ** / *** below 0.05 / 0.01 / 0.001."""
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""
