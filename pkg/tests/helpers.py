"""Shared test oracles, independent of the library code paths they check."""

from __future__ import annotations

import math

import numpy as np
import scipy.stats


def normal_cdf(x: float) -> float:
    # erfc form stays accurate in the lower tail
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def bisect_quantile(cdf, u: float, lo: float, hi: float, iters: int = 200) -> float:
    """Quantile by plain bisection on a monotone CDF."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if cdf(mid) < u:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def normal_quantile_oracle(u: float) -> float:
    if u > 0.5:  # the erfc form is only lower-tail stable
        return -bisect_quantile(normal_cdf, 1.0 - u, -10.0, 0.5)
    return bisect_quantile(normal_cdf, u, -10.0, 0.5)


def trunc_normal_cdf(t: float, mu: float, sigma: float, d1: float, d2: float) -> float:
    z1 = normal_cdf((d1 - mu) / sigma)
    z2 = normal_cdf((d2 - mu) / sigma)
    return (normal_cdf((t - mu) / sigma) - z1) / (z2 - z1)


def trunc_normal_quantile_oracle(mu, sigma, d1, d2, u) -> float:
    return bisect_quantile(lambda t: trunc_normal_cdf(t, mu, sigma, d1, d2), u, d1, d2)


def chisq_pvalue(counts: np.ndarray, probs: np.ndarray) -> float:
    """Goodness-of-fit p-value; bins with expectation < 5 are pooled."""
    counts = np.asarray(counts, dtype=float)
    expected = probs * counts.sum()
    keep = expected >= 5.0
    observed = np.append(counts[keep], counts[~keep].sum())
    expected = np.append(expected[keep], expected[~keep].sum())
    if expected[-1] < 1e-12:
        observed, expected = observed[:-1], expected[:-1]
    stat = float(((observed - expected) ** 2 / expected).sum())
    return float(scipy.stats.chi2.sf(stat, df=len(expected) - 1))


def twos_complement_value(bits, r: int, p: int) -> float:
    """Independent expansion of the two's-complement encoding (LSB first)."""
    theta = -math.ldexp(1.0, p) + math.ldexp(1.0, r)
    value = bits[-1] * theta
    for k, bit in enumerate(bits[:-1]):
        value += bit * math.ldexp(1.0, r + k)
    return value
