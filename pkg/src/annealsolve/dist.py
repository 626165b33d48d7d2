"""Probability kernels: Boltzmann laws on finite supports and (truncated) normal quantiles.

The Boltzmann law over a finite support puts mass proportional to
``exp(-beta^2 * H(v))`` on each support value ``v`` -- note the *squared*
inverse-temperature parameter, which makes the wide-register limit come out
as a normal law with variance ``1 / (2 a^2 beta^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.special as sc

# Largest magnitude fed to erfinv; erf saturates to +-1 above ~5.9 sigma and
# the inverse then pins at ~5.86, so quantiles of intervals stretching that
# far into a tail saturate instead of overflowing.
ERFINV_ARG_MAX = 1.0 - 1e-16

_SQRT2 = float(np.sqrt(2.0))
_SQRT2PI = float(np.sqrt(2.0 * np.pi))


@dataclass(frozen=True)
class DiscreteDist:
    """A distribution on a strictly increasing finite support, CDF-queryable."""

    support: np.ndarray
    pmf: np.ndarray
    cdf: np.ndarray

    def quantile(self, u):
        return quantile(self, u)


def boltzmann_dist(beta: float, support, target: float, a: float) -> DiscreteDist:
    """Boltzmann law with energy H(v) = (a*v - target)^2 on a finite support.

    The energy is shifted by its minimum before exponentiation, which leaves
    the law unchanged and avoids overflow; far-out support points may
    underflow to an exact zero mass.
    """
    support = np.asarray(support, dtype=float)
    if support.ndim != 1 or support.size == 0:
        raise ValueError("support must be a nonempty 1-d array")
    if support.size > 1 and not np.all(np.diff(support) > 0.0):
        raise ValueError("support must be strictly increasing")
    if beta <= 0.0:
        raise ValueError(f"beta must be positive, got {beta}")
    if a == 0.0:
        raise ValueError("a must be nonzero")
    h = (a * support - target) ** 2
    w = np.exp(-(beta * beta) * (h - h.min()))
    pmf = w / w.sum()
    cdf = np.cumsum(pmf)
    cdf[-1] = 1.0  # cumsum is within 1e-12 of 1; pin so u=1 queries are exact
    return DiscreteDist(support=support, pmf=pmf, cdf=cdf)


def boltzmann_cdf_rows(support, targets, a: float, beta: float) -> np.ndarray:
    """CDF matrix of the Boltzmann law for many targets at once.

    Row ``k`` is the CDF over ``support`` for energy ``(a*v - targets[k])^2``.
    Shared by the sampler and the rate machinery, which sweep targets 1/c.
    """
    support = np.asarray(support, dtype=float)
    targets = np.asarray(targets, dtype=float)
    h = (a * support[None, :] - targets[:, None]) ** 2
    w = np.exp(-(beta * beta) * (h - h.min(axis=1, keepdims=True)))
    cdf = np.cumsum(w, axis=1)
    cdf /= cdf[:, -1:].copy()
    cdf[:, -1] = 1.0
    return cdf


def quantile(dist: DiscreteDist, u):
    """Generalized inverse CDF: the smallest support value with cdf >= u.

    At u=0 returns the smallest support value carrying positive mass (the
    right limit of the inverse), at u=1 the largest such value.
    """
    u_arr = np.asarray(u, dtype=float)
    if np.any((u_arr < 0.0) | (u_arr > 1.0)):
        raise ValueError("u must lie in [0, 1]")
    idx = np.searchsorted(dist.cdf, u_arr, side="left")
    idx = np.minimum(idx, dist.support.size - 1)
    positive = dist.pmf > 0.0
    if np.any(u_arr == 0.0):
        idx = np.where(u_arr == 0.0, int(np.argmax(positive)), idx)
    if np.any(u_arr == 1.0):
        last_pos = dist.pmf.size - 1 - int(np.argmax(positive[::-1]))
        idx = np.where(u_arr == 1.0, last_pos, idx)
    values = dist.support[idx]
    return float(values) if np.isscalar(u) else values


def erf(x):
    """Error function (2/sqrt(pi)) * integral of exp(-t^2) from 0 to x."""
    out = sc.erf(np.asarray(x, dtype=float))
    return float(out) if np.isscalar(x) else out


def erfinv(y):
    """Inverse error function on (-1, 1)."""
    y_arr = np.asarray(y, dtype=float)
    if np.any(np.abs(y_arr) >= 1.0):
        raise ValueError("erfinv argument must satisfy |y| < 1")
    out = sc.erfinv(y_arr)
    return float(out) if np.isscalar(y) else out


# Acklam's rational approximation of the standard normal quantile; the three
# branches cover the lower tail, the central bulk, and the upper tail.
_P_LOW = 0.02425
_ACKLAM_A = (
    -3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
    1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00,
)
_ACKLAM_B = (
    -5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
    6.680131188771972e01, -1.328068155288572e01,
)
_ACKLAM_C = (
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
    -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00,
)
_ACKLAM_D = (
    7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
    3.754408661907416e00,
)


def _acklam_tail(q: np.ndarray) -> np.ndarray:
    c1, c2, c3, c4, c5, c6 = _ACKLAM_C
    d1, d2, d3, d4 = _ACKLAM_D
    num = ((((c1 * q + c2) * q + c3) * q + c4) * q + c5) * q + c6
    den = (((d1 * q + d2) * q + d3) * q + d4) * q + 1.0
    return num / den


def std_normal_quantile(u, refine: bool = True):
    """Standard normal quantile Phi^{-1}(u) for u in (0, 1).

    Rational approximation (abs error ~1e-9) plus one optional Halley
    refinement step against the erf-based CDF, which brings the error to the
    rounding level.
    """
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any((u_arr <= 0.0) | (u_arr >= 1.0)):
        raise ValueError("u must lie strictly inside (0, 1)")

    # work in the lower half, where the erfc-based CDF is tail-stable; the
    # complement 1 - u is exact for u >= 1/2
    flip = u_arr > 0.5
    v = np.where(flip, 1.0 - u_arr, u_arr)

    x = np.empty_like(v)
    lo = v < _P_LOW
    if np.any(lo):
        x[lo] = _acklam_tail(np.sqrt(-2.0 * np.log(v[lo])))
    mid = ~lo
    if np.any(mid):
        a1, a2, a3, a4, a5, a6 = _ACKLAM_A
        b1, b2, b3, b4, b5 = _ACKLAM_B
        q = v[mid] - 0.5
        r = q * q
        num = (((((a1 * r + a2) * r + a3) * r + a4) * r + a5) * r + a6) * q
        den = ((((b1 * r + b2) * r + b3) * r + b4) * r + b5) * r + 1.0
        x[mid] = num / den

    if refine:
        # one Halley step; skipped in the extreme tail where exp(x^2/2)
        # would overflow (the raw approximation is already ~1e-9 there)
        safe = x * x < 600.0
        xs = x[safe]
        err = 0.5 * sc.erfc(-xs / _SQRT2) - v[safe]
        step = err * _SQRT2PI * np.exp(0.5 * xs * xs)
        x[safe] = xs - step / (1.0 + 0.5 * xs * step)

    x = np.where(flip, -x, x)
    return float(x[0]) if np.isscalar(u) else x.reshape(np.shape(u))


@dataclass(frozen=True)
class TruncNormalParams:
    """Normal law with mean mu and s.d. sigma conditioned on the interval (d1, d2).

    A reversed interval is normalized by swapping the endpoints.
    """

    mu: float
    sigma: float
    d1: float
    d2: float

    def __post_init__(self):
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.d1 == self.d2:
            raise ValueError("interval endpoints must differ")
        if self.d1 > self.d2:
            lo, hi = self.d2, self.d1
            object.__setattr__(self, "d1", lo)
            object.__setattr__(self, "d2", hi)


def trunc_normal_quantile_arrays(mu, sigma, d1: float, d2: float, u) -> np.ndarray:
    """Array core of the truncated normal quantile; broadcasts mu/sigma/u."""
    s2 = np.asarray(sigma, dtype=float) * _SQRT2
    e1 = sc.erf((d1 - mu) / s2)
    e2 = sc.erf((d2 - mu) / s2)
    arg = (1.0 - u) * e1 + u * e2
    arg = np.clip(arg, -ERFINV_ARG_MAX, ERFINV_ARG_MAX)
    x = mu + s2 * sc.erfinv(arg)
    return np.clip(x, d1, d2)


def trunc_normal_quantile(params: TruncNormalParams, u):
    """Quantile of the truncated normal law via the erf^{-1} closed form.

        q(u) = mu + sigma*sqrt(2) * erfinv((1-u) erf(z1) + u erf(z2)),
        z_k = (d_k - mu) / (sigma*sqrt(2))

    The erfinv argument is clamped away from +-1, so quantiles saturate
    instead of diverging when an endpoint lies many sigmas into a tail; the
    result is always inside [d1, d2].
    """
    u_arr = np.asarray(u, dtype=float)
    if np.any((u_arr < 0.0) | (u_arr > 1.0)):
        raise ValueError("u must lie in [0, 1]")
    x = trunc_normal_quantile_arrays(params.mu, params.sigma, params.d1, params.d2, u_arr)
    return float(x) if np.isscalar(u) else x
