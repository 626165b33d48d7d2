"""Convergence-rate functionals of the correction models.

For a model with correction quantile q, the worst-case per-step error
multiplier at uniform quantile u is

    r(u, a, beta) = max over c in [1, 2] of |1 - c * a * q(u, c, a, beta)|

(the closed endpoint c = 2 is included even though the solver's normalized
residual stays in [1, 2)).  Its log-mean E(a, beta) = integral of ln r over
u in [0, 1] certifies almost-sure convergence to b/a whenever it is
negative, and E_max(beta) = max over a in [1/2, 1] of E(a, beta) is the
pessimistic headline curve per model.

Continuous models use a dense c-grid plus golden-section refinement and
Gauss-Legendre quadrature in u; Boltzmann models are integrated exactly,
piece by piece, over the breakpoints of their staircase quantiles.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dist import boltzmann_cdf_rows, std_normal_quantile, trunc_normal_quantile_arrays
from .sampler import (
    BoltzmannModel,
    CorrectionModel,
    NormalModel,
    TruncNormalModel,
    model_id,
    q_value,
)

# r values below this floor are clamped before the log; the clamp is flagged
# so a sentinel like the exact-sampler's r = 0 stays visible
LOG_FLOOR = 1e-300

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_U_CLIP = 1e-15  # mirrors the sampler's clamp for the unbounded normal model
_GS_ITERS_C = 24
_GS_ITERS_A = 14

RATE_CSV_COLUMNS = ("model_id", "beta", "a", "kind", "value", "clamped")


class QuadratureDisagreement(RuntimeError):
    """Raised by the opt-in node-doubling check when quadratures disagree."""


@dataclass(frozen=True)
class RatePoint:
    """One cell of a rate table: E or E_max of a model at (a, beta)."""

    model_id: str
    beta: float
    a: float | None
    kind: str  # "E" or "Emax"
    value: float
    clamped: bool


@lru_cache(maxsize=16)
def _gl_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped onto [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def _q_grid(model, u, c, a: float, beta: float):
    """Correction quantile on broadcastable (u, c) arrays; scalar a, beta."""
    if isinstance(model, NormalModel):
        sigma = 1.0 / (math.sqrt(2.0) * a * beta)
        z = std_normal_quantile(np.clip(u, _U_CLIP, 1.0 - _U_CLIP))
        return 1.0 / (a * c) + sigma * z
    if isinstance(model, TruncNormalModel):
        sigma = 1.0 / (math.sqrt(2.0) * a * beta)
        return trunc_normal_quantile_arrays(1.0 / (a * c), sigma, model.d1, model.d2, u)
    if callable(model):
        return model(u, c, a, beta)
    raise TypeError(f"not a continuous correction model: {model!r}")


def _r_profile_continuous(
    model, u_nodes: np.ndarray, a: float, beta: float, c_steps: int, refine: bool
) -> np.ndarray:
    """r(u) for every node at once: dense c-grid, then per-u golden section."""
    c = np.linspace(1.0, 2.0, c_steps)
    f = np.abs(1.0 - (c[:, None] * a) * _q_grid(model, u_nodes[None, :], c[:, None], a, beta))
    best = np.argmax(f, axis=0)
    r = f[best, np.arange(u_nodes.size)]
    if refine and c_steps > 2:
        h = 1.0 / (c_steps - 1)
        lo = np.maximum(1.0, c[best] - h)
        hi = np.minimum(2.0, c[best] + h)
        for _ in range(_GS_ITERS_C):
            x1 = hi - _GOLDEN * (hi - lo)
            x2 = lo + _GOLDEN * (hi - lo)
            f1 = np.abs(1.0 - (x1 * a) * _q_grid(model, u_nodes, x1, a, beta))
            f2 = np.abs(1.0 - (x2 * a) * _q_grid(model, u_nodes, x2, a, beta))
            r = np.maximum(r, np.maximum(f1, f2))
            go_right = f1 < f2
            lo = np.where(go_right, x1, lo)
            hi = np.where(go_right, hi, x2)
    return r


def r_func(
    model: CorrectionModel, u: float, a: float, beta: float,
    c_steps: int = 257, refine: bool = True,
) -> float:
    """Worst multiplier |1 - c*a*q| over c in [1, 2] at one quantile u.

    Boltzmann quantiles are piecewise constant in c, so the dense grid alone
    is used for them; continuous models add golden-section refinement around
    the best grid point (the maximand need not be concave, which is why the
    grid stays dense).
    """
    if not 0.0 <= u <= 1.0:
        raise ValueError("u must lie in [0, 1]")
    if isinstance(model, BoltzmannModel):
        c = np.linspace(1.0, 2.0, c_steps)
        q = q_value(model, u, c, a, beta)
        return float(np.abs(1.0 - c * a * q).max())
    return float(_r_profile_continuous(model, np.array([u]), a, beta, c_steps, refine)[0])


def _E_boltzmann(model: BoltzmannModel, a: float, beta: float, c_steps: int) -> tuple[float, bool]:
    """Exact E: r(u) is constant between the CDF levels of all grid laws."""
    support = model.support()
    c = np.linspace(1.0, 2.0, c_steps)
    cdf = boltzmann_cdf_rows(support, 1.0 / c, a, beta)
    levels = np.unique(np.concatenate([cdf[:, :-1].ravel(), (0.0, 1.0)]))
    levels = levels[(levels >= 0.0) & (levels <= 1.0)]
    mids = 0.5 * (levels[1:] + levels[:-1])
    lengths = np.diff(levels)
    r = np.zeros(mids.size)
    last = support.size - 1
    for j in range(c_steps):
        idx = np.minimum(np.searchsorted(cdf[j], mids, side="left"), last)
        np.maximum(r, np.abs(1.0 - (c[j] * a) * support[idx]), out=r)
    clamped = bool(np.any(r < LOG_FLOOR))
    return float(lengths @ np.log(np.maximum(r, LOG_FLOOR))), clamped


# relative dip depth below which ln r is treated as (near-)singular
_DIP_RATIO = 0.05


def _refine_dip(model, a, beta, c_steps, lo: float, hi: float) -> float:
    """Locate the minimum of r(u) inside [lo, hi] by golden section.

    The grid-only profile is accurate enough to place the split point; the
    refined value of r is irrelevant here.
    """
    for _ in range(22):
        x1 = hi - _GOLDEN * (hi - lo)
        x2 = lo + _GOLDEN * (hi - lo)
        f1, f2 = _r_profile_continuous(
            model, np.array([x1, x2]), a, beta, c_steps, refine=False
        )
        if f1 > f2:
            lo = x1
        else:
            hi = x2
    return 0.5 * (lo + hi)


def _E_continuous(
    model, a: float, beta: float, c_steps: int, gl_nodes: int, refine: bool
) -> tuple[float, bool]:
    u, w = _gl_rule(gl_nodes)
    r = _r_profile_continuous(model, u, a, beta, c_steps, refine)
    k = int(np.argmin(r))
    if r[k] < _DIP_RATIO * r.max():
        # r nearly vanishes at an interior point, so ln r has a spike there;
        # split the quadrature at the dip, where Gauss-Legendre absorbs a
        # log endpoint singularity far better than an interior one
        lo = float(u[k - 1]) if k > 0 else 0.0
        hi = float(u[k + 1]) if k < u.size - 1 else 1.0
        split = min(max(_refine_dip(model, a, beta, c_steps, lo, hi), 1e-9), 1.0 - 1e-9)
        half_u, half_w = _gl_rule(gl_nodes // 2)
        clamped = False
        total = 0.0
        for left, width in ((0.0, split), (split, 1.0 - split)):
            ru = _r_profile_continuous(model, left + width * half_u, a, beta, c_steps, refine)
            clamped |= bool(np.any(ru < LOG_FLOOR))
            total += width * float(half_w @ np.log(np.maximum(ru, LOG_FLOOR)))
        return total, clamped
    clamped = bool(np.any(r < LOG_FLOOR))
    return float(w @ np.log(np.maximum(r, LOG_FLOOR))), clamped


def _E_with_flag(
    model, a: float, beta: float, c_steps: int, gl_nodes: int, refine: bool, check: bool
) -> tuple[float, bool]:
    if isinstance(model, BoltzmannModel):
        return _E_boltzmann(model, a, beta, c_steps)
    value, clamped = _E_continuous(model, a, beta, c_steps, gl_nodes, refine)
    if check:
        value2, _ = _E_continuous(model, a, beta, c_steps, 2 * gl_nodes, refine)
        if abs(value - value2) > 1e-4 * max(1.0, abs(value2)):
            raise QuadratureDisagreement(
                f"E({a}, {beta}) moved from {value} to {value2} when doubling "
                f"the {gl_nodes}-node quadrature"
            )
    return value, clamped


def E_func(
    model: CorrectionModel, a: float, beta: float,
    c_steps: int = 257, gl_nodes: int = 256, refine: bool = True, check: bool = False,
) -> float:
    """Mean log multiplier E(a, beta) = integral of ln r(u, a, beta) du.

    check=True re-evaluates continuous models with doubled quadrature nodes
    and raises if the two values differ by more than 1e-4; Boltzmann models
    are exact and ignore the quadrature options.
    """
    if not a > 0.0:
        raise ValueError(f"a must be positive, got {a}")
    if not beta > 0.0:
        raise ValueError(f"beta must be positive, got {beta}")
    return _E_with_flag(model, a, beta, c_steps, gl_nodes, refine, check)[0]


def _E_max_flag(
    model, beta: float, a_steps: int, c_steps: int, gl_nodes: int, refine: bool
) -> tuple[float, bool]:
    a_grid = np.linspace(0.5, 1.0, a_steps)
    clamped = False
    values = np.empty(a_steps)
    for k, a in enumerate(a_grid):
        values[k], flag = _E_with_flag(model, float(a), beta, c_steps, gl_nodes, refine, False)
        clamped |= flag

    def evaluate(a: float) -> float:
        nonlocal clamped
        value, flag = _E_with_flag(model, a, beta, c_steps, gl_nodes, refine, False)
        clamped |= flag
        return value

    k = int(np.argmax(values))
    best = float(values[k])
    # local refinement inside the bracketing grid cells
    lo = float(a_grid[max(0, k - 1)])
    hi = float(a_grid[min(a_steps - 1, k + 1)])
    if hi > lo:
        x1 = hi - _GOLDEN * (hi - lo)
        x2 = lo + _GOLDEN * (hi - lo)
        f1, f2 = evaluate(x1), evaluate(x2)
        for _ in range(_GS_ITERS_A):
            if f1 < f2:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + _GOLDEN * (hi - lo)
                f2 = evaluate(x2)
            else:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - _GOLDEN * (hi - lo)
                f1 = evaluate(x1)
        best = max(best, f1, f2)
    return best, clamped


def E_max(
    model: CorrectionModel, beta: float,
    a_steps: int = 65, c_steps: int = 257, gl_nodes: int = 256, refine: bool = True,
) -> float:
    """Worst E over the coefficient range: max of E(a, beta) for a in [1/2, 1].

    Dense grid plus golden-section refinement around the best cell; a
    negative value certifies convergence for every grid coefficient.
    """
    if not beta > 0.0:
        raise ValueError(f"beta must be positive, got {beta}")
    return _E_max_flag(model, beta, a_steps, c_steps, gl_nodes, refine)[0]


def rate_curve(
    models, betas,
    a_steps: int = 65, c_steps: int = 257, gl_nodes: int = 256, refine: bool = True,
    threads: int = 1,
) -> list[RatePoint]:
    """E_max per (model, beta), as a long-format table sorted by (model_id, beta).

    Cells are independent; with threads > 1 they are evaluated in a pool,
    and the output order does not depend on the thread count.
    """
    models = list(models)
    if not models:
        raise ValueError("model list is empty")
    betas = [float(b) for b in betas]

    def ident(model) -> str:
        if callable(model) and not isinstance(model, CorrectionModel):
            return getattr(model, "__name__", "custom")
        return model_id(model)

    cells = sorted(
        ((ident(m), m, beta) for m in models for beta in betas),
        key=lambda cell: (cell[0], cell[2]),
    )

    def work(cell) -> RatePoint:
        mid, model, beta = cell
        value, clamped = _E_max_flag(model, beta, a_steps, c_steps, gl_nodes, refine)
        return RatePoint(model_id=mid, beta=beta, a=None, kind="Emax", value=value, clamped=clamped)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(work, cells))
    return [work(cell) for cell in cells]


def rate_points_to_csv(points) -> str:
    """Serialize RatePoints; the a column is empty for Emax rows."""
    lines = [",".join(RATE_CSV_COLUMNS)]
    for pt in points:
        a_txt = "" if pt.a is None else repr(float(pt.a))
        lines.append(
            f"{pt.model_id},{float(pt.beta)!r},{a_txt},{pt.kind},"
            f"{float(pt.value)!r},{int(pt.clamped)}"
        )
    return "\n".join(lines) + "\n"
