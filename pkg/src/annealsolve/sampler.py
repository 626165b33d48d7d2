"""The unified correction law q(u, c, a, beta).

Each correction model maps a uniform variate u to the scaled correction an
annealer would return for the scaled equation ``a * delta = 1/c`` (the
normalized residual magnitude is 1/c; the residual's sign is applied by the
solver, never here):

* ``NormalModel`` -- quantile of N(1/(a c), 1/(2 a^2 beta^2)), the
  infinite-register limit on the whole line.
* ``TruncNormalModel(d1, d2)`` -- the same law conditioned on (d1, d2), the
  infinite-register limit of an interval encoding.  Four named presets trade
  off sign awareness and correction-size bounds; the (1/2, 1) preset is the
  conservative one whose per-step error multiplier never exceeds 1.
* ``BoltzmannModel(kind, range)`` -- the exact finite-register law on a
  signed-symmetric or positive dyadic-grid support.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dist import boltzmann_cdf_rows, std_normal_quantile, trunc_normal_quantile_arrays
from .encoding import BitRange, SupportKind, SupportSpec, enumerate_support

# clamp for uniform variates fed to the unbounded normal quantile
_U_CLIP = 1e-15

# chunk bound for the (draws x support) CDF matrix
_MAX_CELLS = 1 << 22


@dataclass(frozen=True)
class NormalModel:
    pass


@dataclass(frozen=True)
class TruncNormalModel:
    d1: float
    d2: float

    def __post_init__(self):
        if self.d1 >= self.d2:
            raise ValueError(f"need d1 < d2, got ({self.d1}, {self.d2})")


@dataclass(frozen=True)
class BoltzmannModel:
    kind: SupportKind
    range: BitRange

    def __post_init__(self):
        if self.kind not in (SupportKind.SIGNED_SYMMETRIC, SupportKind.POSITIVE):
            raise ValueError("Boltzmann correction supports are signed or positive grids")
        if self.range.p > 1:
            # corrections are bounded by 2, so registers never need p > 1
            raise ValueError(f"correction register needs p <= 1, got p={self.range.p}")

    @property
    def n_qubits(self) -> int:
        return SupportSpec(self.kind, self.range).n_bits

    def support(self) -> np.ndarray:
        return _support(self.kind, self.range)


CorrectionModel = NormalModel | TruncNormalModel | BoltzmannModel

# truncation intervals of the four named algorithms
PRESETS = {
    "a1": TruncNormalModel(-2.0, 2.0),
    "a2": TruncNormalModel(0.0, 2.0),
    "a3": TruncNormalModel(0.5, 2.0),
    "a4": TruncNormalModel(0.5, 1.0),
}

_SUPPORT_CACHE: dict[tuple[SupportKind, int, int], np.ndarray] = {}


def _support(kind: SupportKind, bit_range: BitRange) -> np.ndarray:
    key = (kind, bit_range.r, bit_range.p)
    cached = _SUPPORT_CACHE.get(key)
    if cached is None:
        cached = enumerate_support(SupportSpec(kind, bit_range))
        cached.flags.writeable = False
        _SUPPORT_CACHE[key] = cached
    return cached


def preset(algorithm_id: str) -> TruncNormalModel:
    """Look up one of the named truncated-normal algorithms a1..a4."""
    try:
        return PRESETS[algorithm_id.lower()]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm_id!r}; expected one of a1..a4") from None


def model_id(model: CorrectionModel) -> str:
    """Canonical text id used in CLI specs and result tables."""
    if isinstance(model, NormalModel):
        return "normal"
    if isinstance(model, TruncNormalModel):
        for name, preset_model in PRESETS.items():
            if preset_model == model:
                return name
        return f"truncnormal:d1={model.d1:g}:d2={model.d2:g}"
    if isinstance(model, BoltzmannModel):
        return f"boltzmann:{model.kind.value}:r={model.range.r}:p={model.range.p}"
    raise TypeError(f"not a correction model: {model!r}")


def _boltzmann_q(support: np.ndarray, u, c, a: float, beta: float):
    u_b, c_b = np.broadcast_arrays(np.asarray(u, float), np.asarray(c, float))
    shape = u_b.shape
    u_flat = u_b.ravel()
    c_flat = c_b.ravel()
    n, k = u_flat.size, support.size
    idx = np.empty(n, dtype=np.intp)
    chunk = max(1, _MAX_CELLS // max(k, 1))
    for start in range(0, n, chunk):
        sl = slice(start, min(start + chunk, n))
        cdf = boltzmann_cdf_rows(support, 1.0 / c_flat[sl], a, beta)
        part = (cdf < u_flat[sl, None]).sum(axis=1)
        zero = u_flat[sl] == 0.0
        if np.any(zero):
            # u=0 means the smallest value carrying positive mass
            part = np.where(zero, (cdf <= 0.0).sum(axis=1), part)
        idx[sl] = part
    return support[idx].reshape(shape)


def q_value(model: CorrectionModel, u, c, a: float, beta: float):
    """Scaled correction drawn through a model at uniform quantile u.

    u and c broadcast together; a and beta are scalars.  c is the reciprocal
    of the normalized residual (inside the solver loop c is in [1, 2); the
    rate analysis also evaluates the closed endpoint c = 2 and the first
    iterate of the literal zero-exponent convention may fall outside).
    """
    u_arr = np.asarray(u, dtype=float)
    c_arr = np.asarray(c, dtype=float)
    if np.any((u_arr < 0.0) | (u_arr > 1.0)):
        raise ValueError("u must lie in [0, 1]")
    if np.any(c_arr <= 0.0):
        raise ValueError("c must be positive")
    if not a > 0.0:
        raise ValueError(f"a must be positive, got {a}")
    if not beta > 0.0:
        raise ValueError(f"beta must be positive, got {beta}")

    scalar = np.isscalar(u) and np.isscalar(c)
    if isinstance(model, NormalModel):
        mu = 1.0 / (a * c_arr)
        sigma = 1.0 / (np.sqrt(2.0) * a * beta)
        out = mu + sigma * std_normal_quantile(np.clip(u_arr, _U_CLIP, 1.0 - _U_CLIP))
    elif isinstance(model, TruncNormalModel):
        mu = 1.0 / (a * c_arr)
        sigma = 1.0 / (np.sqrt(2.0) * a * beta)
        out = trunc_normal_quantile_arrays(mu, sigma, model.d1, model.d2, u_arr)
    elif isinstance(model, BoltzmannModel):
        out = _boltzmann_q(model.support(), u_arr, c_arr, a, beta)
    else:
        raise TypeError(f"not a correction model: {model!r}")
    return float(out) if scalar else out
