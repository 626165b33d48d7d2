"""Adaptive iterative refinement for a*x = b.

Each step classifies the residual b - a*x by its binary exponent l (the
unique integer with 2^l |residual| in (1/2, 1]), asks a correction model for
the scaled correction at normalized residual c = 1 / (2^l |residual|), and
updates x by the bit-shifted correction 2^-l * delta.  Everything the model
sees is (c, a, beta) plus a uniform variate; the residual's sign multiplies
the returned correction.

The error b/a - x then contracts by exactly (1 - a*c*q) per step, which is
what ties a trace to the convergence-rate functionals in `rate`.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .exceptions import DegenerateProblemError
from .sampler import CorrectionModel, model_id, q_value

TRACE_COLUMNS = ("n", "x", "residual", "l", "c", "eta", "delta", "multiplier")


class ExactSolutionSignal(Exception):
    """Raised by step() on a zero residual: the iterate is already exact."""


@dataclass(frozen=True)
class ProblemInstance:
    """Equation a*x = b rescaled so that 1/2 <= a < 1.

    shift records the power of two applied: a = 2^shift * a0 (after flipping
    signs of a negative a0).  The solution b/a is preserved exactly.
    """

    a: float
    b: float
    shift: int

    @property
    def solution(self) -> float:
        return self.b / self.a


def normalize(a0: float, b0: float) -> ProblemInstance:
    """Rescale (a0, b0) by a power of two (and a sign flip for a0 < 0)."""
    if a0 == 0.0:
        raise DegenerateProblemError("a = 0 leaves no equation to solve")
    if a0 < 0.0:
        a0, b0 = -a0, -b0
    mantissa, exponent = math.frexp(a0)  # a0 = mantissa * 2^exponent
    return ProblemInstance(a=mantissa, b=math.ldexp(b0, -exponent), shift=-exponent)


def residual_exponent(res: float) -> int:
    """The unique integer l with 2^l * |res| in (1/2, 1]."""
    if res == 0.0:
        raise ValueError("zero residual has no exponent; the iterate is exact")
    mantissa, exponent = math.frexp(abs(res))
    # frexp puts the mantissa in [1/2, 1); an exact power of two (mantissa
    # exactly 1/2) belongs to the closed top of the next bracket
    return 1 - exponent if mantissa == 0.5 else -exponent


def residual_exponent_array(res: np.ndarray) -> np.ndarray:
    mantissa, exponent = np.frexp(np.abs(res))
    return np.where(mantissa == 0.5, 1 - exponent, -exponent)


@dataclass(frozen=True)
class StepRecord:
    """One refinement step: the state it saw and the correction it applied."""

    x: float
    residual: float
    l: int
    c: float
    eta: float
    delta: float
    multiplier: float


def _apply_step(
    x: float,
    inst: ProblemInstance,
    model: CorrectionModel,
    beta: float,
    eta: float,
    l: int,
) -> tuple[float, StepRecord]:
    res = inst.b - inst.a * x
    scaled = math.ldexp(abs(res), l)
    c = 1.0 / scaled
    q = q_value(model, eta, c, inst.a, beta)
    delta = math.copysign(1.0, res) * q
    x_next = x + math.ldexp(delta, -l)
    return x_next, StepRecord(
        x=x,
        residual=res,
        l=l,
        c=c,
        eta=eta,
        delta=delta,
        multiplier=1.0 - inst.a * c * q,
    )


def step(
    x: float, inst: ProblemInstance, model: CorrectionModel, beta: float, eta: float
) -> tuple[float, StepRecord]:
    """One refinement step from iterate x; raises on an exact iterate."""
    res = inst.b - inst.a * x
    if res == 0.0:
        raise ExactSolutionSignal(f"x = {x} solves the equation exactly")
    return _apply_step(x, inst, model, beta, eta, residual_exponent(res))


@dataclass(frozen=True)
class IterationTrace:
    """Complete record of one solve run.

    x has one more entry than the per-step arrays (it includes the final
    iterate); exact marks termination on a residual of exactly zero, stopped
    marks any termination before max_iter.
    """

    instance: ProblemInstance
    model: str
    beta: float
    seed: int
    stream: int
    l0_zero: bool
    x: np.ndarray
    residual: np.ndarray
    l: np.ndarray
    c: np.ndarray
    eta: np.ndarray
    delta: np.ndarray
    multiplier: np.ndarray
    exact: bool
    stopped: bool

    @property
    def n_steps(self) -> int:
        return self.residual.size

    @property
    def final_x(self) -> float:
        return float(self.x[-1])

    @property
    def final_residual(self) -> float:
        return self.instance.b - self.instance.a * self.final_x

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(",".join(TRACE_COLUMNS) + "\n")
        for n in range(self.n_steps):
            out.write(
                f"{n},{float(self.x[n])!r},{float(self.residual[n])!r},"
                f"{int(self.l[n])},{float(self.c[n])!r},{float(self.eta[n])!r},"
                f"{float(self.delta[n])!r},{float(self.multiplier[n])!r}\n"
            )
        if self.stopped:
            # early stops get a terminal row with the final state
            out.write(f"{self.n_steps},{self.final_x!r},{self.final_residual!r},,,,,\n")
        return out.getvalue()


def solve(
    inst: ProblemInstance,
    model: CorrectionModel,
    beta: float,
    seed: int,
    max_iter: int,
    tol: float = 0.0,
    l0_zero: bool = False,
    stream: int = 0,
) -> IterationTrace:
    """Run refinement steps with a deterministic uniform stream.

    Stops at max_iter, at |residual| <= tol, or at an exactly zero residual.
    l0_zero forces l = 0 on the first step (the normal-model threshold
    convention) instead of classifying the initial residual.
    """
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    if tol < 0.0:
        raise ValueError(f"tol must be >= 0, got {tol}")
    etas = rng.uniforms(seed, max_iter, stream)

    xs = [0.0]
    records: list[StepRecord] = []
    stopped = False
    x = 0.0
    for n in range(max_iter):
        res = inst.b - inst.a * x
        if abs(res) <= tol:
            stopped = True
            break
        l = 0 if (l0_zero and n == 0) else residual_exponent(res)
        x, record = _apply_step(x, inst, model, beta, float(etas[n]), l)
        records.append(record)
        xs.append(x)

    final_res = inst.b - inst.a * x
    return IterationTrace(
        instance=inst,
        model=model_id(model),
        beta=beta,
        seed=seed,
        stream=stream,
        l0_zero=l0_zero,
        x=np.array(xs),
        residual=np.array([r.residual for r in records]),
        l=np.array([r.l for r in records], dtype=int),
        c=np.array([r.c for r in records]),
        eta=np.array([r.eta for r in records]),
        delta=np.array([r.delta for r in records]),
        multiplier=np.array([r.multiplier for r in records]),
        exact=final_res == 0.0,
        stopped=stopped,
    )


def replay_errors(
    inst: ProblemInstance,
    model: CorrectionModel,
    beta: float,
    etas,
    l0_zero: bool = False,
) -> np.ndarray:
    """Rebuild the iterates from the error-multiplier recursion alone.

    Starting from the error g = b/a, each variate multiplies g by
    (1 - a*c*q(eta, c, a, beta)) with c derived from |a*g|; the iterates are
    b/a - g.  A solve() trace driven by the same variates reproduces these
    values, which is the testable face of the trajectory/recursion
    distributional equivalence.
    """
    ba = inst.solution
    g = ba
    xs = [0.0]
    for n, eta in enumerate(np.asarray(etas, dtype=float)):
        res_mag = abs(inst.a * g)
        if res_mag == 0.0:
            xs.append(ba)
            continue
        l = 0 if (l0_zero and n == 0) else residual_exponent(res_mag)
        c = 1.0 / math.ldexp(res_mag, l)
        q = q_value(model, float(eta), c, inst.a, beta)
        g = g * (1.0 - inst.a * c * q)
        xs.append(ba - g)
    return np.array(xs)
