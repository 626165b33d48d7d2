#!/usr/bin/env python3
"""Walk one refinement trajectory per correction model and watch it contract.

The solver never divides by the coefficient: each step classifies the
residual by its binary exponent, asks the model for a correction to the
rescaled one-shot equation, and shifts it back.  With the conservative
(1/2, 1) truncation every step is guaranteed not to overshoot; the wider
intervals and the raw normal law are faster but can wander.
"""

import numpy as np

from annealsolve import (
    BitRange,
    BoltzmannModel,
    NormalModel,
    SupportKind,
    normalize,
    preset,
    solve,
)


def main():
    inst = normalize(3.0, 5.0)  # solve 3x = 5, rescaled to 0.75 x = 1.25
    print(f"normalized instance: a={inst.a}, b={inst.b}, shift={inst.shift}")
    print(f"solution b/a = {inst.solution}\n")

    models = {
        "normal": NormalModel(),
        "a2 (sign-aware interval)": preset("a2"),
        "a4 (conservative)": preset("a4"),
        "boltzmann 3-qubit": BoltzmannModel(SupportKind.POSITIVE, BitRange(-2, 1)),
    }
    beta = 2.0
    for name, model in models.items():
        trace = solve(inst, model, beta=beta, seed=7, max_iter=25)
        errors = np.abs(inst.solution - trace.x)
        with np.errstate(divide="ignore"):
            log10_err = np.log10(errors)
        print(f"--- {name} (beta={beta}) ---")
        print(f"steps: {trace.n_steps}, exact hit: {trace.exact}")
        shown = ", ".join(
            "exact" if not np.isfinite(v) else f"{v:.1f}" for v in log10_err[::5]
        )
        print(f"log10 |x_n - b/a| every 5 steps: {shown}")
        print(f"final x = {trace.final_x!r}\n")

    print("per-step record of the first three a2 steps:")
    trace = solve(inst, preset("a2"), beta=beta, seed=7, max_iter=3)
    print(trace.to_csv())


if __name__ == "__main__":
    main()
