#!/usr/bin/env python3
"""Monte Carlo checks of the normal-model convergence thresholds.

For corrections drawn from N(1/(a c), 1/(2 a^2 beta^2)) the per-step error
multiplies by c_n |xi| / (sqrt(2) beta), so the decay rate of ln|x_n - b/a|
sits between -ln(2 beta e^(gamma/2)) and -ln(beta e^(gamma/2)), and below
beta = e^(-gamma/2)/2 ~ 0.3747 the iteration blows up almost surely.
"""

import math

import numpy as np

from annealsolve import (
    EULER_GAMMA,
    LOG_ABS_NORMAL_MEAN,
    NormalModel,
    log_abs_normal_mean_check,
    mc_convergence,
)


def main():
    print(f"E ln|xi| closed form: {LOG_ABS_NORMAL_MEAN:.6f}")
    estimate = log_abs_normal_mean_check(10**6, seed=1)
    print(f"Monte Carlo (1e6 samples): {estimate:.6f}  (diff {estimate - LOG_ABS_NORMAL_MEAN:+.2e})\n")

    for beta in (1.0, 2.0, 4.0):
        lo = -math.log(2.0 * beta * math.exp(EULER_GAMMA / 2.0))
        hi = -math.log(beta * math.exp(EULER_GAMMA / 2.0))
        summary = mc_convergence(
            NormalModel(), a=0.5, b=0.7, beta=beta, n_traj=1000, n_iter=25, seed=3
        )
        print(f"beta={beta}: slope {summary.slope:+.3f}  theoretical window "
              f"[{lo:+.3f}, {hi:+.3f}]  outcome {summary.s_scaled_outcome.value}")

    print("\nbelow the divergence threshold:")
    summary = mc_convergence(
        NormalModel(), a=0.5, b=0.7, beta=0.25, n_traj=500, n_iter=400, seed=3
    )
    print(f"beta=0.25: diverged fraction {summary.diverged_fraction:.3f} "
          f"(|x| > 1e6 within 400 steps)")

    print("\nscaled-error classification (s^n times the error):")
    for s in (1.0, 2.0, 8.0):
        summary = mc_convergence(
            NormalModel(), a=0.5, b=0.7, beta=2.0, s=s, n_traj=500, n_iter=25, seed=3
        )
        print(f"s={s}: {summary.s_scaled_outcome.value}")


if __name__ == "__main__":
    main()
