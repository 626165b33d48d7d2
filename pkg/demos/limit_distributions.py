#!/usr/bin/env python3
"""Watch finite-register Boltzmann laws converge to their normal limits.

As the register widens, the Boltzmann law over the signed dyadic grid
approaches N(b/a, 1/(2 a^2 beta^2)), and over an affine grid on [d1, d2) it
approaches the correspondingly truncated normal.  Both are measured here by
the exact Kolmogorov-Smirnov distance (no sampling involved).
"""

from annealsolve import BitRange, limit_check


def table(rows, label):
    print(f"--- {label} ---")
    print(f"{'r':>5} {'p':>3} {'points':>8} {'KS distance':>14}")
    for row in rows:
        print(f"{row.range.r:>5} {row.range.p:>3} {row.n_points:>8} {row.ks:>14.6f}")
    print()


def main():
    a, b, beta = 1.0, 0.5, 1.0
    ranges = [BitRange(3 - width, 3) for width in (4, 6, 8, 10, 12, 14, 16)]

    table(limit_check(a, b, beta, ranges), "whole-line register vs normal limit")
    table(
        limit_check(a, b, beta, ranges, interval=(0.0, 2.0)),
        "interval register on [0, 2) vs truncated normal limit",
    )

    a, b = 0.7, -0.3
    table(
        limit_check(a, b, beta, ranges),
        f"whole-line register, a={a}, b={b} (negative solution)",
    )


if __name__ == "__main__":
    main()
