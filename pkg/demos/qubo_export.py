#!/usr/bin/env python3
"""Build the QUBO of (a*x - b)^2 over a fixed-point register and check it.

The closed-form coefficients must reproduce the squared residual for every
bit assignment once the dropped constant b^2 is added back; the minimizer
decodes to the representable value closest to b/a.
"""

import numpy as np

from annealsolve import (
    BitRange,
    SupportKind,
    SupportSpec,
    build_qubo,
    enumerate_patterns,
    exhaustive_deviation,
    export_qubo,
)


def main():
    a, b = 0.75, 1.3
    bit_range = BitRange(-4, 1)
    problem = build_qubo(a, b, bit_range)
    print(f"QUBO for ({a}*x - {b})^2 over exponents {bit_range.r}..{bit_range.p}")
    print(f"{problem.n_bits} qubits, offset (dropped constant) = {problem.offset}\n")

    deviation = exhaustive_deviation(problem)
    print(f"exhaustive identity check over {2 ** problem.n_bits} assignments: "
          f"max |H(q) + b^2 - (a x - b)^2| = {deviation:.2e}\n")

    bits, values = enumerate_patterns(SupportSpec(SupportKind.TWOS_COMPLEMENT, bit_range))
    energies = np.array([problem.evaluate(row.tolist()) for row in bits])
    best = int(np.argmin(energies))
    print(f"target b/a = {b / a:.6f}")
    print(f"energy minimizer decodes to {values[best]} "
          f"(grid distance {abs(values[best] - b / a):.6f})\n")

    print("COO text export:")
    print(export_qubo(problem, "coo"))


if __name__ == "__main__":
    main()
