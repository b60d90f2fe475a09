"""Exact rational partition values against their closed forms.

At sizes the exact integrator can reach, the normalizing constant of
the factor-pair density is a rational number; the closed-form product
must reproduce its logarithm to machine precision, and the brute-force
expansion over permutation pairings must reproduce it exactly.
"""

import math

from eigtail import (
    bosonic_spec, laguerre_spec, log_partition, partition_brute_force,
    partition_exact,
)


def main() -> None:
    print("exact rational partition values, factor-pair weight x^a e^{-nx}")
    print(f"{'a':>3} {'n':>3} {'exact value':>28} {'log err':>10} "
          f"{'brute force':>12}")
    for alpha in (0, 1, 2):
        spec = bosonic_spec(alpha=alpha)
        for n in (1, 2, 3, 4):
            exact = partition_exact(spec, n)
            log_err = abs(log_partition(spec, n)
                          - (math.log(exact.numerator)
                             - math.log(exact.denominator)))
            brute = "match" if (n <= 3
                                and partition_brute_force(spec, n) == exact
                                ) else ("-" if n > 3 else "MISMATCH")
            shown = (f"{exact.numerator}/{exact.denominator}"
                     if exact.denominator < 10 ** 12
                     else f"~{float(exact):.6e}")
            print(f"{alpha:>3} {n:>3} {shown:>28} {log_err:>10.2e} "
                  f"{brute:>12}")

    print()
    print("theta-deformed half-line family, weight x^l e^{-nx}")
    for theta in (2, 3):
        spec = laguerre_spec(theta=theta, ell=1)
        for n in (2, 3):
            exact = partition_exact(spec, n)
            brute = partition_brute_force(spec, n)
            verdict = "match" if exact == brute else "MISMATCH"
            print(f"theta={theta} n={n}: exact == brute force: {verdict}")


if __name__ == "__main__":
    main()
