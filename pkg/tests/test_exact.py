"""Rational-arithmetic layer: moments, biorthogonalization, partitions."""

import math
from fractions import Fraction

import pytest

from eigtail import (
    DomainError, UnsupportedWeightError, biorthogonalize, bosonic_spec,
    laguerre_spec, moment, partition_brute_force, partition_exact,
    wigner_dyson_spec,
)
from eigtail.exact import EXACT_SIZE_CAP


def test_moment_is_the_factorial_formula():
    weight = bosonic_spec(alpha=1).weight
    for n in (1, 2, 3):
        for k in (0, 1, 4):
            want = Fraction(math.factorial(k + 1), n ** (k + 2))
            assert moment(weight, n, k) == want
    with pytest.raises(DomainError):
        moment(weight, 2, -1)


def test_moment_rejects_weights_without_factorial_form():
    with pytest.raises(UnsupportedWeightError):
        moment(wigner_dyson_spec(2.0).weight, 2, 0)


def test_biorthogonality_relations_hold_exactly():
    """The pair bases must satisfy <p_i, q_j> = delta_ij h_i with the
    inner product sum_{k,l} p_ik q_jl moment(k + theta l)."""
    for spec, n in ((bosonic_spec(alpha=1), 4),
                    (laguerre_spec(theta=3, ell=2), 3)):
        system = biorthogonalize(spec, n)
        theta = spec.theta
        for i in range(n):
            for j in range(n):
                inner = Fraction(0)
                for k, pk in enumerate(system.p_polys[i]):
                    for l, ql in enumerate(system.q_polys[j]):
                        inner += pk * ql * moment(spec.weight, n,
                                                  k + theta * l)
                want = system.h[i] if i == j else Fraction(0)
                assert inner == want


def test_biorthogonal_polynomials_are_monic():
    system = biorthogonalize(bosonic_spec(alpha=2), 4)
    for poly in system.p_polys + system.q_polys:
        assert poly[-1] == Fraction(1)


def test_exact_equals_brute_force_across_families():
    cases = [
        (bosonic_spec(alpha=0), (1, 2, 3)),
        (bosonic_spec(alpha=1), (1, 2, 3)),
        (bosonic_spec(alpha=2), (2, 3)),
        (laguerre_spec(theta=2, ell=1), (2, 3)),
        (laguerre_spec(theta=3, ell=0), (2,)),
    ]
    for spec, sizes in cases:
        for n in sizes:
            exact = partition_exact(spec, n)
            brute = partition_brute_force(spec, n)
            assert exact == brute, (spec.weight, n)


def test_exact_partition_matches_product_formula():
    """At tau(n) = n the factor-pair value is
    n! prod_{j=0}^{n-1} 2^j j! (2j + alpha)! / n^{n(alpha+1)+3n(n-1)/2}."""
    for alpha in (0, 1, 2):
        spec = bosonic_spec(alpha=alpha)
        for n in (1, 2, 3, 4):
            numerator = Fraction(math.factorial(n))
            for j in range(n):
                numerator *= (Fraction(2) ** j * math.factorial(j)
                              * math.factorial(2 * j + alpha))
            power = n * (alpha + 1) + 3 * n * (n - 1) // 2
            want = numerator / Fraction(n) ** power
            assert partition_exact(spec, n) == want


def test_exact_partition_respects_the_size_cap():
    with pytest.raises(DomainError):
        partition_exact(bosonic_spec(), EXACT_SIZE_CAP + 1)


def test_exact_path_requires_factorial_moments():
    with pytest.raises(UnsupportedWeightError):
        partition_exact(wigner_dyson_spec(2.0), 2)
