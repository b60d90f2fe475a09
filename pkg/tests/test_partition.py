"""Closed-form log normalizing constants and the size-ratio statistic.

The frozen constants below are independent high-precision quadrature
values of the defining integrals (30-digit mpmath for smooth kernels,
Gauss-Hermite exactness for the polynomial ones), computed once and
pinned here; the kink cases were reduced to closed form by the
rotation (u, v) = ((x + y)/sqrt 2, (x - y)/sqrt 2).
"""

import math

import pytest

from eigtail import (
    DomainError, UnsupportedWeightError, bdg_spec, bosonic_spec, chiral_spec,
    grid_spec, laguerre_spec, log_partition, wigner_dyson_spec,
    xi_asymptotic, xi_empirical,
)

QUADRATURE_ORACLES = [
    # (spec, n, independently integrated log Z_n)
    (wigner_dyson_spec(1.0), 2, 1.5 * math.log(2.0)
     + 0.5 * math.log(2.0 * math.pi)),
    (wigner_dyson_spec(2.0), 2, 1.1447298858494002),
    (wigner_dyson_spec(4.0), 2, 0.16390063283767394),
    (wigner_dyson_spec(2.0), 3, 0.2979669503955099),
    (bdg_spec("D"), 2, -0.24156447527049044),
    (bdg_spec("C"), 2, 2.9364893550774552),
    (chiral_spec("AIII"), 2, -0.6931471805599453),
    (chiral_spec("AIII"), 4, -3.4657359027997265),
    (bosonic_spec(alpha=1), 2, -1.6739764335716715),
    (laguerre_spec(theta=3, ell=1), 2, -0.5753641449035634),
]


def test_closed_forms_match_direct_quadrature():
    for spec, n, want in QUADRATURE_ORACLES:
        got = log_partition(spec, n)
        assert got == pytest.approx(want, abs=1e-10), (spec.weight, n)


def test_log_partition_agrees_with_exact_rationals():
    from eigtail import partition_exact
    for spec in (bosonic_spec(alpha=0), bosonic_spec(alpha=2),
                 laguerre_spec(theta=2, ell=1)):
        for n in (1, 2, 3, 4, 5):
            exact = partition_exact(spec, n)
            want = math.log(exact.numerator) - math.log(exact.denominator)
            assert log_partition(spec, n) == pytest.approx(want, rel=1e-12)


def test_ratio_statistic_converges_to_its_limit():
    for spec in (bosonic_spec(alpha=0), wigner_dyson_spec(2.0),
                 wigner_dyson_spec(4.0), laguerre_spec(theta=2),
                 bdg_spec("D"), bdg_spec("CI")):
        limit = xi_asymptotic(spec)
        near = abs(xi_empirical(spec, 800) - limit)
        far = abs(xi_empirical(spec, 50) - limit)
        assert near < far, spec.weight
        assert near < 0.05, spec.weight


def test_chiral_ratio_statistic_has_no_limit():
    """The statistic alternates between sizes that do and do not add an
    eigenvalue, so the rectangular-block family has no single-step
    limit; the finite-size values themselves stay well defined."""
    spec = chiral_spec("AIII", kappa=0.25)
    assert math.isfinite(xi_empirical(spec, 100))
    with pytest.raises(UnsupportedWeightError):
        xi_asymptotic(spec)


def test_ratio_statistic_validation():
    with pytest.raises(DomainError):
        xi_empirical(bosonic_spec(), 1)


def test_unsupported_closed_forms_raise():
    nodes = (0.0, 1.0, 2.0)
    logs = (0.0, -1.0, -2.0)
    with pytest.raises(UnsupportedWeightError):
        log_partition(grid_spec(nodes, logs), 4)
    with pytest.raises(UnsupportedWeightError):
        xi_asymptotic(grid_spec(nodes, logs))


def test_gaussian_closed_form_requires_linear_interaction():
    from eigtail import EnsembleSpec, GaussianBetaWeight, HALF_LINE
    spec = EnsembleSpec(theta=2, beta=2.0, kappa=1.0, support=HALF_LINE,
                        weight=GaussianBetaWeight(2.0), form="beta_theta")
    with pytest.raises(UnsupportedWeightError):
        log_partition(spec, 3)
