"""Specification, weight, and joint-density layer."""

import math

import numpy as np
import pytest

from eigtail import (
    BDG_CLASSES, CHIRAL_CLASSES, HALF_LINE, REAL_LINE, AngelescoSpec,
    Configuration, DomainError, EnsembleSpec, GaussianBetaWeight, GridWeight,
    Support, bdg_spec, bosonic_spec, check_growth_condition, chiral_spec,
    estimate_bound_constant, grid_spec, laguerre_spec, limit_edge,
    log_abs_theta_diff, log_joint_density, log_joint_density_angelesco,
    log_weight, tail_bound_check, wigner_dyson_spec,
)

ALL_SPECS = [
    bosonic_spec(alpha=1),
    laguerre_spec(theta=3, ell=1),
    wigner_dyson_spec(2.0),
    bdg_spec("D"),
    chiral_spec("BDI", kappa=0.25),
]


def _random_config(spec, n, rng):
    p = spec.p(n)
    lo = max(spec.support.lo, -3.0)
    values = lo + 0.05 + 2.5 * rng.random(p)
    return Configuration(n=n, values=tuple(values))


# ---------------------------------------------------------------------------
# Constructors and validation


def test_support_validation_and_iteration():
    with pytest.raises(DomainError):
        Support(2.0, 1.0)
    lo, hi = Support(-1.0, 3.0)
    assert (lo, hi) == (-1.0, 3.0)
    assert HALF_LINE.lo == 0.0 and math.isinf(HALF_LINE.hi)
    assert math.isinf(REAL_LINE.lo) and REAL_LINE.lo < 0


def test_family_constructors_set_the_advertised_structure():
    assert bosonic_spec().form == "two_factor"
    assert bosonic_spec().theta == 2
    assert wigner_dyson_spec(4.0).form == "beta_theta"
    assert wigner_dyson_spec(4.0).beta == 4.0
    for name, (alpha, beta, psi) in BDG_CLASSES.items():
        spec = bdg_spec(name)
        assert spec.weight.alpha == alpha
        assert spec.weight.beta == beta
        assert spec.weight.psi == psi
    for name, beta in CHIRAL_CLASSES.items():
        assert chiral_spec(name).beta == beta


def test_chiral_shape_rules_follow_kappa():
    spec = chiral_spec("AIII", kappa=0.25)
    assert spec.p(8) == 2
    assert spec.p(9) == 2
    assert spec.weight.s_rule(8) + spec.weight.t_rule(8) == 8
    with pytest.raises(DomainError):
        chiral_spec("AIII", kappa=0.75)
    with pytest.raises(DomainError):
        chiral_spec("XYZ")


def test_spec_validation_rejects_bad_combinations():
    with pytest.raises(DomainError):
        EnsembleSpec(theta=2, beta=1.0, kappa=1.0, support=REAL_LINE,
                     weight=GaussianBetaWeight(1.0), form="beta_theta")
    with pytest.raises(DomainError):
        grid_spec((0.0, 1.0), (0.0, -1.0), beta=2.0, form="two_factor")
    with pytest.raises(DomainError):
        grid_spec((0.0, 1.0), (0.0, -1.0), theta=0)
    with pytest.raises(DomainError):
        grid_spec((0.0, 1.0), (0.0, -1.0), kappa=1.5)
    with pytest.raises(DomainError):
        bosonic_spec(alpha=-1)
    with pytest.raises(DomainError):
        bosonic_spec(tau=-2.0)


def test_grid_weight_interpolates_and_validates():
    nodes = (0.0, 1.0, 2.0)
    logs = (0.0, -1.0, -4.0)
    weight = GridWeight(nodes, logs)
    assert weight.log_weight_total(5, 0.5) == pytest.approx(-0.5 * 5)
    assert weight.log_weight_total(5, 1.5) == pytest.approx(-2.5 * 5)
    with pytest.raises(DomainError):
        GridWeight((0.0,), (1.0,))
    with pytest.raises(DomainError):
        GridWeight((0.0, 0.0), (1.0, 1.0))


# ---------------------------------------------------------------------------
# Interaction terms


def test_log_abs_theta_diff_matches_direct_formula():
    rng = np.random.default_rng(7)
    for theta in (1, 2, 3):
        x = 0.1 + 3.0 * rng.random(50)
        y = 0.1 + 3.0 * rng.random(50)
        got = log_abs_theta_diff(x, y, theta)
        want = np.log(np.abs(x ** theta - y ** theta))
        assert np.allclose(got, want, atol=1e-12)


def test_log_weight_vectorizes_consistently():
    for spec in ALL_SPECS:
        xs = np.array([0.3, 0.9, 1.7])
        batch = log_weight(spec, 6, xs)
        single = [log_weight(spec, 6, float(x)) for x in xs]
        assert np.allclose(batch, single, atol=1e-12)


def test_joint_density_is_permutation_invariant():
    rng = np.random.default_rng(11)
    for spec in ALL_SPECS:
        for _ in range(5):
            config = _random_config(spec, 8, rng)
            value = log_joint_density(spec, config)
            perm = tuple(rng.permutation(config.values))
            shuffled = Configuration(n=config.n, values=perm)
            assert log_joint_density(spec, shuffled) == pytest.approx(
                value, abs=1e-9)


def test_two_factor_at_theta_one_equals_squared_interaction():
    """With theta = 1 the two interaction factors coincide, so the
    two-factor product equals the power form at beta = 2."""
    nodes = tuple(np.linspace(0.0, 4.0, 9))
    logs = tuple(-x for x in nodes)
    pair = grid_spec(nodes, logs, theta=1, form="two_factor")
    power = grid_spec(nodes, logs, theta=1, beta=2.0, form="beta_theta")
    rng = np.random.default_rng(3)
    for _ in range(5):
        values = tuple(0.1 + 3.5 * rng.random(6))
        config = Configuration(n=6, values=values)
        assert log_joint_density(pair, config) == pytest.approx(
            log_joint_density(power, config), abs=1e-9)


def test_joint_density_validates_count_and_support():
    spec = bosonic_spec()
    with pytest.raises(DomainError):
        log_joint_density(spec, Configuration(n=4, values=(0.5, 1.0)))
    with pytest.raises(DomainError):
        log_joint_density(spec, Configuration(n=2, values=(-0.5, 1.0)))


def test_coincident_points_give_minus_infinity():
    spec = wigner_dyson_spec(2.0)
    config = Configuration(n=3, values=(0.5, 0.5, 1.0))
    assert log_joint_density(spec, config) == -math.inf


# ---------------------------------------------------------------------------
# Limiting edges, growth, and the finite-size bound


def test_limit_edges_match_closed_values():
    assert limit_edge(bosonic_spec()) == pytest.approx(3.0 * math.sqrt(3.0))
    assert limit_edge(wigner_dyson_spec(2.0)) == pytest.approx(2.0)
    for name, (_, beta, psi) in BDG_CLASSES.items():
        assert limit_edge(bdg_spec(name)) == pytest.approx(
            math.sqrt(2.0 * psi * beta))
    spread = math.sqrt(0.25 * 0.75)
    assert limit_edge(chiral_spec("AIII", kappa=0.25)) == pytest.approx(
        math.sqrt(2.0 * 2.0 * (0.5 + spread)))


def test_growth_condition_holds_for_gaussian_decay():
    grid = np.linspace(1.0, 8.0, 64)
    report = check_growth_condition(wigner_dyson_spec(2.0), 0.1, grid)
    assert report.passed
    assert report.threshold_index is not None


def test_tail_bound_holds_on_random_cases():
    rng = np.random.default_rng(19)
    for spec in (bosonic_spec(alpha=1), bdg_spec("D")):
        floor = max(limit_edge(spec), 1.0)
        constants = {}
        for _ in range(300):
            n = int(rng.integers(1, 17))
            if n not in constants:
                constants[n] = estimate_bound_constant(spec, n)
            x = floor * (1.0 + 3.0 * rng.random())
            lam = 20.0 * rng.random()
            assert tail_bound_check(spec, x, lam, n, constants[n])


def test_bound_constant_rejects_negative_values():
    spec = bosonic_spec()
    with pytest.raises(DomainError):
        tail_bound_check(spec, 6.0, 1.0, 4, -1.0)


# ---------------------------------------------------------------------------
# Multi-component systems


def test_angelesco_spec_validation():
    good = AngelescoSpec(
        intervals=(Support(-1.0, 0.0), Support(0.5, 2.0)),
        potentials=(lambda x: x * x, lambda x: x * x),
        ratios=(0.5, 0.5))
    assert good.p == 2
    with pytest.raises(DomainError):
        AngelescoSpec(intervals=(Support(-1.0, 0.0),),
                      potentials=(lambda x: x,), ratios=(0.7,))
    with pytest.raises(DomainError):
        AngelescoSpec(
            intervals=(Support(-1.0, 0.5), Support(0.0, 2.0)),
            potentials=(lambda x: x, lambda x: x), ratios=(0.5, 0.5))


def test_angelesco_joint_density_smoke():
    aspec = AngelescoSpec(
        intervals=(Support(-1.0, 0.0), Support(0.5, 2.0)),
        potentials=(lambda x: x * x, lambda x: x * x),
        ratios=(0.5, 0.5))
    value = log_joint_density_angelesco(
        aspec, [[-0.8, -0.2], [0.7, 1.5]], n=4)
    assert math.isfinite(value)
    with pytest.raises(DomainError):
        log_joint_density_angelesco(aspec, [[-0.8, 0.3], [0.7, 1.5]], n=4)
