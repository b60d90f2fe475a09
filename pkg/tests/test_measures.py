"""Limiting spectral measures and the equilibrium solver."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from eigtail import (
    BdGMeasure, BosonicRho, ChiralMeasure, DomainError, EmpiricalMeasure,
    GridMeasure, Semicircle, Support, AngelescoSpec, bdg_spec, cdf,
    density_at, equilibrium_report, grid_measure_from_csv, integrate,
    integrate_log_kernel, ks_distance, l1_density_distance, limit_measure,
    quantile, sample_inverse_cdf, solve_equilibrium,
    solve_equilibrium_angelesco, wigner_dyson_spec,
)

CLOSED_MEASURES = [
    BosonicRho(),
    Semicircle(),
    BdGMeasure(psi=2.0, sigma2=1.0, beta=2.0),
    BdGMeasure(psi=4.0, sigma2=1.0, beta=1.0),
    ChiralMeasure(beta=2.0, sigma2=1.0, kappa=0.25),
    ChiralMeasure(beta=4.0, sigma2=1.0, kappa=0.5),
]


def test_closed_measures_have_unit_mass():
    for measure in CLOSED_MEASURES:
        mass = integrate(measure, lambda y: 1.0)
        assert mass == pytest.approx(1.0, abs=1e-7), measure


def test_standard_moments():
    assert integrate(BosonicRho(), lambda y: y) == pytest.approx(
        1.5, abs=1e-6)
    assert integrate(Semicircle(), lambda y: y) == pytest.approx(
        0.0, abs=1e-9)
    assert integrate(Semicircle(), lambda y: y * y) == pytest.approx(
        1.0, abs=1e-7)


def test_chiral_band_endpoints():
    for kappa in (0.25, 0.4, 0.5):
        m = ChiralMeasure(beta=2.0, sigma2=1.0, kappa=kappa)
        spread = math.sqrt(kappa * (1.0 - kappa))
        assert m.support_left ** 2 == pytest.approx(
            2.0 * 2.0 * (0.5 - spread), abs=1e-12)
        assert m.support_right ** 2 == pytest.approx(
            2.0 * 2.0 * (0.5 + spread), abs=1e-12)


def test_limit_measure_dispatch():
    assert isinstance(limit_measure(wigner_dyson_spec(2.0)), Semicircle)
    assert isinstance(limit_measure(bdg_spec("D")), BdGMeasure)


def test_cdf_quantile_roundtrip():
    for measure in (Semicircle(), BosonicRho(),
                    BdGMeasure(psi=2.0, sigma2=1.0, beta=2.0)):
        lo, hi = measure.support_left, measure.support_right
        for y in np.linspace(lo + 0.1 * (hi - lo), hi - 0.1 * (hi - lo), 7):
            q = cdf(measure, y)
            assert 0.0 < q < 1.0
            assert quantile(measure, q) == pytest.approx(y, abs=1e-6)
    assert cdf(Semicircle(), 0.0) == pytest.approx(0.5, abs=1e-12)


def test_inverse_cdf_sampling_matches_the_measure():
    rng = np.random.default_rng(5)
    draws = sample_inverse_cdf(Semicircle(), 20000, rng)
    emp = EmpiricalMeasure(draws, bins=96)
    assert ks_distance(emp, Semicircle()) < 0.02
    assert ks_distance(emp, BosonicRho()) > 0.3


def test_l1_distance_properties():
    assert l1_density_distance(Semicircle(), Semicircle()) == pytest.approx(
        0.0, abs=1e-12)
    gap = l1_density_distance(Semicircle(), BosonicRho())
    assert gap > 0.5
    assert gap == pytest.approx(
        l1_density_distance(BosonicRho(), Semicircle()), abs=1e-9)


def test_log_kernel_integral_outside_the_support():
    """Away from the support the kernel is smooth, so plain quadrature
    over the density must agree; with theta = 1 the two interaction
    factors coincide and ``both`` doubles the linear part."""
    measure = Semicircle()
    for x in (2.5, 4.0):
        want, _ = quad(lambda y: math.log(abs(x - y)) * density_at(
            measure, y), -2.0, 2.0, limit=200)
        assert integrate_log_kernel(measure, x, 1, part="linear") \
            == pytest.approx(want, abs=1e-6)
        assert integrate_log_kernel(measure, x, 1, part="both") \
            == pytest.approx(2.0 * want, abs=1e-6)


def test_log_kernel_integral_handles_the_edge_singularity():
    """At the edge the integrand has a boundary log singularity; the
    declared-singularity path must still match adaptive quadrature."""
    measure = Semicircle()
    want, _ = quad(lambda y: math.log(abs(2.0 - y)) * density_at(measure, y),
                   -2.0, 2.0, points=[2.0], limit=300)
    got = integrate_log_kernel(measure, 2.0, 1, part="linear")
    assert got == pytest.approx(want, abs=1e-5)


def test_log_kernel_integral_rejects_interior_points():
    with pytest.raises(DomainError):
        integrate_log_kernel(Semicircle(), 0.7, 1)


def test_log_kernel_parts_sum_for_theta_two():
    measure = BdGMeasure(psi=2.0, sigma2=1.0, beta=2.0)
    x = measure.support_right + 0.5
    both = integrate_log_kernel(measure, x, 2, part="both")
    lin = integrate_log_kernel(measure, x, 2, part="linear")
    deformed = integrate_log_kernel(measure, x, 2, part="theta")
    assert both == pytest.approx(lin + deformed, abs=1e-8)


def test_empirical_measure_basics():
    values = np.array([0.9, 0.1, 0.4, 0.4])
    emp = EmpiricalMeasure(values, bins=8)
    assert emp.size == 4
    assert emp.values[0] == 0.1 and emp.values[-1] == 0.9
    assert int(emp.counts.sum()) == 4
    with pytest.raises(DomainError):
        EmpiricalMeasure(np.array([]))
    with pytest.raises(DomainError):
        EmpiricalMeasure(np.array([0.1, math.nan]))


def test_grid_measure_csv_roundtrip(tmp_path):
    nodes = np.linspace(0.0, 2.0, 21)
    weights = np.exp(-nodes)
    weights /= weights.sum()
    measure = GridMeasure(nodes, weights)
    path = tmp_path / "measure.csv"
    measure.save_csv(path)
    raw = path.read_bytes()
    assert b"\r\n" not in raw
    back = grid_measure_from_csv(path)
    assert np.allclose(back.nodes, nodes)
    assert np.allclose(back.weights, weights)
    cdf_path = tmp_path / "cdf.csv"
    measure.save_cdf_csv(cdf_path)
    assert cdf_path.read_text().count("\n") >= 21


def test_equilibrium_solver_recovers_the_semicircle():
    grid = np.linspace(-4.0, 4.0, 257)
    measure = solve_equilibrium(wigner_dyson_spec(2.0), grid)
    assert l1_density_distance(measure, Semicircle()) < 0.05
    report = equilibrium_report(wigner_dyson_spec(2.0), measure)
    assert report.flat_deviation < 1e-3
    assert report.off_support_margin >= -1e-9


def test_equilibrium_solver_recovers_the_square_interaction_law():
    grid = np.linspace(0.0, 3.6, 257)
    measure = solve_equilibrium(bdg_spec("D"), grid)
    want = BdGMeasure(psi=2.0, sigma2=1.0, beta=2.0)
    assert l1_density_distance(measure, want) < 0.05


def test_angelesco_solver_respects_the_fill_ratios():
    aspec = AngelescoSpec(
        intervals=(Support(-1.0, 0.0), Support(0.5, 2.0)),
        potentials=(lambda x: 2.0 * x * x, lambda x: 2.0 * x * x),
        ratios=(0.4, 0.6))
    grids = (np.linspace(-1.0, 0.0, 129), np.linspace(0.5, 2.0, 129))
    components = solve_equilibrium_angelesco(aspec, grids)
    assert len(components) == 2
    for component, grid in zip(components, grids):
        assert float(np.sum(component.weights)) == pytest.approx(
            1.0, abs=1e-8)
        assert component.support_left >= grid[0] - 1e-12
        assert component.support_right <= grid[-1] + 1e-12


def test_solver_grid_validation():
    from eigtail import InitializationError
    with pytest.raises(InitializationError):
        solve_equilibrium(bdg_spec("D"), np.linspace(-3.0, -1.0, 65))
    with pytest.raises(InitializationError):
        solve_equilibrium(wigner_dyson_spec(2.0), np.array([1.0, 1.0, 2.0]))
