"""Rate functions: closed forms, general quadrature path, identities."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from eigtail import (
    AngelescoSpec, DomainError, Support, bdg_spec, bosonic_spec, chiral_spec,
    limit_edge, make_angelesco_context, make_context, phi_potential,
    rate_angelesco, rate_bdg_closed, rate_beta_theta, rate_bosonic,
    rate_chiral, rate_general, rate_goe, wigner_dyson_spec, zeta,
    zeta_closed_form,
)


# ---------------------------------------------------------------------------
# Closed forms


def test_goe_rate_closed_values():
    assert rate_goe(2.0) == 0.0
    assert rate_goe(1.9) == math.inf
    # J(x) = int_2^x sqrt((t/2)^2 - 1) dt, checked by direct quadrature.
    for x in (2.2, 2.5, 3.0, 4.0):
        want, _ = quad(lambda t: math.sqrt(0.25 * t * t - 1.0), 2.0, x)
        assert rate_goe(x) == pytest.approx(want, abs=1e-10)


def test_square_interaction_rate_frozen_value():
    # c = 1, edge 1: at x = 2 the antiderivative gives
    # 8 (sqrt 3 - log(2 + sqrt 3) / 2).
    want = 8.0 * (math.sqrt(3.0) - 0.5 * math.log(2.0 + math.sqrt(3.0)))
    assert rate_bdg_closed(0.25, 1.0, 2.0, 1.0, 2.0) == pytest.approx(
        want, rel=1e-14)
    assert rate_bdg_closed(0.25, 1.0, 2.0, 1.0, 2.0) == pytest.approx(
        8.588574872851751, rel=1e-14)


def test_closed_rates_vanish_at_their_edges():
    assert rate_bdg_closed(2.0, 1.0, 2.0, 1.0, math.sqrt(8.0)) \
        == pytest.approx(0.0, abs=1e-12)
    assert rate_chiral(2.0, 1.0, 0.25, limit_edge(
        chiral_spec("AIII", kappa=0.25))) == 0.0
    assert rate_bosonic(3.0 * math.sqrt(3.0)) == pytest.approx(
        0.0, abs=1e-3)


def test_closed_rates_are_infinite_below_the_edge():
    assert rate_bdg_closed(2.0, 1.0, 2.0, 1.0, 1.0) == math.inf
    assert rate_chiral(2.0, 1.0, 0.25, 0.5) == math.inf
    assert rate_bosonic(3.0) == math.inf


def test_closed_rates_increase_beyond_the_edge():
    xs = np.linspace(math.sqrt(8.0), 3.0 * math.sqrt(8.0), 24)
    values = [rate_bdg_closed(2.0, 1.0, 2.0, 1.0, x) for x in xs]
    assert all(b > a for a, b in zip(values, values[1:]))
    xs = np.linspace(3.0 * math.sqrt(3.0), 12.0, 24)
    values = [rate_bosonic(x) for x in xs]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_closed_rate_parameter_validation():
    with pytest.raises(DomainError):
        rate_bdg_closed(-1.0, 1.0, 2.0, 1.0, 3.0)
    with pytest.raises(DomainError):
        rate_chiral(2.0, 1.0, 0.75, 3.0)


# ---------------------------------------------------------------------------
# General quadrature path against the closed forms


def test_general_rate_matches_the_square_interaction_closed_form():
    for name in ("B", "D", "C", "CI"):
        spec = bdg_spec(name)
        ctx = make_context(spec)
        w = spec.weight
        edge = limit_edge(spec)
        for x in np.linspace(edge, 2.5 * edge, 9):
            closed = rate_bdg_closed(w.psi, w.sigma2, w.beta, 1.0, float(x))
            general = rate_beta_theta(ctx, float(x))
            assert general == pytest.approx(closed, abs=1e-6), (name, x)


def test_general_rate_matches_the_linear_interaction_closed_form():
    """For the quadratic-weight line ensemble the speed-n rate is
    beta J(x) with J the classical edge integral."""
    for beta in (1.0, 2.0, 4.0):
        ctx = make_context(wigner_dyson_spec(beta))
        for x in (2.0, 2.3, 2.8):
            assert rate_beta_theta(ctx, x) == pytest.approx(
                beta * rate_goe(x), abs=1e-6), (beta, x)


def test_general_rate_matches_the_factor_pair_closed_form():
    ctx = make_context(bosonic_spec())
    edge = 3.0 * math.sqrt(3.0)
    for x in (edge, 6.0, 8.0):
        assert rate_general(ctx, x) == pytest.approx(
            rate_bosonic(x), abs=1e-3), x


def test_general_rate_matches_the_rectangular_block_closed_form():
    spec = chiral_spec("BDI", kappa=0.25)
    ctx = make_context(spec)
    edge = limit_edge(spec)
    for x in np.linspace(edge, 2.0 * edge, 5):
        closed = rate_chiral(1.0, 1.0, 0.25, float(x))
        assert rate_beta_theta(ctx, float(x)) == pytest.approx(
            closed, abs=1e-3), x


def test_rate_domain_handling():
    ctx = make_context(bosonic_spec())
    assert rate_general(ctx, 1.0) == math.inf
    with pytest.raises(DomainError):
        rate_general(ctx, -1.0)
    with pytest.raises(DomainError):
        rate_beta_theta(ctx, 6.0)


# ---------------------------------------------------------------------------
# Identities tying the pieces together


def test_potential_duality_identity():
    """kappa Phi(x, mu_w) + xi = -I(x) must hold exactly in exact
    arithmetic; the numeric check allows quadrature error only."""
    for spec in (wigner_dyson_spec(2.0), bdg_spec("D"),
                 chiral_spec("AIII", kappa=0.25)):
        ctx = make_context(spec)
        x = limit_edge(spec) * 1.3
        lhs = spec.kappa * phi_potential(ctx, x) + ctx.xi
        assert lhs == pytest.approx(-rate_general(ctx, x), abs=1e-6), spec


def test_zeta_closed_form_matches_the_integral_definition():
    for spec in (wigner_dyson_spec(2.0), wigner_dyson_spec(4.0),
                 bdg_spec("D"), bdg_spec("C"), bosonic_spec()):
        ctx = make_context(spec)
        direct = zeta(spec, ctx.mu_w, ctx.xi)
        assert zeta_closed_form(spec) == pytest.approx(
            direct, abs=1e-6), spec.weight


def test_context_carries_the_limiting_edge():
    for spec in (wigner_dyson_spec(2.0), bdg_spec("CI"), bosonic_spec()):
        assert make_context(spec).b_w == pytest.approx(limit_edge(spec))


# ---------------------------------------------------------------------------
# Multi-component rate


@pytest.fixture(scope="module")
def angelesco_context():
    aspec = AngelescoSpec(
        intervals=(Support(-1.0, 0.0), Support(0.5, 2.0)),
        potentials=(lambda x: 2.0 * x * x, lambda x: 2.0 * x * x),
        ratios=(0.5, 0.5))
    grids = (np.linspace(-1.0, 0.0, 129), np.linspace(0.5, 2.0, 129))
    return make_angelesco_context(aspec, grids=grids)


def test_angelesco_rate_is_finite_beyond_the_component_edges(
        angelesco_context):
    """Each coordinate must sit at or beyond its component measure's
    right edge; left of it the deviation has faster-than-exponential
    cost and the speed-n rate is infinite."""
    edges = [m.support_right for m in angelesco_context.component_measures]
    value = rate_angelesco(angelesco_context, (edges[0], edges[1] + 0.6))
    assert math.isfinite(value)
    assert value >= -1e-9
    assert rate_angelesco(
        angelesco_context, (-0.5, edges[1] + 0.6)) == math.inf


def test_angelesco_rate_grows_toward_the_right(angelesco_context):
    edges = [m.support_right for m in angelesco_context.component_measures]
    inner = rate_angelesco(angelesco_context, (edges[0], edges[1] + 0.5))
    outer = rate_angelesco(angelesco_context, (edges[0], edges[1] + 0.9))
    assert outer > inner


def test_angelesco_symmetric_variant_runs(angelesco_context):
    edges = [m.support_right for m in angelesco_context.component_measures]
    point = (edges[0], edges[1] + 0.7)
    plain = rate_angelesco(angelesco_context, point)
    symmetric = rate_angelesco(angelesco_context, point, symmetric=True)
    assert math.isfinite(symmetric)
    assert symmetric == pytest.approx(plain, rel=0.5)


def test_angelesco_rate_validates_the_point_count(angelesco_context):
    with pytest.raises(DomainError):
        rate_angelesco(angelesco_context, (-0.1,))
    with pytest.raises(DomainError):
        rate_angelesco(angelesco_context, (-2.0, 1.9))
