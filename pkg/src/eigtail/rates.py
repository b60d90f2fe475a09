"""Large-deviations rate functions for the largest eigenvalue.

The general evaluator assembles the rate from three ingredients carried
by a context: the limiting spectral measure, the limit weight, and the
normalizing constant ``zeta = kappa int log w dmu + xi``.  Closed forms
(the Gaussian orthogonal/unitary edge rate, the half-line square
interaction family, the rectangular-block family, the cube-root-edge
family) are provided independently and serve as cross-oracles for the
quadrature path.

Conventions, fixed package-wide: a rate function is ``+inf`` strictly
left of the almost-sure edge ``b_w``, zero at the edge, and strictly
increasing to the right of it.  ``+inf`` is a first-class return value,
never an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .ensembles import (
    AngelescoSpec, BdGWeight, BosonicWeight, ChiralWeight, EnsembleSpec,
    GaussianBetaWeight, _rule_slope,
)
from .errors import DomainError, InitializationError, UnsupportedWeightError
from .measures import (
    BosonicRho, GridMeasure, SpectralMeasure, integrate,
    integrate_log_kernel, limit_log_weight, limit_measure,
    solve_equilibrium_angelesco,
)

_RHO_STANDARD = BosonicRho()
from .partition import xi_asymptotic

__all__ = [
    "RateContext", "make_context", "zeta", "zeta_closed_form",
    "phi_potential", "rate_general", "rate_beta_theta", "rate_goe",
    "rate_bdg_closed", "rate_chiral", "rate_bosonic",
    "AngelescoContext", "make_angelesco_context", "rate_angelesco",
]


@dataclass(frozen=True)
class RateContext:
    """Everything a rate evaluation needs about one ensemble.

    ``zeta`` always satisfies ``zeta = kappa int log w dmu_w + xi`` with
    the stored ``xi`` (for families whose partition-ratio statistic has
    no limit, ``xi`` is back-computed from the closed-form ``zeta`` so
    the identity still holds).
    """

    spec: EnsembleSpec
    mu_w: SpectralMeasure
    b_w: float
    xi: float
    zeta: float


def zeta(spec: EnsembleSpec, mu_w: SpectralMeasure, xi: float) -> float:
    """``kappa int log w dmu_w + xi`` for the given ingredients."""
    mean_log_w = integrate(mu_w, lambda y: limit_log_weight(spec, y))
    return spec.kappa * mean_log_w + float(xi)


def zeta_closed_form(spec: EnsembleSpec) -> float:
    """The rate-normalizing constant ``zeta`` in closed form.

    These are the values that make the general rate vanish at the edge;
    they were validated both against high-precision quadrature of the
    equilibrium potential and against partition-ratio asymptotics.
    """
    weight = spec.weight
    if isinstance(weight, BosonicWeight):
        taubar = _rule_slope(weight.tau_rule, "tau rule")
        if taubar <= 0.0:
            raise UnsupportedWeightError(
                "zeta needs a decay rule with positive linear slope")
        return 3.0 - 3.0 * math.log(2.0) + 3.0 * math.log(taubar)
    if isinstance(weight, GaussianBetaWeight):
        return 0.5 * weight.beta
    if isinstance(weight, BdGWeight):
        half = 0.5 * weight.beta * weight.psi * weight.sigma2
        return weight.beta * (1.0 - math.log(half))
    if isinstance(weight, ChiralWeight):
        kap = spec.kappa
        return 0.5 * weight.beta * (
            1.0 - math.log(weight.beta * weight.sigma2)
            - kap * math.log(kap) - (1.0 - kap) * math.log(1.0 - kap))
    raise UnsupportedWeightError(
        f"no closed-form zeta for {type(weight).__name__}")


def make_context(spec: EnsembleSpec, *, mu_w: SpectralMeasure | None = None,
                 xi: float | None = None) -> RateContext:
    """Build a rate context: limiting measure, edge, ``xi`` and ``zeta``.

    For the rectangular-block family the partition-ratio statistic has no
    limit, so ``zeta`` comes from its closed form and ``xi`` is defined
    through ``zeta = kappa int log w dmu + xi``.  For every other
    supported family ``xi`` is the ratio limit and ``zeta`` follows from
    the same identity.  A custom measure (and optionally ``xi``) may be
    supplied for grid-weight experiments.
    """
    measure = mu_w if mu_w is not None else limit_measure(spec)
    if xi is None:
        if isinstance(spec.weight, ChiralWeight):
            zeta_value = zeta_closed_form(spec)
            mean_log_w = integrate(
                measure, lambda y: limit_log_weight(spec, y))
            xi_value = zeta_value - spec.kappa * mean_log_w
        else:
            xi_value = xi_asymptotic(spec)
            zeta_value = zeta(spec, measure, xi_value)
    else:
        xi_value = float(xi)
        zeta_value = zeta(spec, measure, xi_value)
    return RateContext(spec=spec, mu_w=measure,
                       b_w=float(measure.support_right),
                       xi=xi_value, zeta=zeta_value)


def _kernel_integral(ctx: RateContext, x: float) -> float:
    """The form's interaction kernel integrated against ``mu_w``."""
    if ctx.spec.form == "two_factor":
        return integrate_log_kernel(ctx.mu_w, x, ctx.spec.theta, part="both")
    return ctx.spec.beta * integrate_log_kernel(
        ctx.mu_w, x, ctx.spec.theta, part="theta")


def _check_in_sigma(ctx: RateContext, x: float) -> None:
    if not ctx.spec.support.contains(x):
        raise DomainError(
            f"x={x} outside the ensemble support "
            f"[{ctx.spec.support.lo}, {ctx.spec.support.hi}]")


def rate_general(ctx: RateContext, x: float) -> float:
    """The rate of the context's density form at ``x``.

    ``+inf`` left of the edge; at and right of it,
    ``-kappa * (form kernel integral) - log w(x) - zeta`` with the
    boundary log singularity handled by the declared-singularity
    quadrature path.
    """
    x = float(x)
    _check_in_sigma(ctx, x)
    if x < ctx.b_w:
        return math.inf
    value = -ctx.spec.kappa * _kernel_integral(ctx, x) \
        - limit_log_weight(ctx.spec, x) - ctx.zeta
    return float(value)


def rate_beta_theta(ctx: RateContext, x: float) -> float:
    """The power-interaction-form rate
    ``-kappa beta int log|x^theta - y^theta| dmu - log w(x) - zeta``.

    Requires a context built for that form.
    """
    if ctx.spec.form != "beta_theta":
        raise DomainError(
            "rate_beta_theta needs a context built for the power-"
            f"interaction form, got {ctx.spec.form!r}")
    return rate_general(ctx, x)


def phi_potential(ctx: RateContext, x: float) -> float:
    """The effective potential
    ``Phi(x, mu_w) = (form kernel) + (1/kappa) log w(x) + int log w dmu``.

    Satisfies ``kappa Phi(x, mu_w) + xi = -I(x)`` exactly by the zeta
    identity; evaluating both sides is the package's sign-convention
    check.
    """
    x = float(x)
    _check_in_sigma(ctx, x)
    mean_log_w = integrate(ctx.mu_w, lambda y: limit_log_weight(ctx.spec, y))
    return float(_kernel_integral(ctx, x)
                 + limit_log_weight(ctx.spec, x) / ctx.spec.kappa
                 + mean_log_w)


# ---------------------------------------------------------------------------
# Closed forms


def rate_goe(x: float) -> float:
    """The classical speed-n edge rate
    ``J(x) = int_2^x sqrt((t/2)^2 - 1) dt`` in closed form."""
    x = float(x)
    if x < 2.0:
        return math.inf
    root = math.sqrt(x * x - 4.0)
    return 0.25 * x * root - math.log(0.5 * (x + root))


def rate_bdg_closed(psi: float, sigma2: float, beta: float, kappa: float,
                    x: float) -> float:
    """Closed rate ``beta (4/c) int_{sqrt c}^x sqrt(t^2 - c) dt`` with
    ``c = 2 psi sigma2 beta kappa``."""
    if min(psi, sigma2, beta, kappa) <= 0.0:
        raise DomainError("psi, sigma2, beta, kappa must be positive")
    c = 2.0 * psi * sigma2 * beta * kappa
    x = float(x)
    edge = math.sqrt(c)
    if x < edge:
        return math.inf
    root = math.sqrt(max(0.0, x * x - c))
    antiderivative = 0.5 * x * root - 0.5 * c * math.log((x + root) / edge)
    return beta * (4.0 / c) * antiderivative


def rate_chiral(beta: float, sigma2: float, kappa: float, x: float) -> float:
    """Closed-integrand rate for the rectangular-block family.

    ``I(x) = (1/sigma2) int_{sqrt b}^x sqrt((t^2 - a)(t^2 - b)) / t dt``
    with the band endpoints ``a, b``; the derivative vanishes at the
    edge, making I continuously differentiable there, and the additive
    constant is fixed by ``I(sqrt b) = 0``.
    """
    if min(beta, sigma2) <= 0.0:
        raise DomainError("beta and sigma2 must be positive")
    if not (0.0 < kappa <= 0.5):
        raise DomainError(f"kappa must lie in (0, 1/2], got {kappa}")
    base = 2.0 * sigma2 * beta
    spread = math.sqrt(kappa * (1.0 - kappa))
    a, b = base * (0.5 - spread), base * (0.5 + spread)
    x = float(x)
    edge = math.sqrt(b)
    if x < edge:
        return math.inf
    if x == edge:
        return 0.0

    def integrand(t):
        return math.sqrt(max(0.0, (t * t - a) * (t * t - b))) / t

    value, abserr = quad(integrand, edge, x, epsabs=1e-11, epsrel=1e-11,
                         limit=200)
    return float(value) / sigma2


def rate_bosonic(x: float) -> float:
    """The cube-root-edge family's rate at decay slope 1:
    ``-int [log(x - y) + log(x^2 - y^2)] drho - log w(x) - zeta`` with
    ``log w(x) = -x`` and ``zeta = 3 - 3 log 2``.

    The constant is pinned by the normalization I(3 sqrt 3) = 0 (the
    edge is the almost-sure limit of the largest eigenvalue).
    """
    x = float(x)
    edge = 3.0 * math.sqrt(3.0)
    if x < edge:
        return math.inf
    kernel = integrate_log_kernel(_RHO_STANDARD, x, 2, part="both")
    return float(-kernel + x - (3.0 - 3.0 * math.log(2.0)))


# ---------------------------------------------------------------------------
# Angelesco systems


@dataclass(frozen=True)
class AngelescoContext:
    """Component equilibrium measures and the normalizing constant for a
    multi-component system."""

    aspec: AngelescoSpec
    component_measures: tuple[GridMeasure, ...]
    zeta_a: float


def make_angelesco_context(aspec: AngelescoSpec, *, grids=None,
                           measures=None,
                           zeta_a: float | None = None) -> AngelescoContext:
    """Solve (or accept) the component measures and normalize the rate.

    With ``zeta_a`` unset, the constant is fixed so the rate vanishes
    with every component at the right edge of its own measure (the
    vector analogue of I(b_w) = 0).
    """
    if measures is None:
        if grids is None:
            grids = [np.linspace(lo, hi, 257) for lo, hi in aspec.intervals]
        measures = solve_equilibrium_angelesco(aspec, grids)
    measures = tuple(measures)
    if len(measures) != len(aspec.intervals):
        raise InitializationError(
            f"need one component measure per interval: {len(measures)} "
            f"for {len(aspec.intervals)}")
    for index, (measure, (lo, hi)) in enumerate(
            zip(measures, aspec.intervals)):
        if measure.support_left < lo - 1e-9 \
                or measure.support_right > hi + 1e-9:
            raise InitializationError(
                f"component {index}: measure support "
                f"[{measure.support_left}, {measure.support_right}] leaves "
                f"its interval [{lo}, {hi}]")
    context = AngelescoContext(aspec=aspec, component_measures=measures,
                               zeta_a=0.0)
    if zeta_a is None:
        edges = [m.support_right for m in measures]
        zeta_a = _angelesco_raw(context, edges, symmetric=False)
    return AngelescoContext(aspec=aspec, component_measures=measures,
                            zeta_a=float(zeta_a))


def _angelesco_raw(actx: AngelescoContext, xs, symmetric: bool) -> float:
    """The un-normalized rate expression at ``xs``."""
    aspec = actx.aspec
    ratios = aspec.ratios
    p = len(ratios)
    total = 0.0
    for i in range(p):
        mu_i = actx.component_measures[i]
        x_i = float(xs[i])
        total += ratios[i] ** 2 * (-2.0) * _mean_log_gap(mu_i, x_i)
        total += ratios[i] * float(aspec.potentials[i](x_i))
    for i in range(p):
        for j in range(i + 1, p):
            if symmetric:
                cross = 0.5 * (_mean_log_gap(actx.component_measures[j],
                                             float(xs[i]))
                               + _mean_log_gap(actx.component_measures[i],
                                               float(xs[j])))
            else:
                cross = _mean_log_gap(actx.component_measures[j],
                                      float(xs[i]))
            total += ratios[i] * ratios[j] * (-1.0) * cross
    return total


def _mean_log_gap(measure: SpectralMeasure, x: float) -> float:
    """``int log|x - y| dmu``, finite even at the support edge.

    Grid measures are read through their piecewise-constant density
    (mass spread over cells), for which the integral of the log kernel
    has a closed form per cell; this keeps the value finite when ``x``
    coincides with a node, consistent with the continuum object the
    grid approximates.  Closed-form measures go through quadrature.
    """
    if isinstance(measure, GridMeasure):
        edges = measure.cell_edges
        # G(y) = (y - x)(log|y - x| - 1) is an antiderivative of
        # log|y - x|, continuous through y = x.
        rel = edges - x
        anti = np.where(rel == 0.0, 0.0,
                        rel * (np.log(np.abs(np.where(rel == 0.0, 1.0, rel)))
                               - 1.0))
        per_cell = np.diff(anti) / np.diff(edges)
        return float(np.sum(per_cell * measure.weights))
    a_w, b_w = measure.support_left, measure.support_right
    near_edge = min(abs(x - a_w), abs(x - b_w)) <= 1e-12 * max(
        1.0, abs(a_w), abs(b_w))
    return integrate(measure,
                     lambda y: math.log(abs(x - y)) if y != x else -math.inf,
                     singularities=(x,) if near_edge else ())


def rate_angelesco(actx: AngelescoContext, xs, *,
                   symmetric: bool = False) -> float:
    """The multi-component rate at one point per component.

    ``+inf`` if any coordinate sits left of its component measure's
    right edge; otherwise the printed double sum (squared self-repulsion,
    cross terms pairing each x_i with the later-indexed measures), plus
    external fields, minus ``zeta_a``.  ``symmetric=True`` averages each
    cross term over both pairings instead; it is an experimental variant,
    not the printed form.
    """
    xs = list(xs)
    aspec = actx.aspec
    if len(xs) != len(aspec.ratios):
        raise DomainError(
            f"need one coordinate per component: got {len(xs)} for "
            f"{len(aspec.ratios)}")
    for index, (x_i, (lo, hi)) in enumerate(zip(xs, aspec.intervals)):
        x_i = float(x_i)
        if not (lo - 1e-12 <= x_i <= hi + 1e-12):
            raise DomainError(
                f"coordinate {index} = {x_i} outside its interval "
                f"[{lo}, {hi}]")
    for x_i, measure in zip(xs, actx.component_measures):
        if float(x_i) < measure.support_right - 1e-12:
            return math.inf
    return _angelesco_raw(actx, xs, symmetric) - actx.zeta_a
