"""Closed-form log normalizing constants and their size-ratio constants.

Each ``log_partition_*`` function returns ``log Z_n`` for the fully
normalized joint density of the named family, i.e. the constant such
that the density with all interaction and weight factors included
integrates to one over the ordered-free domain.  All formulas were
validated against exact rational determinants at small sizes and direct
quadrature; several commonly quoted expressions omit size-independent
or per-size factors (an ``n!``, powers of 2), which matter for ratios
at consecutive sizes, so the constants here are the corrected ones.

``xi_empirical`` is the finite-size ratio statistic
``(1/n) log(Z_{n-1} / Z_n)`` with all size-dependent parameter rules
applied at each size; ``xi_asymptotic`` is its limit where one exists.
"""

from __future__ import annotations

import math
from math import lgamma, log

from .ensembles import (
    BdGWeight, BosonicWeight, ChiralWeight, EnsembleSpec, GaussianBetaWeight,
    LaguerreWeight, _rule_slope,
)
from .errors import DomainError, UnsupportedWeightError

__all__ = [
    "log_partition_bosonic", "log_partition_laguerre",
    "log_partition_gaussian_beta", "log_partition_bdg",
    "log_partition_chiral", "log_partition",
    "xi_empirical", "xi_asymptotic",
]


def _check_size(n: int) -> None:
    if n < 1:
        raise DomainError(f"size must be a positive integer, got {n}")


def log_partition_bosonic(n: int, alpha: int, tau: float) -> float:
    """log Z_n for the factor-pair density with weight x^alpha e^{-tau x}.

    ``Z_n = tau^{-n(alpha+1) - 3 n(n-1)/2} 2^{n(n-1)/2}
    prod_{j=1}^{n} j! (alpha + 2j - 2)!``.
    """
    _check_size(n)
    if tau <= 0:
        raise DomainError(f"decay rate must be positive, got {tau}")
    total = (-1.5 * n * (n - 1) - n * (alpha + 1)) * log(tau)
    total += 0.5 * n * (n - 1) * log(2.0)
    for j in range(1, n + 1):
        total += lgamma(j + 1) + lgamma(alpha + 2 * (j - 1) + 1)
    return total


def log_partition_laguerre(n: int, theta: int, ell: int, tau: float) -> float:
    """log Z_n for the theta-deformed half-line family with weight
    x^ell e^{-tau x}.

    ``Z_n = tau^{-n(ell+1) - (theta+1) n(n-1)/2} n!
    prod_{k=0}^{n-1} k! theta^k (theta k + ell)!``.
    """
    _check_size(n)
    if tau <= 0:
        raise DomainError(f"decay rate must be positive, got {tau}")
    if theta < 1:
        raise DomainError(f"theta must be a positive integer, got {theta}")
    total = (-0.5 * n * (n - 1) * (theta + 1) - n * (ell + 1)) * log(tau)
    total += lgamma(n + 1)
    for k in range(n):
        total += lgamma(k + 1) + k * log(theta) + lgamma(theta * k + ell + 1)
    return total


def log_partition_gaussian_beta(n: int, beta: float) -> float:
    """log Z_n for the beta power-interaction Gaussian with weight
    e^{-beta n x^2 / 4}, unordered variables (the ``n!`` is included).
    """
    _check_size(n)
    if beta <= 0:
        raise DomainError(f"beta must be positive, got {beta}")
    total = 0.5 * n * log(2.0 * math.pi)
    total -= (beta * n * (n - 1) / 4.0 + 0.5 * n) * log(beta * n / 2.0)
    for j in range(1, n + 1):
        total += lgamma(j * beta / 2.0)
    total -= n * lgamma(beta / 2.0)
    total += lgamma(n + 1)
    return total


def log_partition_bdg(n: int, alpha: float, beta: float, psi: float,
                      sigma2: float) -> float:
    """log Z_n for the half-line square-interaction family with weight
    |x|^alpha e^{-n x^2 / (psi sigma^2)}.

    The Selberg-type product for this family is frequently stated for
    variables on the full line; restricting to the half line divides
    each coordinate's range by 2, hence the ``- n log 2``.
    """
    _check_size(n)
    if sigma2 <= 0 or psi <= 0 or beta <= 0:
        raise DomainError("beta, psi and sigma^2 must be positive")
    exponent = 0.5 * beta * n * (n - 1) + 0.5 * (alpha + 1) * n
    total = exponent * log(psi * sigma2 / n)
    for j in range(1, n + 1):
        total += lgamma(1.0 + 0.5 * j * beta)
        total += lgamma(0.5 * (alpha + 1) + 0.5 * (j - 1) * beta)
    total -= n * lgamma(1.0 + 0.5 * beta)
    total -= n * log(2.0)
    return total


def log_partition_chiral(n: int, s: int, beta: float, sigma2: float) -> float:
    """log Z_n for the rectangular-block singular-value family with s
    variables, weight |x|^{beta (n - 2s + 1) - 1} e^{-n x^2 / (2 sigma^2)}.

    As with the square-interaction family, the product formula is for
    full-line variables; the half-line restriction contributes
    ``- s log 2``.
    """
    if s < 1 or s > n - s:
        raise DomainError(f"need 1 <= s <= n - s, got s={s}, n={n}")
    if sigma2 <= 0 or beta <= 0:
        raise DomainError("beta and sigma^2 must be positive")
    total = 0.5 * beta * s * (n - s) * log(2.0 * sigma2 / n)
    for j in range(1, s + 1):
        total += lgamma(1.0 + 0.5 * j * beta)
        total += lgamma(0.5 * beta * (n - 2 * s + j))
    total -= s * lgamma(1.0 + 0.5 * beta)
    total -= s * log(2.0)
    return total


def log_partition(spec: EnsembleSpec, n: int) -> float:
    """Closed-form ``log Z_n`` for the ensemble, parameter rules applied.

    Dispatches on the weight family; grid weights have no closed form.
    """
    _check_size(n)
    weight = spec.weight
    if isinstance(weight, BosonicWeight):
        _require_full_count(spec, n)
        return log_partition_bosonic(n, weight.alpha, weight.tau_rule(n))
    if isinstance(weight, LaguerreWeight):
        _require_full_count(spec, n)
        return log_partition_laguerre(n, weight.theta, weight.l_rule(n),
                                      weight.tau_rule(n))
    if isinstance(weight, GaussianBetaWeight):
        _require_full_count(spec, n)
        if spec.theta != 1:
            raise UnsupportedWeightError(
                "the Gaussian closed form holds for the linear interaction "
                f"only (theta = 1), got theta = {spec.theta}")
        return log_partition_gaussian_beta(n, weight.beta)
    if isinstance(weight, BdGWeight):
        _require_full_count(spec, n)
        return log_partition_bdg(n, weight.alpha, weight.beta, weight.psi,
                                 weight.sigma2)
    if isinstance(weight, ChiralWeight):
        s = weight.s_rule(n)
        t = weight.t_rule(n)
        if s + t != n:
            raise DomainError(
                f"block rules must split the size: s({n}) + t({n}) = "
                f"{s + t} != {n}")
        if spec.p(n) != s:
            raise DomainError(
                f"the eigenvalue count rule must follow the smaller block: "
                f"p({n}) = {spec.p(n)} != s({n}) = {s}")
        return log_partition_chiral(n, s, weight.beta, weight.sigma2)
    raise UnsupportedWeightError(
        f"no closed-form normalizing constant for {type(weight).__name__}")


def _require_full_count(spec: EnsembleSpec, n: int) -> None:
    if spec.p(n) != n:
        raise UnsupportedWeightError(
            "this family's closed form assumes one eigenvalue per size "
            f"unit; p({n}) = {spec.p(n)}")


def xi_empirical(spec: EnsembleSpec, n: int) -> float:
    """Finite-size ratio statistic ``(1/n) log(Z_{n-1} / Z_n)``.

    Both normalizing constants are evaluated with the family's
    size-dependent parameter rules applied at their own size.  For
    families whose eigenvalue count grows slower than the size, the
    statistic oscillates between steps that do and do not add an
    eigenvalue and has no limit; it is still well defined and returned
    as-is.
    """
    if n < 2:
        raise DomainError(f"the ratio needs two consecutive sizes, got {n}")
    return (log_partition(spec, n - 1) - log_partition(spec, n)) / n


def xi_asymptotic(spec: EnsembleSpec) -> float:
    """Limit of ``(1/n) log(Z_{n-1}/Z_n)`` where the limit exists.

    Size-dependent rules enter only through their linear slopes, probed
    numerically (``tau(n)/n -> taubar``, ``l(n)/n -> L``).  Rules without
    a positive linear slope where one is required, and families whose
    ratio statistic genuinely oscillates (the rectangular-block family
    with eigenvalue count below half the size), are rejected.
    """
    weight = spec.weight
    if isinstance(weight, BosonicWeight):
        taubar = _positive_slope(weight.tau_rule, "decay-rate rule tau(n)")
        return 3.0 * log(taubar) + 4.5 - 3.0 * log(2.0)
    if isinstance(weight, LaguerreWeight):
        taubar = _positive_slope(weight.tau_rule, "decay-rate rule tau(n)")
        cap_l = weight.ell_slope()
        theta = float(weight.theta)
        total = (theta + 1.0 + 2.0 * cap_l) * log(taubar)
        total += 1.5 * (theta + 1.0) + 3.0 * cap_l - log(theta)
        corner = (theta + cap_l) ** 2 * log(theta + cap_l)
        if cap_l > 0.0:
            corner -= cap_l ** 2 * log(cap_l)
        return total - corner / theta
    if isinstance(weight, GaussianBetaWeight):
        return 0.75 * weight.beta
    if isinstance(weight, BdGWeight):
        half = 0.5 * weight.beta * weight.psi * weight.sigma2
        return -weight.beta * log(half) + 1.5 * weight.beta
    if isinstance(weight, ChiralWeight):
        raise UnsupportedWeightError(
            "the single-step ratio (1/n) log(Z_{n-1}/Z_n) has no limit for "
            "the rectangular-block family: steps where the smaller block "
            "grows differ by an order-one amount from steps where it does "
            "not.  The rate-function constant for this family is the zeta "
            "constant; see eigtail.rates.make_context / zeta_closed_form.")
    raise UnsupportedWeightError(
        f"no ratio-limit formula for {type(weight).__name__}")


def _positive_slope(rule, what: str) -> float:
    slope = _rule_slope(rule, what)
    if slope <= 0.0:
        raise UnsupportedWeightError(
            f"the ratio limit needs {what} growing linearly with positive "
            f"slope; probed slope {slope}")
    return slope
