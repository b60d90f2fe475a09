"""Ensemble definitions: supports, weight families, and joint densities.

An ensemble is a point process on ``p(n)`` real eigenvalues whose
unnormalized density couples a pairwise interaction with a varying weight:

* two-factor form:   ``prod_{i<j} |x_i - x_j| |x_i^theta - x_j^theta|
  * prod_i w_n(x_i)^n``
* beta-theta form:   ``prod_{i<j} |x_i^theta - x_j^theta|^beta
  * prod_i w_n(x_i)^n``

Weights are always handled in log scale and in factorized form
``w_n(x)^n = |x|^{a(n)} exp(n * psi_n(x))``: the power factor ``|x|^{a(n)}``
is kept separate from the decay factor so that the total log weight is
evaluated as ``a(n) * log|x| + n * psi_n(x)`` without ever forming
``w_n(x)`` itself (the power factor converges non-uniformly near the
origin, the factorized form does not).
"""

from __future__ import annotations

import csv
import functools
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, UnsupportedWeightError

__all__ = [
    "Support", "HALF_LINE", "REAL_LINE",
    "WeightFamily", "BosonicWeight", "LaguerreWeight", "GaussianBetaWeight",
    "BdGWeight", "ChiralWeight", "GridWeight", "grid_weight_from_csv",
    "BDG_CLASSES", "CHIRAL_CLASSES",
    "EnsembleSpec", "Configuration", "AngelescoSpec", "GrowthReport",
    "bosonic_spec", "laguerre_spec", "wigner_dyson_spec", "bdg_spec",
    "chiral_spec", "grid_spec",
    "log_abs_theta_diff", "log_weight", "log_joint_density",
    "log_joint_density_angelesco", "limit_edge",
    "tail_bound_check", "estimate_bound_constant", "check_growth_condition",
]

_PROBE_SIZES = (8192, 16384)


# ---------------------------------------------------------------------------
# Supports


@dataclass(frozen=True)
class Support:
    """A closed interval of eigenvalue locations, possibly unbounded."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise DomainError(f"empty support [{self.lo}, {self.hi}]")

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def contains_array(self, xs: np.ndarray) -> np.ndarray:
        return (xs >= self.lo) & (xs <= self.hi)

    def __iter__(self):
        yield self.lo
        yield self.hi


HALF_LINE = Support(0.0, math.inf)
REAL_LINE = Support(-math.inf, math.inf)


# ---------------------------------------------------------------------------
# Rule probing

@functools.lru_cache(maxsize=None)
def _rule_slope(rule: Callable[[int], float], what: str) -> float:
    """Asymptotic slope ``lim rule(n)/n``, probed at two large sizes.

    Declines rules that do not look asymptotically linear (superlinear
    growth, oscillating slopes).  Slopes below 1e-3 are snapped to zero:
    they are indistinguishable from bounded rules at the probe sizes.
    """
    r1 = rule(_PROBE_SIZES[0]) / _PROBE_SIZES[0]
    r2 = rule(_PROBE_SIZES[1]) / _PROBE_SIZES[1]
    if abs(r1 - r2) > max(3e-4, 1e-3 * abs(r2)):
        raise UnsupportedWeightError(
            f"{what} is not asymptotically linear: {what}(n)/n is "
            f"{r1:.6g} at n={_PROBE_SIZES[0]} but {r2:.6g} at "
            f"n={_PROBE_SIZES[1]}")
    return 0.0 if abs(r2) < 1e-3 else r2


# ---------------------------------------------------------------------------
# Weight families


class WeightFamily(ABC):
    """A size-indexed weight ``w_n(x)^n = |x|^{a(n)} exp(n psi_n(x))``."""

    @abstractmethod
    def power_exponent(self, n: int) -> float:
        """Exponent ``a(n)`` of the power factor ``|x|^{a(n)}``."""

    @abstractmethod
    def log_decay(self, n: int, x):
        """Decay exponent ``psi_n(x)``; accepts scalars or arrays."""

    @abstractmethod
    def log_limit_weight(self, x):
        """``log w(x)`` for the limit weight ``w = lim w_n``; array-aware."""

    def log_weight_total(self, n: int, x):
        """``n log w_n(x) = a(n) log|x| + n psi_n(x)``, with exact -inf.

        The ``a(n) = 0`` branch avoids the ``0 * log 0`` indeterminacy at
        the origin, so families without a power factor stay finite there.
        """
        a = self.power_exponent(n)
        decay = n * self.log_decay(n, x)
        if a == 0:
            return decay
        if np.isscalar(x):
            if x == 0.0:
                return -math.inf
            return a * math.log(abs(x)) + decay
        xs = np.asarray(x, dtype=float)
        decay_arr = np.broadcast_to(np.asarray(decay, dtype=float), xs.shape)
        out = np.full(xs.shape, -np.inf)
        nz = xs != 0.0
        out[nz] = a * np.log(np.abs(xs[nz])) + decay_arr[nz]
        return out

    def zero_set(self, n: int) -> tuple[float, ...]:
        """Points where ``w_n`` vanishes (of the factorized form)."""
        return (0.0,) if self.power_exponent(n) > 0 else ()

    def exact_parameters(self, n: int) -> tuple[int, Fraction]:
        """``(a, tau)`` when ``w_n(x)^n = x^a e^{-tau x}`` on [0, inf).

        Only such weights have rational (factorial) moments; everything
        else raises :class:`UnsupportedWeightError`.
        """
        raise UnsupportedWeightError(
            f"{type(self).__name__} has no factorial-moment form; the "
            "exact path needs a weight x^a e^(-tau x) on the half line")


def _as_rule(value, default_linear: bool, name: str) -> Callable[[int], float]:
    """Normalize a number or callable into an ``n -> value`` rule."""
    if value is None:
        if default_linear:
            return lambda n: float(n)
        raise DomainError(f"{name} requires a value or rule")
    if callable(value):
        return value
    const = float(value)
    if const <= 0 and name == "tau":
        raise DomainError(f"tau must be positive, got {const}")
    return lambda n: const


def _exact_fraction(value) -> Fraction:
    """Exact rational image of an int, Fraction, or float parameter."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(float(value))


@dataclass(frozen=True, eq=False)
class BosonicWeight(WeightFamily):
    """``w_n(x)^n = x^alpha e^{-tau(n) x}`` on the half line.

    ``alpha`` is a fixed nonnegative integer; ``tau_rule`` maps the size n
    to the decay rate (default ``tau = n``, giving the limit weight
    ``e^{-x}``).
    """

    alpha: int = 0
    tau_rule: Callable[[int], float] = field(default=lambda n: float(n))

    def __post_init__(self) -> None:
        if not (isinstance(self.alpha, int) and self.alpha >= 0):
            raise DomainError(f"alpha must be a nonnegative integer, "
                              f"got {self.alpha!r}")

    def power_exponent(self, n: int) -> float:
        return float(self.alpha)

    def log_decay(self, n: int, x):
        return -(self.tau_rule(n) / n) * np.asarray(x, dtype=float) \
            if not np.isscalar(x) else -(self.tau_rule(n) / n) * x

    def log_limit_weight(self, x):
        taubar = _rule_slope(self.tau_rule, "tau rule")
        return -taubar * (np.asarray(x, dtype=float)
                          if not np.isscalar(x) else x)

    def exact_parameters(self, n: int) -> tuple[int, Fraction]:
        tau = _exact_fraction(self.tau_rule(n))
        if tau <= 0:
            raise DomainError(f"tau must be positive, got {tau}")
        return self.alpha, tau


@dataclass(frozen=True, eq=False)
class LaguerreWeight(WeightFamily):
    """``w_n(x)^n = x^{l(n)} e^{-tau(n) x}`` on the half line.

    ``l_rule`` maps the size to a nonnegative integer power and
    ``tau_rule`` to the decay rate (default ``tau = n``).  ``theta`` is
    carried here as well so the weight knows the interaction it is
    normally paired with.
    """

    theta: int
    l_rule: Callable[[int], int] = field(default=lambda n: 0)
    tau_rule: Callable[[int], float] = field(default=lambda n: float(n))

    def __post_init__(self) -> None:
        if not (isinstance(self.theta, int) and self.theta >= 1):
            raise DomainError(f"theta must be a positive integer, "
                              f"got {self.theta!r}")

    def power_exponent(self, n: int) -> float:
        ell = self.l_rule(n)
        if ell < 0:
            raise DomainError(f"l rule returned {ell} < 0 at n={n}")
        return float(ell)

    def log_decay(self, n: int, x):
        return -(self.tau_rule(n) / n) * np.asarray(x, dtype=float) \
            if not np.isscalar(x) else -(self.tau_rule(n) / n) * x

    def ell_slope(self) -> float:
        """Asymptotic growth rate ``L = lim l(n)/n`` of the power."""
        return _rule_slope(self.l_rule, "l rule")

    def log_limit_weight(self, x):
        taubar = _rule_slope(self.tau_rule, "tau rule")
        ell = self.ell_slope()
        if np.isscalar(x):
            if ell == 0.0:
                return -taubar * x
            return -math.inf if x == 0.0 else ell * math.log(x) - taubar * x
        x = np.asarray(x, dtype=float)
        if ell == 0.0:
            return -taubar * x
        out = np.full(x.shape, -np.inf)
        pos = x > 0
        out[pos] = ell * np.log(x[pos]) - taubar * x[pos]
        return out

    def exact_parameters(self, n: int) -> tuple[int, Fraction]:
        ell = self.l_rule(n)
        if not (isinstance(ell, (int, np.integer)) and ell >= 0):
            raise UnsupportedWeightError(
                f"exact moments need an integer power, l rule gave {ell!r}")
        tau = _exact_fraction(self.tau_rule(n))
        if tau <= 0:
            raise DomainError(f"tau must be positive, got {tau}")
        return int(ell), tau


@dataclass(frozen=True, eq=False)
class GaussianBetaWeight(WeightFamily):
    """``w_n(x)^n = e^{-n beta x^2 / 4}`` on the real line."""

    beta: float = 2.0

    def __post_init__(self) -> None:
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta}")

    def power_exponent(self, n: int) -> float:
        return 0.0

    def log_decay(self, n: int, x):
        xs = np.asarray(x, dtype=float) if not np.isscalar(x) else x
        return -(self.beta / 4.0) * xs * xs

    def log_limit_weight(self, x):
        return self.log_decay(1, x)


BDG_CLASSES: dict[str, tuple[int, float, float]] = {
    # class -> (alpha, beta, psi)
    "B": (2, 2.0, 2.0),
    "D": (0, 2.0, 2.0),
    "C": (2, 2.0, 4.0),
    "CI": (1, 1.0, 4.0),
}


@dataclass(frozen=True, eq=False)
class BdGWeight(WeightFamily):
    """``w_n(x)^n = x^alpha e^{-n x^2/(psi sigma^2)}`` on the half line.

    The symmetry class fixes ``(alpha, beta, psi)``; ``sigma2`` scales the
    decay.
    """

    bdg_class: str
    sigma2: float = 1.0

    def __post_init__(self) -> None:
        if self.bdg_class not in BDG_CLASSES:
            raise DomainError(f"unknown class {self.bdg_class!r}; "
                              f"expected one of {sorted(BDG_CLASSES)}")
        if not self.sigma2 > 0:
            raise DomainError(f"sigma2 must be positive, got {self.sigma2}")

    @property
    def alpha(self) -> int:
        return BDG_CLASSES[self.bdg_class][0]

    @property
    def beta(self) -> float:
        return BDG_CLASSES[self.bdg_class][1]

    @property
    def psi(self) -> float:
        return BDG_CLASSES[self.bdg_class][2]

    def power_exponent(self, n: int) -> float:
        return float(self.alpha)

    def log_decay(self, n: int, x):
        xs = np.asarray(x, dtype=float) if not np.isscalar(x) else x
        return -xs * xs / (self.psi * self.sigma2)

    def log_limit_weight(self, x):
        return self.log_decay(1, x)


CHIRAL_CLASSES: dict[str, float] = {"BDI": 1.0, "AIII": 2.0, "CII": 4.0}


@dataclass(frozen=True, eq=False)
class ChiralWeight(WeightFamily):
    """``w_n(x)^n = x^{beta (t(n)-s(n)) + beta - 1} e^{-n x^2/(2 sigma^2)}``.

    The rectangular shape rules ``s_rule <= t_rule`` with
    ``s(n) + t(n) = n`` drive both the particle count (``p(n) = s(n)``)
    and the power of the weight.  The symmetry class names the canonical
    ``beta`` (BDI: 1, AIII: 2, CII: 4).
    """

    beta: float
    s_rule: Callable[[int], int]
    t_rule: Callable[[int], int]
    sigma2: float = 1.0
    chiral_class: str | None = None

    def __post_init__(self) -> None:
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta}")
        if not self.sigma2 > 0:
            raise DomainError(f"sigma2 must be positive, got {self.sigma2}")
        if self.chiral_class is not None:
            if self.chiral_class not in CHIRAL_CLASSES:
                raise DomainError(
                    f"unknown class {self.chiral_class!r}; expected one of "
                    f"{sorted(CHIRAL_CLASSES)}")
            if CHIRAL_CLASSES[self.chiral_class] != self.beta:
                raise DomainError(
                    f"class {self.chiral_class} has beta = "
                    f"{CHIRAL_CLASSES[self.chiral_class]}, got {self.beta}")

    def power_exponent(self, n: int) -> float:
        s, t = self.s_rule(n), self.t_rule(n)
        if not (1 <= s <= t):
            raise DomainError(f"need 1 <= s(n) <= t(n), got s={s}, t={t} "
                              f"at n={n}")
        if s + t != n:
            raise DomainError(f"shape rules must satisfy s(n) + t(n) = n, "
                              f"got {s} + {t} != {n}")
        return self.beta * (t - s) + self.beta - 1.0

    def log_decay(self, n: int, x):
        xs = np.asarray(x, dtype=float) if not np.isscalar(x) else x
        return -xs * xs / (2.0 * self.sigma2)

    def power_slope(self) -> float:
        """Asymptotic slope of the power exponent, ``beta (1 - 2 kappa)``."""
        memo = self.__dict__.get("_power_slope")
        if memo is None:
            memo = _rule_slope(self._shape_gap, "chiral shape rule")
            object.__setattr__(self, "_power_slope", memo)
        return memo

    def _shape_gap(self, n: int) -> float:
        return self.beta * (self.t_rule(n) - self.s_rule(n))

    def log_limit_weight(self, x):
        slope = self.power_slope()
        decay = self.log_decay(1, x)
        if np.isscalar(x):
            if slope == 0.0:
                return decay
            return -math.inf if x == 0.0 else slope * math.log(x) + decay
        x = np.asarray(x, dtype=float)
        if slope == 0.0:
            return decay
        out = np.full(x.shape, -np.inf)
        pos = x > 0
        out[pos] = slope * np.log(x[pos]) + np.asarray(decay)[pos]
        return out


@dataclass(frozen=True, eq=False)
class GridWeight(WeightFamily):
    """Size-free weight tabulated as ``log w`` on a grid of nodes.

    Linear interpolation between nodes; the weight is zero (log weight
    ``-inf``) outside the tabulated range.  Used for custom or
    counterexample weights; both ``w_n`` and the limit weight are this
    same tabulated function.
    """

    nodes: tuple[float, ...]
    log_values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.nodes) != len(self.log_values) or len(self.nodes) < 2:
            raise DomainError("need at least two (node, log w) pairs of "
                              "equal length")
        if any(b <= a for a, b in zip(self.nodes, self.nodes[1:])):
            raise DomainError("grid nodes must be strictly increasing")

    def power_exponent(self, n: int) -> float:
        return 0.0

    def _interp(self, x):
        xs = np.asarray(x, dtype=float)
        out = np.interp(xs, self.nodes, self.log_values,
                        left=-np.inf, right=-np.inf)
        return float(out) if np.isscalar(x) else out

    def log_decay(self, n: int, x):
        return self._interp(x)

    def log_limit_weight(self, x):
        return self._interp(x)


def grid_weight_from_csv(path: str) -> GridWeight:
    """Load a :class:`GridWeight` from a two-column CSV of (x, log w)."""
    nodes: list[float] = []
    values: list[float] = []
    with open(path, newline="") as handle:
        for row in csv.reader(handle):
            if not row or row[0].strip().startswith("#"):
                continue
            if len(row) < 2:
                raise DomainError(f"{path}: expected two columns, "
                                  f"got {row!r}")
            try:
                node, value = float(row[0]), float(row[1])
            except ValueError:
                if nodes:
                    raise DomainError(f"{path}: bad numeric row {row!r}")
                continue  # header line
            nodes.append(node)
            values.append(value)
    return GridWeight(tuple(nodes), tuple(values))


# ---------------------------------------------------------------------------
# Ensemble specification


def _default_pn_rule(kappa: float) -> Callable[[int], int]:
    return lambda n: max(1, round(kappa * n))


@dataclass(frozen=True, eq=False)
class EnsembleSpec:
    """Complete description of one eigenvalue ensemble.

    ``form`` selects the interaction: ``"two_factor"`` for
    ``|x-y| |x^theta-y^theta|`` (then ``beta`` must be 1) and
    ``"beta_theta"`` for ``|x^theta-y^theta|^beta``.  ``pn_rule`` maps the
    size to the number of eigenvalues; it must be nondecreasing with
    increments of at most one and slope ``kappa`` (and exactly-unit
    increments when ``kappa == 1``).
    """

    theta: int
    beta: float
    kappa: float
    support: Support
    weight: WeightFamily
    form: str = "two_factor"
    pn_rule: Callable[[int], int] | None = None

    def __post_init__(self) -> None:
        if not (isinstance(self.theta, int) and self.theta >= 1):
            raise DomainError(f"theta must be a positive integer, "
                              f"got {self.theta!r}")
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta}")
        if not 0 < self.kappa <= 1:
            raise DomainError(f"kappa must lie in (0, 1], got {self.kappa}")
        if self.form not in ("two_factor", "beta_theta"):
            raise DomainError(f"unknown form {self.form!r}")
        if self.form == "two_factor" and self.beta != 1.0:
            raise DomainError("the two-factor interaction carries no beta "
                              "power; use form='beta_theta' for beta != 1")
        if self.theta % 2 == 0 and self.support.lo < 0:
            raise DomainError("even theta requires a support within "
                              "[0, inf): x -> x^theta is not injective on "
                              "the real line")
        if isinstance(self.weight, LaguerreWeight) \
                and self.weight.theta != self.theta:
            raise DomainError(f"weight was built for theta="
                              f"{self.weight.theta}, spec has {self.theta}")
        if self.pn_rule is None:
            object.__setattr__(self, "pn_rule",
                               _default_pn_rule(self.kappa))
        self._validate_pn_rule()

    def _validate_pn_rule(self) -> None:
        prev = None
        for n in range(1, 65):
            p = self.pn_rule(n)
            if not (isinstance(p, (int, np.integer)) and p >= 1):
                raise DomainError(f"pn rule must give positive integers, "
                                  f"got {p!r} at n={n}")
            if prev is not None:
                step = p - prev
                if step not in (0, 1):
                    raise DomainError(
                        f"pn rule must be nondecreasing with increments in "
                        f"{{0, 1}}, got step {step} at n={n}")
                if self.kappa == 1.0 and step != 1:
                    raise DomainError(
                        "kappa = 1 requires the eigenvalue count to grow by "
                        f"exactly one per size step; got step {step} at "
                        f"n={n}")
            prev = p
        if abs(self.pn_rule(64) / 64 - self.kappa) > 0.25:
            raise DomainError(
                f"pn rule slope {self.pn_rule(64) / 64:.3g} is far from "
                f"kappa={self.kappa}")

    def p(self, n: int) -> int:
        """Number of eigenvalues at size ``n``."""
        return int(self.pn_rule(n))


@dataclass(frozen=True)
class Configuration:
    """An ordered eigenvalue configuration at a given size."""

    n: int
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values",
                           tuple(float(v) for v in self.values))

    @property
    def largest(self) -> float:
        return max(self.values)


# ---------------------------------------------------------------------------
# Factories for the named ensembles


def bosonic_spec(alpha: int = 0, tau=None) -> EnsembleSpec:
    """Two-factor theta=2 ensemble with weight ``x^alpha e^{-tau(n) x}``.

    ``tau`` may be a constant, a rule ``n -> tau(n)``, or ``None`` for the
    default ``tau = n``.
    """
    return EnsembleSpec(
        theta=2, beta=1.0, kappa=1.0, support=HALF_LINE,
        weight=BosonicWeight(alpha, _as_rule(tau, True, "tau")),
        form="two_factor", pn_rule=lambda n: n)


def laguerre_spec(theta: int, ell=0, tau=None) -> EnsembleSpec:
    """Two-factor ensemble with weight ``x^{l(n)} e^{-tau(n) x}``.

    ``ell`` may be a constant nonnegative integer or a rule
    ``n -> l(n)``.
    """
    l_rule = ell if callable(ell) else (lambda n: int(ell))
    return EnsembleSpec(
        theta=theta, beta=1.0, kappa=1.0, support=HALF_LINE,
        weight=LaguerreWeight(theta, l_rule, _as_rule(tau, True, "tau")),
        form="two_factor", pn_rule=lambda n: n)


def wigner_dyson_spec(beta: float = 2.0) -> EnsembleSpec:
    """Gaussian beta ensemble: ``|x_i - x_j|^beta e^{-n beta x^2/4}``."""
    return EnsembleSpec(
        theta=1, beta=float(beta), kappa=1.0, support=REAL_LINE,
        weight=GaussianBetaWeight(float(beta)),
        form="beta_theta", pn_rule=lambda n: n)


def bdg_spec(bdg_class: str, sigma2: float = 1.0) -> EnsembleSpec:
    """Half-line theta=2 ensemble in one of the classes B, D, C, CI."""
    weight = BdGWeight(bdg_class, float(sigma2))
    return EnsembleSpec(
        theta=2, beta=weight.beta, kappa=1.0, support=HALF_LINE,
        weight=weight, form="beta_theta", pn_rule=lambda n: n)


def chiral_spec(chiral_class: str | None = None, *, beta: float | None = None,
                kappa: float = 0.5, sigma2: float = 1.0,
                s_rule: Callable[[int], int] | None = None,
                t_rule: Callable[[int], int] | None = None) -> EnsembleSpec:
    """Half-line theta=2 ensemble with rectangular shape ``s(n) <= t(n)``.

    Either name a class (BDI, AIII, CII) or give ``beta`` directly.  The
    default shape rules are ``s(n) = floor(kappa n)`` and
    ``t(n) = n - s(n)``; ``kappa`` must satisfy ``0 < kappa <= 1/2`` so
    that ``s <= t``.
    """
    if chiral_class is not None:
        class_beta = CHIRAL_CLASSES.get(chiral_class)
        if class_beta is None:
            raise DomainError(f"unknown class {chiral_class!r}; expected "
                              f"one of {sorted(CHIRAL_CLASSES)}")
        if beta is not None and beta != class_beta:
            raise DomainError(f"class {chiral_class} has beta={class_beta}, "
                              f"got beta={beta}")
        beta = class_beta
    if beta is None:
        raise DomainError("give a chiral class or an explicit beta")
    if not 0 < kappa <= 0.5:
        raise DomainError(f"the rectangular shape needs 0 < kappa <= 1/2, "
                          f"got {kappa}")
    if s_rule is None:
        s_rule = lambda n: max(1, math.floor(kappa * n))
    if t_rule is None:
        t_rule = lambda n, _s=s_rule: n - _s(n)
    weight = ChiralWeight(float(beta), s_rule, t_rule, float(sigma2),
                          chiral_class)
    return EnsembleSpec(
        theta=2, beta=float(beta), kappa=float(kappa), support=HALF_LINE,
        weight=weight, form="beta_theta", pn_rule=s_rule)


def grid_spec(nodes: Sequence[float], log_values: Sequence[float],
              theta: int = 1, beta: float = 1.0, kappa: float = 1.0,
              support: Support | None = None,
              form: str = "two_factor") -> EnsembleSpec:
    """Ensemble over a tabulated weight (see :class:`GridWeight`)."""
    weight = GridWeight(tuple(float(v) for v in nodes),
                        tuple(float(v) for v in log_values))
    if support is None:
        support = Support(min(0.0, weight.nodes[0]), math.inf) \
            if weight.nodes[0] >= 0 else REAL_LINE
    return EnsembleSpec(theta=theta, beta=beta, kappa=kappa,
                        support=support, weight=weight, form=form)


# ---------------------------------------------------------------------------
# Interaction kernel


def log_abs_theta_diff(x, y, theta: int):
    """``log |x^theta - y^theta|``, stable for near-equal and large inputs.

    For same-sign inputs the difference of powers is factored as
    ``(|x| - |y|) * sum_k |x|^k |y|^(theta-1-k)``, so the cancellation
    happens in ``|x| - |y|`` alone; for opposite signs with odd theta the
    two powers add and only overflow needs taming.  Accepts scalars or
    broadcasting arrays; returns ``-inf`` where the difference vanishes.
    """
    scalar = np.isscalar(x) and np.isscalar(y)
    if theta == 1:
        with np.errstate(divide="ignore"):
            out = np.log(np.abs(np.asarray(x, dtype=float)
                                - np.asarray(y, dtype=float)))
        return float(out) if scalar else out

    xv = np.atleast_1d(np.asarray(x, dtype=float))
    yv = np.atleast_1d(np.asarray(y, dtype=float))
    xv, yv = np.broadcast_arrays(xv, yv)
    big = np.maximum(np.abs(xv), np.abs(yv))
    small = np.minimum(np.abs(xv), np.abs(yv))

    out = np.full(big.shape, -np.inf)
    if theta % 2 == 1:
        opposite = xv * yv < 0.0
    else:
        opposite = np.zeros(big.shape, dtype=bool)

    # Same-sign (or even theta): |x^t - y^t| = (big - small) * sum series.
    same = ~opposite & (big > 0)
    if np.any(same):
        b, s = big[same], small[same]
        ratio = s / b
        series = np.ones_like(b)
        for _ in range(theta - 1):
            series = series * ratio + 1.0
        with np.errstate(divide="ignore"):
            out[same] = np.log(b - s) + (theta - 1) * np.log(b) \
                + np.log(series)

    # Opposite signs, odd theta: |x|^t + |y|^t > 0 always.
    if np.any(opposite):
        b, s = big[opposite], small[opposite]
        out[opposite] = theta * np.log(b) + np.log1p((s / b) ** theta)

    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Densities


def log_weight(spec: EnsembleSpec, n: int, x):
    """Total log weight ``n log w_n(x)`` at one or many points.

    Raises :class:`DomainError` for points outside the support; returns
    ``-inf`` exactly where the weight vanishes.
    """
    if np.isscalar(x):
        if not spec.support.contains(float(x)):
            raise DomainError(f"x={x} outside the support "
                              f"[{spec.support.lo}, {spec.support.hi}]")
        return float(spec.weight.log_weight_total(n, float(x)))
    xs = np.asarray(x, dtype=float)
    if not np.all(spec.support.contains_array(xs)):
        bad = xs[~spec.support.contains_array(xs)][0]
        raise DomainError(f"x={bad} outside the support "
                          f"[{spec.support.lo}, {spec.support.hi}]")
    return np.asarray(spec.weight.log_weight_total(n, xs), dtype=float)


def _log_interaction(spec: EnsembleSpec, values: np.ndarray) -> float:
    """Pairwise interaction part of the log density (array of p values)."""
    p = values.size
    if p < 2:
        return 0.0
    i, j = np.triu_indices(p, k=1)
    xi, xj = values[i], values[j]
    theta_part = log_abs_theta_diff(xi, xj, spec.theta)
    if spec.form == "two_factor":
        with np.errstate(divide="ignore"):
            linear = np.log(np.abs(xi - xj))
        total = linear + theta_part
    else:
        total = spec.beta * theta_part
    return float(np.sum(total))


def log_joint_density(spec: EnsembleSpec, config: Configuration) -> float:
    """Log of the unnormalized joint eigenvalue density.

    ``-inf`` when two coordinates coincide or any weight vanishes;
    :class:`DomainError` when the configuration is invalid for the spec
    (wrong count, points off the support).
    """
    expected = spec.p(config.n)
    if len(config.values) != expected:
        raise DomainError(f"configuration has {len(config.values)} values, "
                          f"spec expects p({config.n}) = {expected}")
    values = np.asarray(config.values, dtype=float)
    weights = log_weight(spec, config.n, values)
    total = float(np.sum(weights))
    if math.isinf(total) and total < 0:
        return -math.inf
    inter = _log_interaction(spec, values)
    return inter + total


# ---------------------------------------------------------------------------
# Angelesco systems


@dataclass(frozen=True, eq=False)
class AngelescoSpec:
    """Several eigenvalue groups confined to pairwise disjoint intervals.

    Component ``i`` carries ``n_i ~ r_i n`` points in the interval
    ``intervals[i]`` under the external potential ``potentials[i]``; all
    groups repel each other logarithmically.
    """

    intervals: tuple[Support, ...]
    potentials: tuple[Callable[[float], float], ...]
    ratios: tuple[float, ...]
    n_rule: Callable[[int], tuple[int, ...]] | None = None

    def __post_init__(self) -> None:
        p = len(self.intervals)
        if p < 1:
            raise DomainError("need at least one component")
        if len(self.potentials) != p or len(self.ratios) != p:
            raise DomainError("intervals, potentials, and ratios must have "
                              "equal length")
        if any(not 0 < r < 1 for r in self.ratios) and p > 1:
            raise DomainError("each ratio must lie in (0, 1)")
        if abs(sum(self.ratios) - 1.0) > 1e-12:
            raise DomainError(f"ratios must sum to 1, got "
                              f"{sum(self.ratios)!r}")
        order = sorted(range(p), key=lambda i: self.intervals[i].lo)
        for a, b in zip(order, order[1:]):
            if self.intervals[a].hi >= self.intervals[b].lo:
                raise DomainError(
                    f"intervals {a} and {b} overlap: "
                    f"[{self.intervals[a].lo}, {self.intervals[a].hi}] vs "
                    f"[{self.intervals[b].lo}, {self.intervals[b].hi}]")
        if self.n_rule is None:
            object.__setattr__(self, "n_rule", self._default_n_rule)

    @property
    def p(self) -> int:
        return len(self.intervals)

    def _default_n_rule(self, n: int) -> tuple[int, ...]:
        counts = [max(1, round(r * n)) for r in self.ratios[:-1]]
        counts.append(max(1, n - sum(counts)))
        return tuple(counts)


def log_joint_density_angelesco(aspec: AngelescoSpec,
                                components: Sequence[Sequence[float]],
                                n: int) -> float:
    """Log density of a multi-component configuration.

    ``components[i]`` holds the points of group ``i``; each intra-group
    squared Vandermonde, every cross-group Vandermonde, and the potentials
    scaled by ``n`` enter the sum.  ``-inf`` on within-group ties.
    """
    if len(components) != aspec.p:
        raise DomainError(f"expected {aspec.p} components, "
                          f"got {len(components)}")
    arrays = []
    for i, pts in enumerate(components):
        arr = np.asarray(pts, dtype=float)
        box = aspec.intervals[i]
        if arr.size and not np.all((arr >= box.lo) & (arr <= box.hi)):
            bad = arr[~((arr >= box.lo) & (arr <= box.hi))][0]
            raise DomainError(f"point {bad} of component {i} outside "
                              f"[{box.lo}, {box.hi}]")
        arrays.append(arr)

    total = 0.0
    for i, arr in enumerate(arrays):
        if arr.size >= 2:
            a, b = np.triu_indices(arr.size, k=1)
            with np.errstate(divide="ignore"):
                total += 2.0 * float(np.sum(np.log(np.abs(arr[a]
                                                          - arr[b]))))
        total -= n * float(sum(aspec.potentials[i](float(v)) for v in arr))
    if math.isinf(total):
        return -math.inf
    for i in range(aspec.p):
        for j in range(i + 1, aspec.p):
            if arrays[i].size and arrays[j].size:
                cross = np.abs(arrays[i][:, None] - arrays[j][None, :])
                total += float(np.sum(np.log(cross)))
    return total


# ---------------------------------------------------------------------------
# Tail bound and growth condition


def limit_edge(spec: EnsembleSpec) -> float | None:
    """Right endpoint of the limiting spectral measure, when known.

    Closed forms exist for the Gaussian beta ensemble (2), the bosonic
    two-factor ensemble (3 sqrt 3), the four half-line Gaussian classes
    (sqrt(2 psi sigma^2 beta kappa)), and the rectangular chiral classes;
    ``None`` otherwise.
    """
    w = spec.weight
    if isinstance(w, GaussianBetaWeight):
        return 2.0
    if isinstance(w, BosonicWeight):
        taubar = _rule_slope(w.tau_rule, "tau rule")
        if taubar <= 0:
            return None
        return 3.0 * math.sqrt(3.0) / taubar
    if isinstance(w, BdGWeight):
        return math.sqrt(2.0 * w.psi * w.sigma2 * w.beta * spec.kappa)
    if isinstance(w, ChiralWeight):
        k = spec.kappa
        b = 2.0 * w.sigma2 * w.beta * (0.5 + math.sqrt(k * (1.0 - k)))
        return math.sqrt(b)
    return None


def tail_bound_check(spec: EnsembleSpec, x: float, lam: float, n: int,
                     c: float) -> bool:
    """Whether ``|x-lam| |x^theta-lam^theta| w_n(lam) <= c |x|^(theta+1)``.

    The comparison runs in log scale; ``x`` must satisfy
    ``|x| >= max(b_w, 1)`` (evaluation outside the bulk) and ``lam`` must
    lie in the support.
    """
    if c < 0:
        raise DomainError(f"the bound constant must be nonnegative, "
                          f"got {c}")
    edge = limit_edge(spec)
    floor_x = max(edge if edge is not None else 1.0, 1.0)
    if abs(x) < floor_x:
        raise DomainError(f"|x|={abs(x)} is below max(b_w, 1)={floor_x}; "
                          "the bound concerns points outside the bulk")
    if not spec.support.contains(lam):
        raise DomainError(f"lam={lam} outside the support")
    with np.errstate(divide="ignore"):
        lhs = (float(np.log(abs(x - lam))) if x != lam else -math.inf) \
            + log_abs_theta_diff(x, lam, spec.theta) \
            + log_weight(spec, n, lam) / n
    rhs = (math.log(c) if c > 0 else -math.inf) \
        + (spec.theta + 1) * math.log(abs(x))
    return lhs <= rhs


def estimate_bound_constant(spec: EnsembleSpec, n: int) -> float:
    """A constant ``c`` making :func:`tail_bound_check` hold for all lam.

    Uses ``|x - lam| <= |x| (1 + |lam|/x_min)`` and the matching power
    bound at ``x_min = max(b_w, 1)``, so
    ``c = max(4, sup_lam (1+|lam|/x_min)(1+(|lam|/x_min)^theta) w_n(lam))``
    with the supremum scanned over an expanding grid until the decaying
    weight kills the polynomial growth.
    """
    edge = limit_edge(spec)
    x_min = max(edge if edge is not None else 1.0, 1.0)

    def segment_max(a: float, b: float) -> float:
        if b <= a:
            return -math.inf
        lam = np.linspace(a, b, 4097)
        lam = lam[spec.support.contains_array(lam)]
        if lam.size == 0:
            return -math.inf
        r = np.abs(lam) / x_min
        logs = np.log1p(r) + np.log1p(r ** spec.theta) \
            + np.asarray(log_weight(spec, n, lam)) / n
        return float(np.max(logs))

    radius = 4.0 * x_min
    lo, hi = spec.support.lo, spec.support.hi
    best = segment_max(max(lo, -radius), min(hi, radius))
    while radius < 4096.0 * x_min and (hi > radius or lo < -radius):
        shell = max(segment_max(radius, min(hi, 2.0 * radius)),
                    segment_max(max(lo, -2.0 * radius), -radius))
        best = max(best, shell)
        radius *= 2.0
        if shell < best - 30.0:
            break  # the weight's decay now dominates the polynomial growth
    return max(4.0, math.exp(min(best, 700.0)))


@dataclass(frozen=True)
class GrowthReport:
    """Decay diagnostic for ``|x|^((theta+1)(kappa+eps)) sup_n w_n(x)``."""

    points: tuple[float, ...]
    values: tuple[float, ...]
    threshold_index: int | None
    passed: bool

    def __str__(self) -> str:
        verdict = "pass" if self.passed else "fail"
        where = (f" beyond x={self.points[self.threshold_index]:g}"
                 if self.threshold_index is not None else "")
        return (f"growth check: {verdict}{where}; final value "
                f"{self.values[-1]:.3e} at x={self.points[-1]:g}")


def check_growth_condition(spec: EnsembleSpec, epsilon: float,
                           grid: Sequence[float],
                           n_set: Sequence[int] = (4, 8, 16, 32, 64, 128),
                           ) -> GrowthReport:
    """Check that the weight beats the interaction's polynomial growth.

    For each grid point this evaluates
    ``|x|^((theta+1)(kappa+epsilon)) * sup_n w_n(x)`` with the supremum
    over ``n_set`` plus the limit weight, and passes when the sequence is
    strictly decreasing from some threshold on and ends no larger than
    ``min(1, its value at the threshold)``.
    """
    if epsilon <= 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    pts = np.asarray(sorted(float(g) for g in grid), dtype=float)
    if pts.size == 0:
        raise DomainError("empty grid")
    if not np.all(spec.support.contains_array(pts)):
        raise DomainError("grid points must lie in the support")

    exponent = (spec.theta + 1) * (spec.kappa + epsilon)
    sup_log_w = np.full(pts.shape, -np.inf)
    for n in n_set:
        sup_log_w = np.maximum(sup_log_w,
                               np.asarray(log_weight(spec, n, pts)) / n)
    sup_log_w = np.maximum(sup_log_w, np.asarray(
        spec.weight.log_limit_weight(pts), dtype=float))
    with np.errstate(divide="ignore"):
        log_vals = exponent * np.log(np.maximum(np.abs(pts), 1e-300)) \
            + sup_log_w
    values = np.exp(np.minimum(log_vals, 700.0))

    threshold: int | None = None
    if values.size >= 2:
        decreasing = np.diff(values) < 0
        if np.all(decreasing):
            threshold = 0
        else:
            candidate = int(np.nonzero(~decreasing)[0][-1]) + 1
            if candidate <= values.size - 2:
                threshold = candidate
    passed = (threshold is not None
              and values[-1] <= min(1.0, values[threshold]))
    return GrowthReport(tuple(pts), tuple(values), threshold, passed)
