"""Closed-form limiting spectral measures, quadrature against them, and a
discretized equilibrium-energy minimizer that must reproduce them.

Every closed-form measure carries a smooth internal parameterization
(``_transform``) chosen so that edge singularities of the density
(inverse cube root, inverse square root) disappear from the integrand;
quadrature, CDF tables and inverse-CDF sampling all go through it.  The
equilibrium solver minimizes the discretized log-energy over probability
vectors on a grid with an accelerated projected-gradient method and is
validated against the closed forms.
"""

from __future__ import annotations

import csv
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .ensembles import (
    BdGWeight, BosonicWeight, ChiralWeight, EnsembleSpec,
    GaussianBetaWeight, log_abs_theta_diff, _rule_slope,
)
from .errors import (
    AccuracyError, ConvergenceError, DomainError, InitializationError,
    UnsupportedWeightError,
)

__all__ = [
    "SpectralMeasure", "BosonicRho", "Semicircle", "BdGMeasure",
    "ChiralMeasure", "GridMeasure", "EmpiricalMeasure",
    "grid_measure_from_csv", "limit_measure", "limit_log_weight",
    "density_at", "integrate", "integrate_log_kernel", "cdf", "quantile",
    "sample_inverse_cdf", "ks_distance", "l1_density_distance",
    "EquilibriumReport", "solve_equilibrium", "equilibrium_report",
    "solve_equilibrium_angelesco",
]

_CDF_POINTS = 16385
_SUPPORT_EPS = 1e-12


class SpectralMeasure(ABC):
    """A probability measure on the real line with a named density."""

    @property
    @abstractmethod
    def support_left(self) -> float:
        """Left endpoint ``a_w`` of the support."""

    @property
    @abstractmethod
    def support_right(self) -> float:
        """Right endpoint ``b_w`` of the support."""

    @abstractmethod
    def density_at(self, y):
        """Pointwise density, zero outside the support; array-aware."""

    @abstractmethod
    def _transform(self):
        """Internal parameterization ``(lo, hi, to_y, jacobian)``.

        ``to_y`` maps the internal coordinate ``u`` in ``[lo, hi]`` to a
        support point and ``jacobian(u)`` is ``d mu / d u``, smooth on the
        closed interval, so that ``int f dmu = int f(to_y(u)) jac(u) du``.
        """

    @abstractmethod
    def _to_internal(self, y: float) -> float:
        """Inverse of the parameterization's ``to_y`` (support points)."""

    def _cdf_table(self):
        memo = self.__dict__.get("_cdf_memo")
        if memo is None:
            lo, hi, to_y, jac = self._transform()
            u = np.linspace(lo, hi, _CDF_POINTS)
            ys = to_y(u)
            dens = jac(u)
            mass = np.concatenate(
                ([0.0],
                 np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(u))))
            total = mass[-1]
            if not math.isfinite(total) or abs(total - 1.0) > 1e-6:
                raise AccuracyError(
                    f"CDF table mass {total} is not 1 within 1e-6",
                    estimate=total, error_bound=abs(total - 1.0))
            mass /= total
            memo = (np.asarray(ys, dtype=float), mass)
            object.__setattr__(self, "_cdf_memo", memo)
        return memo

    def cdf(self, y):
        """Cumulative distribution function; array-aware."""
        ys, mass = self._cdf_table()
        return np.interp(y, ys, mass, left=0.0, right=1.0)

    def quantile(self, q):
        """Inverse CDF on [0, 1]; array-aware."""
        ys, mass = self._cdf_table()
        qs = np.asarray(q, dtype=float)
        if np.any((qs < 0.0) | (qs > 1.0)):
            raise DomainError("quantile levels must lie in [0, 1]")
        out = np.interp(qs, mass, ys)
        return float(out) if np.isscalar(q) else out


@dataclass(frozen=True, eq=False)
class BosonicRho(SpectralMeasure):
    """The cube-root-edge limit density on ``(0, 3 sqrt 3 * scale]``.

    At ``scale = 1`` (decay rate growing exactly like the size):
    ``rho(t) = (1/2 pi) (t/b)^{-1/3} [(1 + s)^{1/3} - (1 - s)^{1/3}]``
    with ``s = sqrt(1 - t^2/b^2)`` and ``b = 3 sqrt 3``.  A decay slope
    ``taubar`` rescales lengths by ``scale = 1/taubar``.
    """

    scale: float = 1.0

    def __post_init__(self) -> None:
        if not (self.scale > 0.0) or not math.isfinite(self.scale):
            raise DomainError(f"scale must be positive, got {self.scale}")

    @property
    def support_left(self) -> float:
        return 0.0

    @property
    def support_right(self) -> float:
        return 3.0 * math.sqrt(3.0) * self.scale

    def density_at(self, y):
        b = 3.0 * math.sqrt(3.0)
        ys = np.atleast_1d(np.asarray(y, dtype=float)) / self.scale
        out = np.zeros_like(ys)
        inside = (ys > 0.0) & (ys <= b)
        t = ys[inside]
        s = np.sqrt(np.maximum(0.0, 1.0 - (t / b) ** 2))
        out[inside] = (np.cbrt(b / t) * (np.cbrt(1.0 + s) - np.cbrt(1.0 - s))
                       / (2.0 * math.pi))
        out /= self.scale
        return float(out[0]) if np.isscalar(y) else out

    def _transform(self):
        b = 3.0 * math.sqrt(3.0)
        scale = self.scale

        def to_y(u):
            return scale * b * np.asarray(u, dtype=float) ** 3

        def jac(u):
            us = np.asarray(u, dtype=float)
            s = np.sqrt(np.maximum(0.0, 1.0 - us ** 6))
            return (3.0 * b / (2.0 * math.pi)) * us \
                * (np.cbrt(1.0 + s) - np.cbrt(1.0 - s))

        return 0.0, 1.0, to_y, jac

    def _to_internal(self, y: float) -> float:
        b = 3.0 * math.sqrt(3.0)
        return float(np.cbrt(np.clip(y / (self.scale * b), 0.0, 1.0)))


@dataclass(frozen=True, eq=False)
class Semicircle(SpectralMeasure):
    """The semicircle law of the given radius, centered at zero."""

    radius: float = 2.0

    def __post_init__(self) -> None:
        if not (self.radius > 0.0):
            raise DomainError(f"radius must be positive, got {self.radius}")

    @property
    def support_left(self) -> float:
        return -self.radius

    @property
    def support_right(self) -> float:
        return self.radius

    def density_at(self, y):
        r = self.radius
        ys = np.atleast_1d(np.asarray(y, dtype=float))
        out = np.zeros_like(ys)
        inside = np.abs(ys) <= r
        out[inside] = (2.0 / (math.pi * r * r)) \
            * np.sqrt(np.maximum(0.0, r * r - ys[inside] ** 2))
        return float(out[0]) if np.isscalar(y) else out

    def _transform(self):
        r = self.radius

        def to_y(u):
            return r * np.sin(np.asarray(u, dtype=float))

        def jac(u):
            return (2.0 / math.pi) * np.cos(np.asarray(u, dtype=float)) ** 2

        return -0.5 * math.pi, 0.5 * math.pi, to_y, jac

    def _to_internal(self, y: float) -> float:
        return float(np.arcsin(np.clip(y / self.radius, -1.0, 1.0)))


@dataclass(frozen=True, eq=False)
class BdGMeasure(SpectralMeasure):
    """Quarter-circle-type law on ``[0, sqrt(2 psi sigma2 beta kappa)]``.

    Density ``(2/(psi sigma2 beta kappa pi)) sqrt(c - y^2)`` with
    ``c = 2 psi sigma2 beta kappa``.
    """

    psi: float
    sigma2: float
    beta: float
    kappa: float = 1.0

    def __post_init__(self) -> None:
        if min(self.psi, self.sigma2, self.beta, self.kappa) <= 0.0:
            raise DomainError("psi, sigma2, beta, kappa must be positive")

    @property
    def edge_sq(self) -> float:
        """``c = 2 psi sigma2 beta kappa``, the squared right endpoint."""
        return 2.0 * self.psi * self.sigma2 * self.beta * self.kappa

    @property
    def support_left(self) -> float:
        return 0.0

    @property
    def support_right(self) -> float:
        return math.sqrt(self.edge_sq)

    def density_at(self, y):
        c = self.edge_sq
        ys = np.atleast_1d(np.asarray(y, dtype=float))
        out = np.zeros_like(ys)
        inside = (ys >= 0.0) & (ys <= math.sqrt(c))
        out[inside] = (4.0 / (c * math.pi)) \
            * np.sqrt(np.maximum(0.0, c - ys[inside] ** 2))
        return float(out[0]) if np.isscalar(y) else out

    def _transform(self):
        root_c = self.support_right

        def to_y(u):
            return root_c * np.sin(np.asarray(u, dtype=float))

        def jac(u):
            return (4.0 / math.pi) * np.cos(np.asarray(u, dtype=float)) ** 2

        return 0.0, 0.5 * math.pi, to_y, jac

    def _to_internal(self, y: float) -> float:
        return float(np.arcsin(np.clip(y / self.support_right, 0.0, 1.0)))


@dataclass(frozen=True, eq=False)
class ChiralMeasure(SpectralMeasure):
    """Band law on ``[sqrt a, sqrt b]`` for the rectangular-block family.

    Density ``sqrt((y^2 - a)(b - y^2)) / (sigma2 beta kappa pi y)`` with
    ``a, b = 2 sigma2 beta (1/2 -+ sqrt(kappa (1 - kappa)))``.  At
    ``kappa = 1/2`` the lower endpoint degenerates to 0 and the density
    stays integrable (the parameterization below remains smooth).
    """

    beta: float
    sigma2: float
    kappa: float

    def __post_init__(self) -> None:
        if min(self.beta, self.sigma2) <= 0.0:
            raise DomainError("beta and sigma2 must be positive")
        if not (0.0 < self.kappa <= 0.5):
            raise DomainError(f"kappa must lie in (0, 1/2], got {self.kappa}")

    @property
    def endpoints_sq(self) -> tuple[float, float]:
        """``(a, b)``, the squared support endpoints."""
        base = 2.0 * self.sigma2 * self.beta
        spread = math.sqrt(self.kappa * (1.0 - self.kappa))
        return base * (0.5 - spread), base * (0.5 + spread)

    @property
    def support_left(self) -> float:
        return math.sqrt(max(0.0, self.endpoints_sq[0]))

    @property
    def support_right(self) -> float:
        return math.sqrt(self.endpoints_sq[1])

    def density_at(self, y):
        a, b = self.endpoints_sq
        pref = self.sigma2 * self.beta * self.kappa * math.pi
        ys = np.atleast_1d(np.asarray(y, dtype=float))
        out = np.zeros_like(ys)
        sq = ys ** 2
        inside = (sq >= a) & (sq <= b) & (ys > 0.0)
        out[inside] = np.sqrt(
            np.maximum(0.0, (sq[inside] - a) * (b - sq[inside]))) \
            / (pref * ys[inside])
        if a == 0.0:
            # Finite limit sqrt(b)/pref as y -> 0+ when the edge is soft.
            at_zero = ys == 0.0
            out[at_zero] = math.sqrt(b) / pref
        return float(out[0]) if np.isscalar(y) else out

    def _transform(self):
        a, b = self.endpoints_sq
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        pref = 2.0 * math.pi * self.sigma2 * self.beta * self.kappa

        def to_y(u):
            return np.sqrt(np.maximum(
                0.0, mid + half * np.sin(np.asarray(u, dtype=float))))

        if a == 0.0:
            def jac(u):
                return half * (1.0 - np.sin(np.asarray(u, dtype=float))) \
                    / pref
        else:
            def jac(u):
                us = np.asarray(u, dtype=float)
                return half * half * np.cos(us) ** 2 \
                    / (pref * (mid + half * np.sin(us)))

        return -0.5 * math.pi, 0.5 * math.pi, to_y, jac

    def _to_internal(self, y: float) -> float:
        a, b = self.endpoints_sq
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        return float(np.arcsin(np.clip((y * y - mid) / half, -1.0, 1.0)))


@dataclass(frozen=True, eq=False)
class GridMeasure(SpectralMeasure):
    """A probability vector on sorted grid nodes.

    Integration is by summation over the atoms; for CDF and density
    purposes each node's mass is spread uniformly over its cell (the
    interval between neighboring midpoints), giving a piecewise-constant
    density and a piecewise-linear CDF.
    """

    nodes: np.ndarray
    weights: np.ndarray

    def __init__(self, nodes, weights):
        nodes = np.array(nodes, dtype=float)
        weights = np.array(weights, dtype=float)
        if nodes.ndim != 1 or nodes.size < 1:
            raise DomainError("nodes must be a nonempty 1-d array")
        if nodes.size > 1 and not np.all(np.diff(nodes) > 0):
            raise DomainError("nodes must be strictly increasing")
        if weights.shape != nodes.shape:
            raise DomainError("weights must match nodes in shape")
        if np.any(weights < -1e-15) or not np.all(np.isfinite(weights)):
            raise DomainError("weights must be finite and nonnegative")
        weights = np.maximum(weights, 0.0)
        total = float(weights.sum())
        if abs(total - 1.0) > 1e-6:
            raise DomainError(f"weights must sum to 1 within 1e-6, "
                              f"got {total}")
        weights = weights / total
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def cell_edges(self) -> np.ndarray:
        """Cell boundaries: midpoints between nodes, extended at the ends."""
        memo = self.__dict__.get("_edges_memo")
        if memo is None:
            x = self.nodes
            if x.size == 1:
                memo = np.array([x[0] - 0.5, x[0] + 0.5])
            else:
                mids = 0.5 * (x[1:] + x[:-1])
                memo = np.concatenate(
                    ([x[0] - 0.5 * (x[1] - x[0])], mids,
                     [x[-1] + 0.5 * (x[-1] - x[-2])]))
            memo.setflags(write=False)
            object.__setattr__(self, "_edges_memo", memo)
        return memo

    @property
    def _positive(self) -> np.ndarray:
        return self.weights > _SUPPORT_EPS

    @property
    def support_left(self) -> float:
        pos = self._positive
        return float(self.nodes[pos][0]) if pos.any() else float(self.nodes[0])

    @property
    def support_right(self) -> float:
        pos = self._positive
        return float(self.nodes[pos][-1]) if pos.any() \
            else float(self.nodes[-1])

    def density_at(self, y):
        edges = self.cell_edges
        dens = self.weights / np.diff(edges)
        ys = np.atleast_1d(np.asarray(y, dtype=float))
        idx = np.searchsorted(edges, ys, side="right") - 1
        inside = (idx >= 0) & (idx < dens.size)
        out = np.zeros_like(ys)
        out[inside] = dens[idx[inside]]
        return float(out[0]) if np.isscalar(y) else out

    def cdf(self, y):
        edges = self.cell_edges
        cum = np.concatenate(([0.0], np.cumsum(self.weights)))
        cum[-1] = 1.0
        return np.interp(y, edges, cum, left=0.0, right=1.0)

    def quantile(self, q):
        edges = self.cell_edges
        cum = np.concatenate(([0.0], np.cumsum(self.weights)))
        cum[-1] = 1.0
        qs = np.asarray(q, dtype=float)
        if np.any((qs < 0.0) | (qs > 1.0)):
            raise DomainError("quantile levels must lie in [0, 1]")
        out = np.interp(qs, cum, edges)
        return float(out) if np.isscalar(q) else out

    def _transform(self):
        raise UnsupportedWeightError(
            "grid measures integrate by summation, not quadrature")

    def _to_internal(self, y: float) -> float:
        raise UnsupportedWeightError(
            "grid measures have no smooth parameterization")

    def save_csv(self, path) -> None:
        """Write (node, weight) rows."""
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["node", "weight"])
            for x, w in zip(self.nodes, self.weights):
                writer.writerow([repr(float(x)), repr(float(w))])

    def save_cdf_csv(self, path) -> None:
        """Write (node, cdf) rows, the CDF evaluated at the nodes."""
        values = self.cdf(self.nodes)
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["node", "cdf"])
            for x, c in zip(self.nodes, values):
                writer.writerow([repr(float(x)), repr(float(c))])


def grid_measure_from_csv(path) -> GridMeasure:
    """Read a (node, weight) CSV written by :meth:`GridMeasure.save_csv`."""
    nodes: list[float] = []
    weights: list[float] = []
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise DomainError(f"{path}: empty grid-measure file")
        for row in reader:
            if not row or not row[0].strip():
                continue
            if len(row) < 2:
                raise DomainError(f"{path}: malformed row {row!r}")
            nodes.append(float(row[0]))
            weights.append(float(row[1]))
    return GridMeasure(np.asarray(nodes), np.asarray(weights))


@dataclass(frozen=True, eq=False)
class EmpiricalMeasure:
    """A sample together with its induced histogram."""

    values: np.ndarray
    bin_edges: np.ndarray
    counts: np.ndarray

    def __init__(self, values, bins: int = 64):
        values = np.sort(np.asarray(values, dtype=float).ravel())
        if values.size == 0:
            raise DomainError("empirical measure needs a nonempty sample")
        if not np.all(np.isfinite(values)):
            raise DomainError("sample values must be finite")
        counts, edges = np.histogram(values, bins=bins)
        values.setflags(write=False)
        edges.setflags(write=False)
        counts.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "counts", counts)

    @property
    def size(self) -> int:
        return int(self.values.size)


# ---------------------------------------------------------------------------
# Quadrature


def integrate(measure: SpectralMeasure, f, singularities=()) -> float:
    """``int f dmu`` with absolute error below 1e-8 (1e-6 when ``f`` has a
    declared logarithmic singularity).

    ``singularities`` lists points where ``f`` is singular-but-integrable;
    interior ones become quadrature split points, edge ones only relax
    the tolerance.  Grid measures integrate by exact summation.
    """
    if isinstance(measure, GridMeasure):
        pos = measure._positive
        vals = np.array([float(f(x)) for x in measure.nodes[pos]])
        return float(np.sum(vals * measure.weights[pos]))

    lo, hi, to_y, jac = measure._transform()
    tol = 1e-6 if len(singularities) else 1e-9
    interior = []
    for point in singularities:
        u = measure._to_internal(float(point))
        if lo + 1e-12 < u < hi - 1e-12:
            interior.append(u)

    def integrand(u):
        return f(float(to_y(u))) * float(jac(u))

    result = quad(integrand, lo, hi, points=sorted(interior) or None,
                  limit=400, epsabs=tol * 1e-2, epsrel=1e-10,
                  full_output=1)
    value, abserr = result[0], result[1]
    if len(result) > 3 and abserr > tol:
        raise AccuracyError(
            f"quadrature did not reach tolerance {tol}: {result[3]}",
            estimate=value, error_bound=abserr)
    if abserr > tol:
        raise AccuracyError(
            f"quadrature error bound {abserr} above tolerance {tol}",
            estimate=value, error_bound=abserr)
    return float(value)


def integrate_log_kernel(measure: SpectralMeasure, x: float, theta: int,
                         part: str = "both") -> float:
    """``int [log|x - y| + log|x^theta - y^theta|] dmu(y)`` outside the
    support.

    ``part`` selects the full kernel (``"both"``), the plain logarithm
    (``"linear"``) or the theta-deformed half (``"theta"``).  Evaluation
    points strictly inside the open support are rejected: rate functions
    only ever evaluate at the support edge or beyond, where the kernel
    has at worst the boundary logarithmic singularity.
    """
    if part not in ("both", "linear", "theta"):
        raise DomainError(f"unknown kernel part {part!r}")
    theta = int(theta)
    if theta < 1:
        raise DomainError(f"theta must be a positive integer, got {theta}")
    x = float(x)
    a_w, b_w = measure.support_left, measure.support_right
    margin = 1e-12 * max(1.0, abs(a_w), abs(b_w))
    if a_w + margin < x < b_w - margin:
        raise DomainError(
            f"x={x} lies in the open support interior ({a_w}, {b_w})")

    def f(y):
        total = 0.0
        if part in ("both", "linear"):
            diff = abs(x - y)
            total += math.log(diff) if diff > 0.0 else -math.inf
        if part in ("both", "theta"):
            total += log_abs_theta_diff(x, y, theta)
        return total

    edge_sing = min(abs(x - a_w), abs(x - b_w)) <= margin
    return integrate(measure, f, singularities=(x,) if edge_sing else ())


def cdf(measure: SpectralMeasure, y):
    """CDF of any measure at one or many points."""
    return measure.cdf(y)


def quantile(measure: SpectralMeasure, q):
    """Inverse CDF of any measure at one or many levels."""
    return measure.quantile(q)


def density_at(measure: SpectralMeasure, y):
    """Pointwise density of any measure; zero outside its support."""
    return measure.density_at(y)


def sample_inverse_cdf(measure: SpectralMeasure, size: int,
                       rng: np.random.Generator) -> np.ndarray:
    """Draw an i.i.d. sample by inverse-CDF transform."""
    if size < 1:
        raise DomainError(f"sample size must be positive, got {size}")
    return np.asarray(measure.quantile(rng.random(size)), dtype=float)


def ks_distance(emp: EmpiricalMeasure, measure: SpectralMeasure) -> float:
    """Kolmogorov-Smirnov sup-distance between the sample's empirical CDF
    and the measure's CDF."""
    values = emp.values
    m = values.size
    model = np.asarray(measure.cdf(values), dtype=float)
    upper = np.arange(1, m + 1) / m - model
    lower = model - np.arange(0, m) / m
    return float(max(upper.max(), lower.max(), 0.0))


def l1_density_distance(first: SpectralMeasure, second: SpectralMeasure,
                        resolution: int = 16385) -> float:
    """``int |f - g|`` over the union of supports, by dense trapezoid."""
    lo = min(first.support_left, second.support_left)
    hi = max(first.support_right, second.support_right)
    pad = 1e-9 * max(1.0, abs(lo), abs(hi))
    ys = np.linspace(lo + pad, hi - pad, resolution)
    gap = np.abs(np.asarray(first.density_at(ys), dtype=float)
                 - np.asarray(second.density_at(ys), dtype=float))
    gap[~np.isfinite(gap)] = 0.0
    return float(np.trapezoid(gap, ys))


# ---------------------------------------------------------------------------
# Limit objects of an ensemble


def limit_log_weight(spec: EnsembleSpec, x):
    """``log w(x)`` of the limit weight, ``-inf`` outside the support."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.full(xs.shape, -np.inf)
    inside = spec.support.contains_array(xs)
    if inside.any():
        out[inside] = np.asarray(
            spec.weight.log_limit_weight(xs[inside]), dtype=float)
    return float(out[0]) if np.isscalar(x) else out


def limit_measure(spec: EnsembleSpec) -> SpectralMeasure:
    """The closed-form limiting spectral measure of the ensemble."""
    weight = spec.weight
    if isinstance(weight, BosonicWeight):
        taubar = _rule_slope(weight.tau_rule, "tau rule")
        if taubar <= 0.0:
            raise UnsupportedWeightError(
                "the closed-form limit needs a decay rule with positive "
                f"linear slope; probed slope {taubar}")
        return BosonicRho(scale=1.0 / taubar)
    if isinstance(weight, GaussianBetaWeight):
        return Semicircle(radius=2.0)
    if isinstance(weight, BdGWeight):
        return BdGMeasure(psi=weight.psi, sigma2=weight.sigma2,
                          beta=weight.beta, kappa=spec.kappa)
    if isinstance(weight, ChiralWeight):
        return ChiralMeasure(beta=weight.beta, sigma2=weight.sigma2,
                             kappa=spec.kappa)
    raise UnsupportedWeightError(
        f"no closed-form limiting measure for {type(weight).__name__}")


# ---------------------------------------------------------------------------
# Equilibrium solver


def _simplex_project(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    rho = np.nonzero(u * np.arange(1, v.size + 1) > css)[0][-1]
    lam = css[rho] / (rho + 1.0)
    return np.maximum(v - lam, 0.0)


def _accelerated_minimize(objective_and_grad, project, start: np.ndarray,
                          max_iterations: int, tolerance: float):
    """Monotone accelerated projected-gradient descent.

    Backtracking halves the step from 1.0 until the local majorization
    bound holds; momentum restarts whenever the accelerated point stops
    improving on the best iterate.  Returns
    ``(best, energy, history, converged, last_decrease)``.
    """
    p = np.asarray(start, dtype=float)
    energy, _ = objective_and_grad(p)
    momentum = p.copy()
    t_acc = 1.0
    step = 1.0
    history = [energy]
    converged = False
    decrease = math.inf

    def prox_step(point, value, grad):
        nonlocal step
        while True:
            candidate = project(point - step * grad)
            delta = candidate - point
            cand_energy, _ = objective_and_grad(candidate)
            bound = value + float(grad @ delta) \
                + float(delta @ delta) / (2.0 * step)
            if cand_energy <= bound + 1e-15 or step < 1e-18:
                return candidate, cand_energy
            step *= 0.5

    for _ in range(max_iterations):
        e_y, g_y = objective_and_grad(momentum)
        candidate, e_c = prox_step(momentum, e_y, g_y)
        if e_c > energy:
            # The accelerated point overshot: restart momentum at the
            # best iterate; the majorization bound then guarantees
            # e_c <= energy.
            momentum = p.copy()
            t_acc = 1.0
            e_y, g_y = objective_and_grad(momentum)
            candidate, e_c = prox_step(momentum, e_y, g_y)
        decrease = energy - e_c
        t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t_acc * t_acc))
        momentum = candidate + ((t_acc - 1.0) / t_next) * (candidate - p)
        t_acc = t_next
        if e_c <= energy:
            p = candidate
            energy = e_c
        history.append(energy)
        if 0.0 <= decrease < tolerance:
            converged = True
            break
    return p, energy, history, converged, decrease


def _interaction_matrix(spec: EnsembleSpec, x: np.ndarray) -> np.ndarray:
    """Discretized pairwise kernel with cell-averaged diagonal."""
    theta = spec.theta
    xi = x[:, None]
    xj = x[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        linear = np.log(np.abs(xi - xj))
        theta_part = np.log(np.abs(xi ** theta - xj ** theta))
    if theta > 1:
        off = ~np.eye(x.size, dtype=bool)
        pair = np.broadcast_to(xi, linear.shape)[off], \
            np.broadcast_to(xj, linear.shape)[off]
        theta_part[off] = log_abs_theta_diff(pair[0], pair[1], theta)
    # Cell-averaged self-interaction: the average of log|x - y| over a
    # cell of half-width h around x is log h - 1; the theta half adds the
    # local derivative factor log(theta |x|^(theta-1)), clamped at the
    # cell scale so the origin stays finite.
    if x.size == 1:
        half = np.array([0.5])
    else:
        gaps = np.diff(x)
        half = 0.5 * np.concatenate(
            ([gaps[0]], 0.5 * (gaps[1:] + gaps[:-1]), [gaps[-1]]))
    diag_lin = np.log(half) - 1.0
    diag_theta = diag_lin + np.log(
        theta * np.maximum(np.abs(x), half) ** (theta - 1))
    idx = np.arange(x.size)
    linear[idx, idx] = diag_lin
    theta_part[idx, idx] = diag_theta
    if spec.form == "two_factor":
        return linear + theta_part
    return spec.beta * theta_part


def _prepare_grid(spec: EnsembleSpec, grid) -> tuple[np.ndarray, np.ndarray]:
    nodes = np.asarray(grid, dtype=float)
    if nodes.ndim != 1 or nodes.size < 2:
        raise InitializationError("grid must be a 1-d array of at least "
                                  "two nodes")
    if not np.all(np.diff(nodes) > 0):
        raise InitializationError("grid nodes must be strictly increasing")
    potential = limit_log_weight(spec, nodes)
    if np.count_nonzero(np.isfinite(potential)) < 2:
        raise InitializationError(
            "fewer than two grid nodes carry positive limit weight inside "
            "the support; enlarge or shift the grid")
    return nodes, potential


@dataclass(frozen=True)
class EquilibriumReport:
    """Discrete first-order optimality diagnostics of a solved measure.

    ``flat_deviation`` is the spread (max minus min) of the effective
    potential over the numerical support; ``off_support_margin`` is the
    smallest amount by which the potential off the support exceeds the
    support level (positive means the variational inequality holds);
    ``support_size`` counts nodes above the mass threshold.
    """

    flat_deviation: float
    off_support_margin: float
    support_size: int
    objective: float


_MASS_THRESHOLD = 1e-7


def solve_equilibrium(spec: EnsembleSpec, grid, *, max_iterations: int = 40000,
                      tolerance: float = 1e-10) -> GridMeasure:
    """Minimize the discretized interaction energy over the grid simplex.

    The energy of a probability vector ``p`` on admissible nodes is
    ``E(p) = -(kappa/2) p K p - v p`` with ``K`` the form's pairwise log
    kernel (cell-averaged diagonal) and ``v`` the limit log weight.
    Minimization is by accelerated projected gradient descent with
    backtracking (halving from 1.0) and restart on nonmonotone steps;
    convergence is declared when the objective decrease per step falls
    below ``tolerance``.
    """
    nodes, potential = _prepare_grid(spec, grid)
    active = np.isfinite(potential)
    x = nodes[active]
    v = potential[active]
    kernel = _interaction_matrix(spec, x)
    kappa = spec.kappa

    def objective_and_grad(p):
        kp = kernel @ p
        value = -0.5 * kappa * float(p @ kp) - float(v @ p)
        return value, -kappa * kp - v

    m = x.size
    start = np.full(m, 1.0 / m)
    p, _, history, converged, decrease = _accelerated_minimize(
        objective_and_grad, _simplex_project, start, max_iterations,
        tolerance)
    weights = np.zeros(nodes.size)
    weights[active] = p
    if not converged:
        raise ConvergenceError(
            f"equilibrium solver did not converge within {max_iterations} "
            f"iterations (last decrease {decrease:.3e})",
            last_iterate=GridMeasure(nodes, weights / weights.sum()),
            history=history[-50:])
    return GridMeasure(nodes, weights)


def equilibrium_report(spec: EnsembleSpec,
                       measure: GridMeasure) -> EquilibriumReport:
    """First-order optimality diagnostics for a solved grid measure."""
    nodes = measure.nodes
    potential = limit_log_weight(spec, nodes)
    active = np.isfinite(potential)
    x = nodes[active]
    v = potential[active]
    p = measure.weights[active]
    kernel = _interaction_matrix(spec, x)
    effective = -spec.kappa * (kernel @ p) - v
    on_support = p > _MASS_THRESHOLD
    phi_s = effective[on_support]
    flat = float(phi_s.max() - phi_s.min()) if phi_s.size else math.inf
    level = float(phi_s.max()) if phi_s.size else math.inf
    off = effective[~on_support]
    margin = float(off.min() - level) if off.size else math.inf
    objective = -0.5 * spec.kappa * float(p @ (kernel @ p)) - float(v @ p)
    return EquilibriumReport(flat_deviation=flat, off_support_margin=margin,
                             support_size=int(on_support.sum()),
                             objective=objective)


# ---------------------------------------------------------------------------
# Angelesco systems: vector equilibrium


def solve_equilibrium_angelesco(aspec, grids, *, max_iterations: int = 40000,
                                tolerance: float = 1e-10
                                ) -> tuple[GridMeasure, ...]:
    """Joint minimizer of the multi-component interaction energy.

    One probability vector per component, each supported on its own
    interval's grid; components repel each other through the plain log
    kernel with ratio-weighted coupling:
    ``E = -sum_i r_i^2 (1/2) p_i K_ii p_i - sum_{i<j} r_i r_j p_i K_ij p_j
    + sum_i r_i V_i p_i`` (note the attractive external fields enter with
    ``+``; all kernels are negated logs handled by sign here).
    """
    grids = [np.asarray(g, dtype=float) for g in grids]
    if len(grids) != len(aspec.intervals):
        raise InitializationError(
            f"need one grid per component: {len(grids)} grids for "
            f"{len(aspec.intervals)} intervals")
    ratios = np.asarray(aspec.ratios, dtype=float)
    blocks: list[np.ndarray] = []
    fields: list[np.ndarray] = []
    for index, (g, interval) in enumerate(zip(grids, aspec.intervals)):
        if g.ndim != 1 or g.size < 2 or not np.all(np.diff(g) > 0):
            raise InitializationError(
                f"component {index}: grid must be strictly increasing with "
                "at least two nodes")
        if g[0] < interval.lo - 1e-12 or g[-1] > interval.hi + 1e-12:
            raise InitializationError(
                f"component {index}: grid leaves its interval "
                f"[{interval.lo}, {interval.hi}]")
        blocks.append(g)
        fields.append(np.asarray(
            [float(aspec.potentials[index](t)) for t in g], dtype=float))

    sizes = [g.size for g in blocks]
    offsets = np.concatenate(([0], np.cumsum(sizes)))
    p_count = len(blocks)

    kernels: dict[tuple[int, int], np.ndarray] = {}
    for i in range(p_count):
        kernels[(i, i)] = _plain_log_matrix(blocks[i])
        for j in range(i + 1, p_count):
            with np.errstate(divide="ignore"):
                cross = np.log(np.abs(blocks[i][:, None]
                                      - blocks[j][None, :]))
            kernels[(i, j)] = cross

    def split(vec):
        return [vec[offsets[i]:offsets[i + 1]] for i in range(p_count)]

    def objective_and_grad(vec):
        parts = split(vec)
        value = 0.0
        grads = [None] * p_count
        for i in range(p_count):
            self_k = kernels[(i, i)] @ parts[i]
            value += -0.5 * ratios[i] ** 2 * float(parts[i] @ self_k) \
                + ratios[i] * float(fields[i] @ parts[i])
            grad_i = -(ratios[i] ** 2) * self_k + ratios[i] * fields[i]
            for j in range(p_count):
                if j == i:
                    continue
                key = (min(i, j), max(i, j))
                mat = kernels[key]
                coupled = mat @ parts[j] if i < j else mat.T @ parts[j]
                value += -0.5 * ratios[i] * ratios[j] \
                    * float(parts[i] @ coupled)
                grad_i = grad_i - ratios[i] * ratios[j] * coupled
            grads[i] = grad_i
        return value, np.concatenate(grads)

    def project(vec):
        return np.concatenate([_simplex_project(part)
                               for part in split(vec)])

    start = np.concatenate([np.full(s, 1.0 / s) for s in sizes])
    p, _, history, converged, decrease = _accelerated_minimize(
        objective_and_grad, project, start, max_iterations, tolerance)
    if not converged:
        raise ConvergenceError(
            f"vector equilibrium solver did not converge within "
            f"{max_iterations} iterations (last decrease {decrease:.3e})",
            last_iterate=tuple(
                GridMeasure(blocks[i], part / part.sum())
                for i, part in enumerate(split(p))),
            history=history[-50:])
    return tuple(GridMeasure(blocks[i], part)
                 for i, part in enumerate(split(p)))


def _plain_log_matrix(x: np.ndarray) -> np.ndarray:
    """Pairwise log|x_i - x_j| with the cell-averaged diagonal."""
    with np.errstate(divide="ignore"):
        mat = np.log(np.abs(x[:, None] - x[None, :]))
    gaps = np.diff(x)
    half = 0.5 * np.concatenate(
        ([gaps[0]], 0.5 * (gaps[1:] + gaps[:-1]), [gaps[-1]]))
    idx = np.arange(x.size)
    mat[idx, idx] = np.log(half) - 1.0
    return mat
