"""Markov chain Monte Carlo over the eigenvalue densities.

A chain state is one eigenvalue configuration; one step proposes a
Gaussian move of a single coordinate (round robin over coordinates),
reflects it back into the support, and accepts by the Metropolis rule on
the log joint density.  The density difference is computed incrementally
from the terms that involve the moved coordinate only, so a step costs
``O(p(n))``.

Streams are counter based (Philox keyed by seed and chain block), so
every result is a pure function of its seed: re-running a chain or a
tail study with the same settings reproduces it bit for bit, no matter
how many worker threads execute the blocks.
"""

from __future__ import annotations

import math
import numbers
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ensembles import (
    Configuration,
    EnsembleSpec,
    GridWeight,
    Support,
    limit_edge,
    log_abs_theta_diff,
    log_joint_density,
)
from .errors import (
    DomainError,
    InconclusiveStudyError,
    InitializationError,
    UnsupportedWeightError,
)
from .measures import EmpiricalMeasure, limit_measure

__all__ = [
    "ChainSettings",
    "ChainResult",
    "TailEstimate",
    "ScalingReport",
    "sample_chain",
    "delta_log_density",
    "empirical_measure",
    "estimate_tail",
    "fit_tail_scaling",
    "tail_scaling_study",
]

# Lanes per vectorized chain block; fixed so that the partition of trials
# into blocks (and hence every RNG stream) is independent of thread count.
_BLOCK_LANES = 1024
# Steps of random numbers drawn per batch inside a chain loop.
_DRAW_CHUNK = 2048
# Steps of random numbers drawn per batch inside a block of lanes; smaller
# than the single-chain batch to bound the (chunk, lanes) draw buffers.
_BLOCK_CHUNK = 512
_TARGET_ACCEPTANCE = 0.3
_WILSON_Z = 1.96
_WORKER_ENV = "EIGTAIL_WORKERS"


def _worker_count() -> int:
    raw = os.environ.get(_WORKER_ENV, "")
    if raw.strip():
        try:
            count = int(raw)
        except ValueError:
            raise DomainError(f"{_WORKER_ENV}={raw!r} is not an integer")
        if count < 1:
            raise DomainError(f"{_WORKER_ENV} must be >= 1, got {count}")
        return count
    return min(8, os.cpu_count() or 1)


def _check_integer(value, name: str) -> int:
    if not isinstance(value, numbers.Integral):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class ChainSettings:
    """Run-length and proposal parameters of one Metropolis chain.

    ``steps`` counts single-coordinate proposals.  The first ``burn_in``
    steps are discarded; afterwards every ``thinning``-th state is
    retained.  ``proposal_scale`` is the initial Gaussian standard
    deviation; with ``adapt`` it is tuned during burn-in toward an
    acceptance rate of 0.3 and frozen afterwards.
    """

    steps: int
    burn_in: int
    thinning: int = 1
    seed: int = 0
    proposal_scale: float = 0.5
    adapt: bool = True

    def __post_init__(self) -> None:
        steps = _check_integer(self.steps, "steps")
        burn_in = _check_integer(self.burn_in, "burn_in")
        thinning = _check_integer(self.thinning, "thinning")
        seed = _check_integer(self.seed, "seed")
        if steps < 1:
            raise DomainError(f"steps must be >= 1, got {steps}")
        if not 0 <= burn_in < steps:
            raise DomainError(f"burn_in must lie in [0, steps), got "
                              f"{burn_in} with steps={steps}")
        if thinning < 1:
            raise DomainError(f"thinning must be >= 1, got {thinning}")
        if not 0 <= seed < 2 ** 64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, "
                              f"got {seed}")
        if not (math.isfinite(self.proposal_scale)
                and self.proposal_scale >= 0):
            raise DomainError(f"proposal_scale must be a finite "
                              f"nonnegative real, got {self.proposal_scale}")
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "burn_in", burn_in)
        object.__setattr__(self, "thinning", thinning)
        object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "proposal_scale", float(self.proposal_scale))

    @property
    def retained_count(self) -> int:
        """Number of states kept: ``(steps - burn_in) // thinning``."""
        return (self.steps - self.burn_in) // self.thinning


def _frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ChainResult:
    """Retained states and diagnostics of one chain run.

    ``retained`` has one row per kept configuration; ``lambda_series``
    holds each row's largest value and ``acceptance_series`` the running
    overall acceptance rate at the retention step.  ``autocorr_time`` is
    the integrated autocorrelation time of ``lambda_series``.
    """

    settings: ChainSettings
    retained: np.ndarray
    retained_steps: np.ndarray
    lambda_series: np.ndarray
    acceptance_rates: np.ndarray
    acceptance_series: np.ndarray
    autocorr_time: float
    final_proposal_scale: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "retained", _frozen_array(self.retained))
        object.__setattr__(self, "retained_steps",
                           _frozen_array(self.retained_steps, dtype=np.int64))
        object.__setattr__(self, "lambda_series",
                           _frozen_array(self.lambda_series))
        object.__setattr__(self, "acceptance_rates",
                           _frozen_array(self.acceptance_rates))
        object.__setattr__(self, "acceptance_series",
                           _frozen_array(self.acceptance_series))
        if len(self.retained) != self.settings.retained_count:
            raise DomainError(
                f"retained count {len(self.retained)} does not match "
                f"settings ({self.settings.retained_count})")
        rates = self.acceptance_rates
        if rates.size and not (np.all(rates >= 0.0) and np.all(rates <= 1.0)):
            raise DomainError("acceptance rates must lie in [0, 1]")

    @property
    def acceptance_rate(self) -> float:
        """Overall acceptance rate across all coordinates."""
        return float(np.mean(self.acceptance_rates))

    @property
    def final_state(self) -> np.ndarray:
        if len(self.retained) == 0:
            raise DomainError("the chain retained no states")
        return self.retained[-1]


@dataclass(frozen=True)
class TailEstimate:
    """Bernoulli estimate of ``P(largest eigenvalue >= x)`` at size ``n``.

    ``neg_log_rate`` is ``-(1/n) log(hits/trials)``; when no trial hit
    (``censored``) it instead holds the lower bound ``log(trials)/n``.
    ``wilson_interval`` is the 95% Wilson score interval for the hit
    probability.
    """

    x: float
    n: int
    hits: int
    trials: int
    neg_log_rate: float
    wilson_interval: tuple[float, float]
    censored: bool

    def __post_init__(self) -> None:
        if not (0 <= self.hits <= self.trials):
            raise DomainError(f"hits must lie in [0, trials], got "
                              f"{self.hits}/{self.trials}")
        if self.censored != (self.hits == 0):
            raise DomainError("censored must hold exactly when hits == 0")

    @property
    def neg_log_probability(self) -> float:
        """``-log(hits/trials)``, or the bound ``log(trials)`` if censored."""
        return self.neg_log_rate * self.n


@dataclass(frozen=True)
class ScalingReport:
    """Least-squares fit of ``-log P(largest >= x)`` against the size.

    ``residuals`` aligns with ``n_list``; censored points are excluded
    from the fit and carry ``nan`` residuals.  ``no_decay`` flags a fit
    whose total decay over the size range is negligible; ``monotone``
    records whether ``-log P`` increases along ``n_list`` (censored
    points enter through their lower bound).
    """

    x: float
    n_list: tuple[int, ...]
    estimates: tuple[TailEstimate, ...]
    slope: float
    intercept: float
    residuals: tuple[float, ...]
    censored: tuple[bool, ...]
    no_decay: bool
    monotone: bool


# ---------------------------------------------------------------------------
# Proposal plumbing


def _reflect(values, support: Support):
    """Fold proposals back into the support (mirror reflection).

    Reflection is an involution around each finite boundary, so the
    proposal kernel stays symmetric and needs no Hastings correction.
    """
    lo, hi = support.lo, support.hi
    if math.isinf(lo) and math.isinf(hi):
        return values
    if math.isinf(hi):
        return lo + np.abs(np.asarray(values) - lo)
    if math.isinf(lo):
        return hi - np.abs(hi - np.asarray(values))
    span = hi - lo
    folded = np.mod(np.asarray(values) - lo, 2.0 * span)
    folded = np.where(folded > span, 2.0 * span - folded, folded)
    return lo + folded


def delta_log_density(spec: EnsembleSpec, n: int, values: np.ndarray,
                      index: int, new_value: float) -> float:
    """Log-density change when coordinate ``index`` moves to ``new_value``.

    Only the interaction terms touching the moved coordinate and its own
    weight factor change, so this runs in ``O(p(n))``; it equals the
    difference of full :func:`log_joint_density` evaluations whenever the
    current state has finite density.
    """
    values = np.asarray(values, dtype=float)
    p = values.size
    if not 0 <= index < p:
        raise DomainError(f"coordinate index {index} out of range for "
                          f"{p} values")
    new_value = float(new_value)
    if not spec.support.contains(new_value):
        raise DomainError(f"proposal {new_value} outside the support "
                          f"[{spec.support.lo}, {spec.support.hi}]")
    old_value = float(values[index])
    others = np.delete(values, index)
    new_terms = _pair_terms(spec, new_value, others)
    new_terms += float(spec.weight.log_weight_total(n, new_value))
    if math.isinf(new_terms) and new_terms < 0:
        return -math.inf
    old_terms = _pair_terms(spec, old_value, others)
    old_terms += float(spec.weight.log_weight_total(n, old_value))
    if math.isinf(old_terms) and old_terms < 0:
        return math.inf
    return new_terms - old_terms


def _pair_terms(spec: EnsembleSpec, value: float, others: np.ndarray) -> float:
    """Sum of interaction terms pairing ``value`` with ``others``."""
    if others.size == 0:
        return 0.0
    theta_part = log_abs_theta_diff(value, others, spec.theta)
    if spec.form == "two_factor":
        with np.errstate(divide="ignore"):
            linear = np.log(np.abs(value - others))
        return float(np.sum(linear + theta_part))
    return float(spec.beta * np.sum(theta_part))


def _initial_values(spec: EnsembleSpec, n: int, p: int,
                    initial, init_box) -> np.ndarray:
    """Starting configuration: explicit, measure quantiles, or a box."""
    if initial is not None:
        arr = np.asarray(initial, dtype=float)
        if arr.shape != (p,):
            raise InitializationError(
                f"initial configuration must have p(n) = {p} values, "
                f"got shape {arr.shape}")
        if not np.all(spec.support.contains_array(arr)):
            raise InitializationError("initial configuration leaves the "
                                      "support")
        return arr.copy()
    ranks = (np.arange(p) + 0.5) / p
    if init_box is None:
        try:
            measure = limit_measure(spec)
        except UnsupportedWeightError:
            measure = None
        if measure is not None:
            return np.asarray(measure.quantile(ranks), dtype=float)
        if isinstance(spec.weight, GridWeight):
            init_box = (spec.weight.nodes[0], spec.weight.nodes[-1])
        else:
            raise InitializationError(
                "no closed-form limiting measure for this weight; pass "
                "initial= or init_box= to place the starting configuration")
    lo, hi = float(init_box[0]), float(init_box[1])
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise InitializationError(f"init_box must be a finite interval, "
                                  f"got ({lo}, {hi})")
    if not (spec.support.contains(lo) and spec.support.contains(hi)):
        raise InitializationError("init_box leaves the support")
    return lo + ranks * (hi - lo)


def _stream_key(seed: int, n: int, block: int) -> np.ndarray:
    """Philox key for one chain block: words ``(seed, n * 2^32 + block)``."""
    return np.array([seed, (n << 32) | block], dtype=np.uint64)


def _check_size(n) -> int:
    n = _check_integer(n, "n")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if n >= 2 ** 32:
        raise DomainError(f"n must be below 2^32, got {n}")
    return n


# ---------------------------------------------------------------------------
# Single-chain sampler


def sample_chain(spec: EnsembleSpec, n: int, settings: ChainSettings, *,
                 initial: Sequence[float] | None = None,
                 init_box: tuple[float, float] | None = None) -> ChainResult:
    """Run one Metropolis chain targeting the joint eigenvalue density.

    The starting configuration is, in order of preference: ``initial``,
    the limiting-measure quantiles, or ``p(n)`` equispaced points in
    ``init_box``.  A start with ``-inf`` log density raises
    :class:`InitializationError`.  The result is a pure function of the
    arguments; in particular the seed fixes it bit for bit.
    """
    n = _check_size(n)
    p = spec.p(n)
    values = _initial_values(spec, n, p, initial, init_box)
    start_density = log_joint_density(spec, Configuration(n, tuple(values)))
    if math.isinf(start_density) and start_density < 0:
        raise InitializationError(
            "the starting configuration has zero density (coincident "
            "points or a vanishing weight)")

    steps, burn_in = settings.steps, settings.burn_in
    thinning = settings.thinning
    retained_count = settings.retained_count
    retained = np.empty((retained_count, p))
    retained_steps = np.empty(retained_count, dtype=np.int64)
    lambda_series = np.empty(retained_count)
    acceptance_series = np.empty(retained_count)
    attempts = np.zeros(p, dtype=np.int64)
    accepts = np.zeros(p, dtype=np.int64)

    generator = np.random.Generator(
        np.random.Philox(key=_stream_key(settings.seed, n, 0)))
    scale = settings.proposal_scale
    adapt = settings.adapt
    total_accepted = 0
    kept = 0

    step = 0
    while step < steps:
        chunk = min(_DRAW_CHUNK, steps - step)
        normals = generator.standard_normal(chunk)
        uniforms = generator.random(chunk)
        for i in range(chunk):
            step += 1
            k = (step - 1) % p
            proposal = float(_reflect(values[k] + scale * normals[i],
                                      spec.support))
            delta = delta_log_density(spec, n, values, k, proposal)
            u = uniforms[i]
            accepted = (math.log(u) if u > 0.0 else -math.inf) < delta
            attempts[k] += 1
            if accepted:
                values[k] = proposal
                accepts[k] += 1
                total_accepted += 1
            if adapt and step <= burn_in and scale > 0.0:
                gain = step ** -0.6
                scale *= math.exp(gain * ((1.0 if accepted else 0.0)
                                          - _TARGET_ACCEPTANCE))
            if step > burn_in and (step - burn_in) % thinning == 0 \
                    and kept < retained_count:
                retained[kept] = values
                retained_steps[kept] = step
                lambda_series[kept] = values.max()
                acceptance_series[kept] = total_accepted / step
                kept += 1

    with np.errstate(invalid="ignore"):
        rates = np.where(attempts > 0, accepts / np.maximum(attempts, 1), 0.0)
    return ChainResult(
        settings=settings,
        retained=retained,
        retained_steps=retained_steps,
        lambda_series=lambda_series,
        acceptance_rates=rates,
        acceptance_series=acceptance_series,
        autocorr_time=_autocorr_time(lambda_series),
        final_proposal_scale=float(scale),
    )


def _autocorr_time(series: np.ndarray) -> float:
    """Integrated autocorrelation time with the 5x self-consistent window."""
    x = np.asarray(series, dtype=float)
    length = x.size
    if length < 8:
        return 1.0
    x = x - x.mean()
    variance = float(np.dot(x, x))
    if variance == 0.0:
        return 1.0
    size = 1 << (2 * length - 1).bit_length()
    transform = np.fft.rfft(x, size)
    autocov = np.fft.irfft(transform * np.conj(transform), size)[:length].real
    rho = autocov / autocov[0]
    taus = 1.0 + 2.0 * np.cumsum(rho[1:])
    windows = np.arange(1, taus.size + 1)
    passing = windows >= 5.0 * taus
    cut = int(np.argmax(passing)) if passing.any() else taus.size - 1
    return float(max(taus[cut], 1.0))


def empirical_measure(result: ChainResult, at: int,
                      bins: int = 64) -> EmpiricalMeasure:
    """Histogram measure of the retained configuration at index ``at``."""
    at = _check_integer(at, "at")
    count = len(result.retained)
    if count == 0:
        raise DomainError("the chain retained no states")
    if not -count <= at < count:
        raise DomainError(f"retained index {at} out of range for "
                          f"{count} states")
    return EmpiricalMeasure(result.retained[at], bins=bins)


# ---------------------------------------------------------------------------
# Tail estimation


def _pair_log_terms(a: np.ndarray, b: np.ndarray, theta: int, form: str,
                    beta: float) -> np.ndarray:
    """Interaction log terms between broadcastable position arrays.

    Returns ``log|a - b| + log|a^theta - b^theta|`` under the two-factor
    form and ``beta * log|a^theta - b^theta|`` under the beta-theta form,
    arranged so that a single vectorized logarithm is evaluated.
    """
    if theta == 1:
        core = a - b
        if form == "two_factor":
            core = core * core
    elif theta == 2:
        diff = a - b
        core = diff * (a + b)
        if form == "two_factor":
            core = core * diff
    else:
        core = a ** theta - b ** theta
        if form == "two_factor":
            core = core * (a - b)
    with np.errstate(divide="ignore"):
        terms = np.log(np.abs(core))
    if form != "two_factor" and beta != 1.0:
        terms *= beta
    return terms


def _row_terms(values: np.ndarray, positions: np.ndarray, theta: int,
               two_factor: bool, out: np.ndarray | None) -> np.ndarray:
    """Raw interaction log terms of one coordinate column against all
    coordinates, without the beta exponent, written into ``out``."""
    if out is None:
        out = np.empty_like(positions)
    col = values[:, None]
    if theta == 1:
        np.subtract(col, positions, out=out)
        if two_factor:
            np.multiply(out, out, out=out)
    elif theta == 2:
        np.subtract(col, positions, out=out)
        if two_factor:
            mixed = col + positions
            np.multiply(out, mixed, out=mixed)
            np.multiply(mixed, out, out=out)
        else:
            np.multiply(out, col + positions, out=out)
    else:
        np.subtract(col ** theta, positions ** theta, out=out)
        if two_factor:
            out *= col - positions
    np.abs(out, out=out)
    np.log(out, out=out)
    return out


def _run_tail_block(spec: EnsembleSpec, n: int, threshold: float,
                    settings: ChainSettings, start: np.ndarray,
                    lanes: int, block: int) -> int:
    """Run ``lanes`` independent chains in lockstep; count final-state hits.

    All lanes propose on the same coordinate each step (round robin) from
    one vectorized draw, each lane with its own adapted scale.  Per-lane
    interaction row sums and per-coordinate log weights are kept current
    incrementally, so each step evaluates interaction logarithms for the
    proposal row always and for the replaced row only on acceptance.  The
    Bernoulli outcome per lane is whether the largest value of its final
    retained state reaches ``threshold``.
    """
    p = start.size
    positions = np.tile(start, (lanes, 1))
    scales = np.full(lanes, settings.proposal_scale)
    steps, burn_in = settings.steps, settings.burn_in
    last_kept_step = burn_in + settings.retained_count * settings.thinning
    generator = np.random.Generator(
        np.random.Philox(key=_stream_key(settings.seed, n, block)))
    weight = spec.weight
    beta, theta = spec.beta, spec.theta
    two_factor = spec.form == "two_factor"
    support = spec.support

    base = _pair_log_terms(start[:, None], start[None, :], theta,
                           spec.form, 1.0)
    np.fill_diagonal(base, 0.0)
    row_sums = np.tile(base.sum(axis=1), (lanes, 1))
    kept_weight = np.array(weight.log_weight_total(n, positions),
                           dtype=float)
    finals = positions.copy()
    ones = np.ones(p)
    terms = np.empty((lanes, p))

    step = 0
    with np.errstate(divide="ignore"):
        while step < steps:
            chunk = min(_BLOCK_CHUNK, steps - step)
            normals = generator.standard_normal((chunk, lanes))
            uniforms = generator.random((chunk, lanes))
            for i in range(chunk):
                step += 1
                k = (step - 1) % p
                proposals = np.asarray(_reflect(
                    positions[:, k] + scales * normals[i], support))
                new_terms = _row_terms(proposals, positions, theta,
                                       two_factor, terms)
                new_terms[:, k] = 0.0
                new_sums = new_terms @ ones
                new_weight = np.asarray(
                    weight.log_weight_total(n, proposals))
                delta = beta * (new_sums - row_sums[:, k]) \
                    + new_weight - kept_weight[:, k]
                accepted = np.log(uniforms[i]) < delta
                rows = np.flatnonzero(accepted)
                if rows.size:
                    moved = positions[rows]
                    old_terms = _row_terms(moved[:, k], moved, theta,
                                           two_factor, None)
                    old_terms[:, k] = 0.0
                    row_sums[rows] += new_terms[rows] - old_terms
                    row_sums[rows, k] = new_sums[rows]
                    positions[rows, k] = proposals[rows]
                    kept_weight[rows, k] = new_weight[rows]
                if settings.adapt and step <= burn_in:
                    scales *= np.exp(step ** -0.6 *
                                     (accepted - _TARGET_ACCEPTANCE))
                if step == last_kept_step:
                    finals = positions.copy()
    return int(np.count_nonzero(finals.max(axis=1) >= threshold))


def _wilson_interval(hits: int, trials: int) -> tuple[float, float]:
    z = _WILSON_Z
    phat = hits / trials
    denom = 1.0 + z * z / trials
    center = phat + z * z / (2.0 * trials)
    half = z * math.sqrt(phat * (1.0 - phat) / trials
                         + z * z / (4.0 * trials * trials))
    return ((center - half) / denom, (center + half) / denom)


def estimate_tail(spec: EnsembleSpec, n: int, x: float, trials: int,
                  settings: ChainSettings) -> TailEstimate:
    """Estimate ``P(largest eigenvalue >= x)`` from independent chains.

    Each of the ``trials`` chains contributes one Bernoulli outcome, the
    indicator that its final retained state's largest value reaches
    ``x``; one outcome per chain keeps the trials independent.  ``x``
    must exceed the limiting support edge (deviation regime).  Chains run
    in fixed blocks of {lanes} lanes distributed over worker threads
    (``{env}``); the result depends only on the arguments, not on the
    thread count.
    """
    n = _check_size(n)
    trials = _check_integer(trials, "trials")
    if trials < 100:
        raise DomainError(f"trials must be >= 100, got {trials}")
    edge = limit_edge(spec)
    if edge is None:
        raise UnsupportedWeightError(
            "the limiting support edge of this ensemble is unknown, so "
            "the deviation regime x > b_w cannot be checked")
    if not x > edge:
        raise DomainError(f"x={x} is not beyond the limiting edge "
                          f"b_w={edge}; tail estimation needs x > b_w")
    if settings.retained_count < 1:
        raise DomainError("settings retain no states "
                          "(steps - burn_in < thinning)")
    p = spec.p(n)
    start = _initial_values(spec, n, p, None, None)
    blocks = [(block, min(_BLOCK_LANES, trials - block * _BLOCK_LANES))
              for block in range((trials + _BLOCK_LANES - 1) // _BLOCK_LANES)]
    workers = _worker_count()
    if workers == 1 or len(blocks) == 1:
        counts = [_run_tail_block(spec, n, x, settings, start, lanes, block)
                  for block, lanes in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_tail_block, spec, n, x, settings,
                                   start, lanes, block)
                       for block, lanes in blocks]
            counts = [future.result() for future in futures]
    hits = int(sum(counts))
    censored = hits == 0
    if censored:
        neg_log_rate = math.log(trials) / n
    else:
        neg_log_rate = -math.log(hits / trials) / n
    return TailEstimate(x=float(x), n=n, hits=hits, trials=trials,
                        neg_log_rate=neg_log_rate,
                        wilson_interval=_wilson_interval(hits, trials),
                        censored=censored)


estimate_tail.__doc__ = estimate_tail.__doc__.format(lanes=_BLOCK_LANES,
                                                     env=_WORKER_ENV)


def fit_tail_scaling(estimates: Sequence[TailEstimate]) -> ScalingReport:
    """Fit ``-log P(largest >= x) ~ slope * n + intercept`` by least squares.

    Censored estimates are excluded from the fit (their value is only a
    bound) but enter the monotonicity check through that bound.  Raises
    :class:`InconclusiveStudyError` when at least half the points are
    censored; the exception carries the estimates on ``.estimates``.
    """
    estimates = tuple(estimates)
    if len(estimates) < 3:
        raise DomainError(f"need at least 3 estimates, got "
                          f"{len(estimates)}")
    xs = {estimate.x for estimate in estimates}
    if len(xs) != 1:
        raise DomainError(f"estimates mix thresholds {sorted(xs)}")
    sizes = [estimate.n for estimate in estimates]
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise DomainError(f"sizes must be strictly increasing, got {sizes}")
    censored = tuple(estimate.censored for estimate in estimates)
    if 2 * sum(censored) >= len(estimates):
        error = InconclusiveStudyError(
            f"{sum(censored)} of {len(estimates)} tail estimates saw no "
            "hit at all; the scaling fit would rest on bounds, not data "
            "(raise the trial count or lower x)")
        error.estimates = estimates
        raise error
    neg_log_p = np.array([estimate.neg_log_probability
                          for estimate in estimates])
    kept = ~np.array(censored)
    slope, intercept = np.polyfit(np.array(sizes, dtype=float)[kept],
                                  neg_log_p[kept], 1)
    fitted = slope * np.array(sizes, dtype=float) + intercept
    residuals = tuple(float(neg_log_p[i] - fitted[i]) if kept[i] else math.nan
                      for i in range(len(estimates)))
    no_decay = bool(slope * (sizes[-1] - sizes[0]) < 0.1)
    monotone = bool(np.all(np.diff(neg_log_p) > 0.0))
    return ScalingReport(x=estimates[0].x, n_list=tuple(sizes),
                         estimates=estimates, slope=float(slope),
                         intercept=float(intercept), residuals=residuals,
                         censored=censored, no_decay=no_decay,
                         monotone=monotone)


def tail_scaling_study(spec: EnsembleSpec, x: float, n_list: Sequence[int],
                       trials: int,
                       settings: ChainSettings) -> ScalingReport:
    """Estimate the tail at several sizes and fit the speed-n scaling."""
    sizes = [_check_size(n) for n in n_list]
    if len(sizes) < 3:
        raise DomainError(f"n_list needs at least 3 sizes, got {len(sizes)}")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise DomainError(f"n_list must be strictly increasing, got {sizes}")
    estimates = [estimate_tail(spec, n, x, trials, settings) for n in sizes]
    return fit_tail_scaling(estimates)
