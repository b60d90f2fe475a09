"""Command-line surface: reproducible experiments over all modules.

Every subcommand resolves its flags to a plain parameter dictionary,
runs, and (for ``sample`` and ``tail``) can persist that dictionary plus
SHA-256 digests of its output files as a JSON manifest.  Re-running with
``--from-manifest`` repeats the experiment from the stored parameters
and verifies that the outputs come back byte for byte.

Exit codes: 0 success, 1 domain or configuration error, 2 numerical or
statistical failure (including failed self-tests and manifest
mismatches), 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .ensembles import (
    AngelescoSpec,
    BDG_CLASSES,
    CHIRAL_CLASSES,
    EnsembleSpec,
    Support,
    bdg_spec,
    bosonic_spec,
    chiral_spec,
    grid_spec,
    grid_weight_from_csv,
    laguerre_spec,
    wigner_dyson_spec,
)
from .errors import (
    AccuracyError,
    ConvergenceError,
    DegeneracyError,
    DomainError,
    EigtailError,
    InconclusiveStudyError,
    InitializationError,
    UnsupportedWeightError,
)
from .exact import EXACT_SIZE_CAP, partition_exact
from .measures import (
    equilibrium_report,
    integrate,
    limit_measure,
    solve_equilibrium,
)
from .mcmc import (
    ChainSettings,
    empirical_measure,
    estimate_tail,
    fit_tail_scaling,
    sample_chain,
    tail_scaling_study,
)
from .partition import log_partition, xi_asymptotic, xi_empirical
from .rates import (
    make_angelesco_context,
    make_context,
    rate_angelesco,
    rate_general,
    rate_goe,
)

__all__ = ["cli_dispatch", "main"]

_USAGE_EXIT = 64
_CONFIG_EXIT = 1
_NUMERIC_EXIT = 2

_CONFIG_ERRORS = (DomainError, UnsupportedWeightError, InitializationError)
_NUMERIC_ERRORS = (AccuracyError, ConvergenceError, DegeneracyError,
                   InconclusiveStudyError)

_ENSEMBLE_NAMES = ("bosonic", "laguerre", "wd", "bdg", "chiral", "grid",
                   "goe")


class _UsageError(Exception):
    """Bad flags or arguments; maps to exit code 64."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: A003 - argparse API
        raise _UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _fmt(value: float) -> str:
    """Shortest round-trip decimal; integral floats drop the '.0'."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    text = repr(value)
    return text[:-2] if text.endswith(".0") else text


def _digest(path: str) -> str:
    with open(path, "rb") as handle:
        return hashlib.sha256(handle.read()).hexdigest()


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


# ---------------------------------------------------------------------------
# Flag parsing helpers


def _parse_pair(text: str, flag: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise DomainError(f"{flag} expects lo:hi, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise DomainError(f"{flag} expects numbers, got {text!r}")
    return lo, hi


def _parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"--grid expects lo:hi:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise DomainError(f"--grid expects lo:hi:count, got {text!r}")
    if count < 2 or not lo < hi:
        raise DomainError(f"--grid needs lo < hi and count >= 2, "
                          f"got {text!r}")
    return np.linspace(lo, hi, count)


def _parse_floats(text: str, flag: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise DomainError(f"{flag} expects comma-separated numbers, "
                          f"got {text!r}")


def _parse_ints(text: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise DomainError(f"{flag} expects comma-separated integers, "
                          f"got {text!r}")


# ---------------------------------------------------------------------------
# Ensemble resolution (flags <-> parameter dictionary <-> spec)

_ENSEMBLE_KEYS = ("ensemble", "alpha", "theta", "ell", "tau", "tau_bar",
                  "beta", "bdg_class", "chiral_class", "kappa", "sigma2",
                  "weight_csv", "form", "support")


def _add_ensemble_flags(parser: argparse.ArgumentParser,
                        with_goe: bool = False) -> None:
    names = _ENSEMBLE_NAMES if with_goe else _ENSEMBLE_NAMES[:-1]
    parser.add_argument("--ensemble", required=True, choices=names,
                        help="ensemble family")
    parser.add_argument("--alpha", type=int, default=0,
                        help="power exponent of the bosonic weight")
    parser.add_argument("--theta", type=int, default=None,
                        help="interaction exponent (laguerre, grid)")
    parser.add_argument("--ell", type=int, default=0,
                        help="power exponent of the laguerre weight")
    parser.add_argument("--tau", type=float, default=None,
                        help="constant decay rate tau(n) = tau")
    parser.add_argument("--tau-bar", type=float, default=None,
                        help="linear decay rate tau(n) = tau_bar * n "
                             "(default tau_bar = 1)")
    parser.add_argument("--beta", type=float, default=None,
                        help="inverse-temperature exponent (wd, chiral, "
                             "grid)")
    parser.add_argument("--bdg-class", choices=sorted(BDG_CLASSES),
                        default=None, help="Bogoliubov-de Gennes class")
    parser.add_argument("--chiral-class", choices=sorted(CHIRAL_CLASSES),
                        default=None, help="chiral class")
    parser.add_argument("--kappa", type=float, default=None,
                        help="eigenvalue-count slope (chiral, grid)")
    parser.add_argument("--sigma2", type=float, default=1.0,
                        help="variance parameter (bdg, chiral)")
    parser.add_argument("--weight-csv", default=None,
                        help="two-column CSV of (x, log w) for --ensemble "
                             "grid")
    parser.add_argument("--form", choices=("two_factor", "beta_theta"),
                        default="two_factor",
                        help="interaction form for --ensemble grid")
    parser.add_argument("--support", default=None,
                        help="lo:hi support override for --ensemble grid")


def _ensemble_params(args: argparse.Namespace) -> dict:
    raw = vars(args)
    return {key: raw[key] for key in _ENSEMBLE_KEYS
            if key in raw and raw[key] is not None}


def _tau_argument(params: dict):
    if params.get("tau") is not None and params.get("tau_bar") is not None:
        raise DomainError("give --tau or --tau-bar, not both")
    if params.get("tau") is not None:
        constant = float(params["tau"])
        return lambda n: constant
    if params.get("tau_bar") is not None:
        slope = float(params["tau_bar"])
        return lambda n: slope * n
    return None


def _spec_from_params(params: dict) -> EnsembleSpec:
    name = params.get("ensemble")
    if name == "bosonic":
        return bosonic_spec(int(params.get("alpha", 0)),
                            _tau_argument(params))
    if name == "laguerre":
        if params.get("theta") is None:
            raise DomainError("--ensemble laguerre needs --theta")
        return laguerre_spec(int(params["theta"]),
                             int(params.get("ell", 0)),
                             _tau_argument(params))
    if name == "wd":
        return wigner_dyson_spec(float(params.get("beta", 2.0)))
    if name == "bdg":
        if params.get("bdg_class") is None:
            raise DomainError("--ensemble bdg needs --bdg-class")
        return bdg_spec(params["bdg_class"],
                        float(params.get("sigma2", 1.0)))
    if name == "chiral":
        if params.get("chiral_class") is None and params.get("beta") is None:
            raise DomainError("--ensemble chiral needs --chiral-class or "
                              "--beta")
        return chiral_spec(params.get("chiral_class"),
                           beta=params.get("beta"),
                           kappa=float(params.get("kappa", 0.5)),
                           sigma2=float(params.get("sigma2", 1.0)))
    if name == "grid":
        if params.get("weight_csv") is None:
            raise DomainError("--ensemble grid needs --weight-csv")
        weight = grid_weight_from_csv(params["weight_csv"])
        support = None
        if params.get("support") is not None:
            lo, hi = _parse_pair(params["support"], "--support")
            support = Support(lo, hi)
        return grid_spec(weight.nodes, weight.log_values,
                         theta=int(params.get("theta", 1)),
                         beta=float(params.get("beta", 1.0)),
                         kappa=float(params.get("kappa", 1.0)),
                         support=support,
                         form=params.get("form", "two_factor"))
    raise DomainError(f"unknown ensemble {name!r}")


# ---------------------------------------------------------------------------
# Subcommand runners.  Each takes the resolved parameter dictionary and
# returns (exit code, {output path: digest}).


def _cmd_partition(params: dict) -> tuple[int, dict]:
    spec = _spec_from_params(params)
    n = int(params["n"])
    want_exact = bool(params.get("exact"))
    want_closed = bool(params.get("closed_form")) or not want_exact
    if want_exact:
        value = partition_exact(spec, n)
        print(f"{value.numerator}/{value.denominator}")
    if want_closed:
        print(_fmt(log_partition(spec, n)))
    return 0, {}


def _cmd_xi(params: dict) -> tuple[int, dict]:
    spec = _spec_from_params(params)
    n_min = int(params.get("n_min", 2))
    n_max = int(params["n_max"])
    n_step = int(params.get("n_step", 1))
    if n_min < 2 or n_max < n_min or n_step < 1:
        raise DomainError(f"need 2 <= n-min <= n-max and n-step >= 1, got "
                          f"{n_min}..{n_max} step {n_step}")
    try:
        asymptotic = xi_asymptotic(spec)
    except UnsupportedWeightError:
        asymptotic = None
    rows = [["n", "empirical", "asymptotic", "abs_error"]]
    for n in range(n_min, n_max + 1, n_step):
        empirical = xi_empirical(spec, n)
        if asymptotic is None:
            rows.append([str(n), repr(empirical), "", ""])
        else:
            rows.append([str(n), repr(empirical), repr(asymptotic),
                         repr(abs(empirical - asymptotic))])
    out = params.get("out")
    if out:
        _write_csv(out, rows[0], rows[1:])
        return 0, {out: _digest(out)}
    for row in rows:
        print(",".join(row))
    return 0, {}


def _cmd_equilibrium(params: dict) -> tuple[int, dict]:
    spec = _spec_from_params(params)
    closed = bool(params.get("closed_form"))
    grid_text = params.get("grid")
    if closed == (grid_text is not None):
        raise DomainError("give exactly one of --closed-form or --grid "
                          "lo:hi:count")
    out = params.get("out")
    outputs: dict = {}
    if closed:
        measure = limit_measure(spec)
        mass = integrate(measure, lambda y: 1.0)
        print(f"support: [{_fmt(measure.support_left)}, "
              f"{_fmt(measure.support_right)}]")
        print(f"mass: {_fmt(mass)}")
        if out:
            points = int(params.get("points", 513))
            xs = np.linspace(measure.support_left, measure.support_right,
                             points)
            _write_csv(out, ["x", "density"],
                       [[repr(float(x)), repr(float(measure.density_at(x)))]
                        for x in xs])
            outputs[out] = _digest(out)
    else:
        grid = _parse_grid(grid_text)
        solution = solve_equilibrium(spec, grid)
        report = equilibrium_report(spec, solution)
        print(f"support_size: {report.support_size}")
        print(f"flat_deviation: {_fmt(report.flat_deviation)}")
        print(f"off_support_margin: {_fmt(report.off_support_margin)}")
        print(f"objective: {_fmt(report.objective)}")
        if out:
            solution.save_csv(out)
            outputs[out] = _digest(out)
    return 0, outputs


def _cmd_rate(params: dict) -> tuple[int, dict]:
    if params.get("ensemble") == "goe":
        def rate(x: float) -> float:
            return rate_goe(x)
    else:
        spec = _spec_from_params(params)
        context = make_context(spec)

        def rate(x: float) -> float:
            return rate_general(context, x)

    if params.get("x") is not None:
        print(_fmt(rate(float(params["x"]))))
        return 0, {}
    if params.get("x_min") is None or params.get("x_max") is None:
        raise DomainError("give --x, or --x-min and --x-max for a curve")
    x_min, x_max = float(params["x_min"]), float(params["x_max"])
    points = int(params.get("points", 101))
    if not x_min < x_max or points < 2:
        raise DomainError("need x-min < x-max and points >= 2")
    xs = np.linspace(x_min, x_max, points)
    rows = [[repr(float(x)), repr(float(rate(float(x))))] for x in xs]
    out = params.get("out")
    if out:
        _write_csv(out, ["x", "rate"], rows)
        return 0, {out: _digest(out)}
    print("x,rate")
    for row in rows:
        print(",".join(row))
    return 0, {}


def _cmd_sample(params: dict) -> tuple[int, dict]:
    spec = _spec_from_params(params)
    settings = ChainSettings(
        steps=int(params["steps"]), burn_in=int(params["burn_in"]),
        thinning=int(params.get("thinning", 1)), seed=int(params["seed"]),
        proposal_scale=float(params.get("proposal_scale", 0.5)),
        adapt=bool(params.get("adapt", True)))
    init_box = None
    if params.get("init_box") is not None:
        init_box = _parse_pair(params["init_box"], "--init-box")
    result = sample_chain(spec, int(params["n"]), settings,
                          init_box=init_box)
    print(f"retained: {len(result.retained)}")
    print(f"acceptance_rate: {_fmt(result.acceptance_rate)}")
    print(f"autocorr_time: {_fmt(result.autocorr_time)}")
    print(f"final_proposal_scale: {_fmt(result.final_proposal_scale)}")
    print(f"final_lambda_max: {_fmt(result.lambda_series[-1])}")
    outputs: dict = {}
    out = params.get("out")
    if out:
        _write_csv(out, ["step", "lambda_max", "acceptance"],
                   [[str(int(step)), repr(float(lam)), repr(float(acc))]
                    for step, lam, acc in zip(result.retained_steps,
                                              result.lambda_series,
                                              result.acceptance_series)])
        outputs[out] = _digest(out)
    return 0, outputs


def _cmd_tail(params: dict) -> tuple[int, dict]:
    spec = _spec_from_params(params)
    settings = ChainSettings(
        steps=int(params["steps"]), burn_in=int(params["burn_in"]),
        thinning=int(params.get("thinning", 1)), seed=int(params["seed"]),
        proposal_scale=float(params.get("proposal_scale", 0.5)),
        adapt=bool(params.get("adapt", True)))
    n_list = [int(n) for n in params["n_list"]]
    report = tail_scaling_study(spec, float(params["x"]), n_list,
                                int(params["trials"]), settings)
    doc = {
        "parameters": {key: params[key] for key in sorted(params)
                       if key not in ("out", "manifest")},
        "estimates": [
            {"n": est.n, "hits": est.hits, "trials": est.trials,
             "neg_log_rate": est.neg_log_rate,
             "wilson_low": est.wilson_interval[0],
             "wilson_high": est.wilson_interval[1],
             "censored": est.censored}
            for est in report.estimates],
        "slope": report.slope,
        "intercept": report.intercept,
        "residuals": [None if math.isnan(r) else r
                      for r in report.residuals],
        "censored": list(report.censored),
        "no_decay": report.no_decay,
        "monotone": report.monotone,
    }
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    outputs: dict = {}
    out = params.get("out")
    if out:
        with open(out, "w") as handle:
            handle.write(text)
        outputs[out] = _digest(out)
    else:
        sys.stdout.write(text)
    return 0, outputs


def _cmd_angelesco(params: dict) -> tuple[int, dict]:
    intervals = [(_parse_pair(text, "--interval"))
                 for text in params["interval"]]
    count = len(intervals)
    polys = params.get("poly") or []
    if polys and len(polys) != count:
        raise DomainError(f"got {len(polys)} --poly for {count} "
                          "--interval flags; give one per component or "
                          "none")
    coeff_lists = [_parse_floats(text, "--poly") for text in polys] \
        or [[0.0]] * count
    ratios = [float(r) for r in params.get("ratio") or []]
    if ratios and len(ratios) != count:
        raise DomainError(f"got {len(ratios)} --ratio for {count} "
                          "--interval flags")
    if not ratios:
        ratios = [1.0 / count] * count

    def _potential(coeffs):
        arr = np.asarray(coeffs, dtype=float)
        return lambda x: np.polynomial.polynomial.polyval(x, arr)

    aspec = AngelescoSpec(
        intervals=tuple(Support(lo, hi) for lo, hi in intervals),
        potentials=tuple(_potential(c) for c in coeff_lists),
        ratios=tuple(ratios))
    points = int(params.get("grid_points", 257))
    grids = [np.linspace(lo, hi, points) for lo, hi in intervals]
    context = make_angelesco_context(aspec, grids=grids)
    print(f"zeta_a: {_fmt(context.zeta_a)}")
    for i, measure in enumerate(context.component_measures):
        print(f"component {i}: support_size "
              f"{int(np.count_nonzero(measure.weights > 1e-7))}, "
              f"edge {_fmt(measure.support_right)}")
    if params.get("x") is not None:
        xs = _parse_floats(params["x"], "--x")
        value = rate_angelesco(context, xs,
                               symmetric=bool(params.get("symmetric")))
        print(f"rate: {_fmt(value)}")
    outputs: dict = {}
    prefix = params.get("out_prefix")
    if prefix:
        for i, measure in enumerate(context.component_measures):
            path = f"{prefix}{i}.csv"
            measure.save_csv(path)
            outputs[path] = _digest(path)
    return 0, outputs


def _cmd_selftest(params: dict) -> tuple[int, dict]:
    from . import selftest

    numbers = selftest.FULL if params.get("full") else selftest.QUICK
    results = selftest.run(numbers)
    for line in selftest.format_lines(results):
        print(line)
    return (0 if all(r.passed for r in results) else _NUMERIC_EXIT), {}


_RUNNERS = {
    "partition": _cmd_partition,
    "xi": _cmd_xi,
    "equilibrium": _cmd_equilibrium,
    "rate": _cmd_rate,
    "sample": _cmd_sample,
    "tail": _cmd_tail,
    "angelesco": _cmd_angelesco,
    "selftest": _cmd_selftest,
}

_MANIFEST_COMMANDS = ("sample", "tail")


# ---------------------------------------------------------------------------
# Manifests


def _write_manifest(path: str, command: str, params: dict,
                    outputs: dict) -> None:
    doc = {
        "tool": "eigtail",
        "version": __version__,
        "command": command,
        "parameters": params,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "outputs": outputs,
    }
    with open(path, "w") as handle:
        json.dump(doc, handle, sort_keys=True, indent=2)
        handle.write("\n")


def _run_from_manifest(path: str) -> int:
    try:
        with open(path) as handle:
            doc = json.load(handle)
    except (OSError, json.JSONDecodeError) as err:
        raise DomainError(f"cannot read manifest {path}: {err}")
    command = doc.get("command")
    if command not in _MANIFEST_COMMANDS:
        raise DomainError(f"manifest command {command!r} is not one of "
                          f"{_MANIFEST_COMMANDS}")
    params = doc.get("parameters")
    if not isinstance(params, dict):
        raise DomainError("manifest has no parameter dictionary")
    recorded = doc.get("outputs") or {}
    _, outputs = _RUNNERS[command](params)
    failures = []
    for out_path, digest in sorted(recorded.items()):
        fresh = outputs.get(out_path)
        if fresh != digest:
            failures.append(out_path)
    if failures:
        for out_path in failures:
            print(f"output {out_path} differs from the manifest digest",
                  file=sys.stderr)
        return _NUMERIC_EXIT
    print(f"reproduced {len(recorded)} output file(s) byte for byte")
    return 0


# ---------------------------------------------------------------------------
# Parser


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="eigtail",
        description="Large-deviation laboratory for the largest "
                    "eigenvalue of repulsive eigenvalue ensembles.",
        epilog="Worker threads for tail studies come from the "
               "EIGTAIL_WORKERS environment variable.")
    parser.add_argument("--from-manifest", metavar="MANIFEST",
                        help="re-run a recorded sample/tail experiment "
                             "and verify its outputs byte for byte")
    parser.add_argument("--version", action="version",
                        version=f"eigtail {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("partition", help="exact or closed-form partition "
                                         "values")
    _add_ensemble_flags(p)
    p.add_argument("--n", type=int, required=True, help="ensemble size")
    p.add_argument("--exact", action="store_true",
                   help=f"print the exact rational value (n <= "
                        f"{EXACT_SIZE_CAP}, factorized two-factor weights)")
    p.add_argument("--closed-form", action="store_true",
                   help="print the closed-form log partition value "
                        "(default when --exact is absent)")

    p = sub.add_parser("xi", help="empirical vs asymptotic xi table")
    _add_ensemble_flags(p)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--n-step", type=int, default=1)
    p.add_argument("--out", help="write the CSV table to a file")

    p = sub.add_parser("equilibrium", help="closed-form density export or "
                                           "numerical equilibrium solve")
    _add_ensemble_flags(p)
    p.add_argument("--closed-form", action="store_true",
                   help="use the closed-form limiting measure")
    p.add_argument("--grid", help="lo:hi:count nodes for a numerical solve")
    p.add_argument("--points", type=int, default=513,
                   help="sampling points for --closed-form export")
    p.add_argument("--out", help="write the density or measure CSV here")

    p = sub.add_parser("rate", help="rate-function evaluation or curve "
                                    "export")
    _add_ensemble_flags(p, with_goe=True)
    p.add_argument("--x", type=float, help="evaluate at a single point")
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--out", help="write the x,rate CSV here")

    p = sub.add_parser("sample", help="run one chain with diagnostics")
    _add_ensemble_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--burn-in", type=int, required=True)
    p.add_argument("--thinning", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--proposal-scale", type=float, default=0.5)
    p.add_argument("--no-adapt", dest="adapt", action="store_false")
    p.add_argument("--init-box", help="lo:hi box for the starting "
                                      "configuration")
    p.add_argument("--out", help="write step,lambda_max,acceptance CSV")
    p.add_argument("--manifest", help="write a reproducibility manifest")

    p = sub.add_parser("tail", help="tail scaling study across sizes")
    _add_ensemble_flags(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--n-list", required=True,
                   help="comma-separated increasing sizes (>= 3)")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--burn-in", type=int, required=True)
    p.add_argument("--thinning", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--proposal-scale", type=float, default=0.5)
    p.add_argument("--no-adapt", dest="adapt", action="store_false")
    p.add_argument("--out", help="write the study JSON here")
    p.add_argument("--manifest", help="write a reproducibility manifest")

    p = sub.add_parser("angelesco", help="multi-component equilibrium "
                                         "solve and rate evaluation")
    p.add_argument("--interval", action="append", required=True,
                   metavar="LO:HI", help="one flag per component")
    p.add_argument("--poly", action="append", metavar="C0,C1,...",
                   help="potential coefficients (ascending), one per "
                        "component")
    p.add_argument("--ratio", action="append", metavar="R",
                   help="component fill ratio, one per component")
    p.add_argument("--grid-points", type=int, default=257)
    p.add_argument("--x", help="comma-separated evaluation point, one "
                               "value per component")
    p.add_argument("--symmetric", action="store_true",
                   help="use the symmetrized cross term")
    p.add_argument("--out-prefix", help="write component measures to "
                                        "PREFIX<i>.csv")

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--full", action="store_true",
                   help="include the long-running criteria")
    return parser


def cli_dispatch(argv=None) -> int:
    """Parse ``argv`` and run one subcommand; returns the exit code."""
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(str(err), file=sys.stderr)
        return _USAGE_EXIT
    except SystemExit as exc:  # --help / --version
        code = exc.code
        return int(code) if isinstance(code, int) else 0

    try:
        if args.from_manifest is not None:
            if args.command is not None:
                raise DomainError("--from-manifest replaces the "
                                  "subcommand; give one or the other")
            return _run_from_manifest(args.from_manifest)
        if args.command is None:
            print(parser.format_usage(), file=sys.stderr)
            return _USAGE_EXIT
        raw = {key: value for key, value in vars(args).items()
               if key not in ("command", "from_manifest")
               and value is not None}
        if args.command == "tail":
            raw["n_list"] = _parse_ints(raw["n_list"], "--n-list")
        manifest = raw.pop("manifest", None)
        code, outputs = _RUNNERS[args.command](raw)
        if manifest is not None:
            if args.command not in _MANIFEST_COMMANDS:
                raise DomainError("--manifest applies to sample and tail")
            _write_manifest(manifest, args.command, raw, outputs)
        return code
    except _CONFIG_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return _CONFIG_EXIT
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return _CONFIG_EXIT
    except _NUMERIC_ERRORS as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return _NUMERIC_EXIT


def main() -> None:
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
