"""Large-deviations laboratory for the largest eigenvalue of
biorthogonal-type random matrix ensembles.

The package splits into layers: :mod:`eigtail.ensembles` declares joint
densities and weights, :mod:`eigtail.exact` and :mod:`eigtail.partition`
handle normalizing constants (rational at small sizes, closed-form logs
at any size), :mod:`eigtail.measures` carries the limiting spectral
measures and the equilibrium solver, :mod:`eigtail.rates` evaluates
large-deviation rate functions, :mod:`eigtail.mcmc` samples
configurations and tail probabilities, and :mod:`eigtail.cli` exposes
everything as the ``eigtail`` command.
"""

from .ensembles import (
    AngelescoSpec,
    BDG_CLASSES,
    BdGWeight,
    BosonicWeight,
    CHIRAL_CLASSES,
    ChiralWeight,
    Configuration,
    EnsembleSpec,
    GaussianBetaWeight,
    GridWeight,
    GrowthReport,
    HALF_LINE,
    LaguerreWeight,
    REAL_LINE,
    Support,
    WeightFamily,
    bdg_spec,
    bosonic_spec,
    check_growth_condition,
    chiral_spec,
    estimate_bound_constant,
    grid_spec,
    grid_weight_from_csv,
    laguerre_spec,
    limit_edge,
    log_abs_theta_diff,
    log_joint_density,
    log_joint_density_angelesco,
    log_weight,
    tail_bound_check,
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
from .exact import (
    BiorthogonalSystem,
    biorthogonalize,
    moment,
    partition_brute_force,
    partition_exact,
)
from .mcmc import (
    ChainResult,
    ChainSettings,
    ScalingReport,
    TailEstimate,
    delta_log_density,
    empirical_measure,
    estimate_tail,
    fit_tail_scaling,
    sample_chain,
    tail_scaling_study,
)
from .measures import (
    BdGMeasure,
    BosonicRho,
    ChiralMeasure,
    EmpiricalMeasure,
    EquilibriumReport,
    GridMeasure,
    Semicircle,
    SpectralMeasure,
    cdf,
    density_at,
    equilibrium_report,
    grid_measure_from_csv,
    integrate,
    integrate_log_kernel,
    ks_distance,
    l1_density_distance,
    limit_log_weight,
    limit_measure,
    quantile,
    sample_inverse_cdf,
    solve_equilibrium,
    solve_equilibrium_angelesco,
)
from .partition import (
    log_partition,
    xi_asymptotic,
    xi_empirical,
)
from .rates import (
    AngelescoContext,
    RateContext,
    make_angelesco_context,
    make_context,
    phi_potential,
    rate_angelesco,
    rate_bdg_closed,
    rate_beta_theta,
    rate_bosonic,
    rate_chiral,
    rate_general,
    rate_goe,
    zeta,
    zeta_closed_form,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "AngelescoContext",
    "AngelescoSpec",
    "BDG_CLASSES",
    "BdGMeasure",
    "BdGWeight",
    "BiorthogonalSystem",
    "BosonicRho",
    "BosonicWeight",
    "CHIRAL_CLASSES",
    "ChainResult",
    "ChainSettings",
    "ChiralMeasure",
    "ChiralWeight",
    "Configuration",
    "ConvergenceError",
    "DegeneracyError",
    "DomainError",
    "EigtailError",
    "EmpiricalMeasure",
    "EnsembleSpec",
    "EquilibriumReport",
    "GaussianBetaWeight",
    "GridMeasure",
    "GridWeight",
    "GrowthReport",
    "HALF_LINE",
    "InconclusiveStudyError",
    "InitializationError",
    "LaguerreWeight",
    "REAL_LINE",
    "RateContext",
    "ScalingReport",
    "Semicircle",
    "SpectralMeasure",
    "Support",
    "TailEstimate",
    "UnsupportedWeightError",
    "WeightFamily",
    "bdg_spec",
    "biorthogonalize",
    "bosonic_spec",
    "cdf",
    "check_growth_condition",
    "chiral_spec",
    "delta_log_density",
    "density_at",
    "empirical_measure",
    "equilibrium_report",
    "estimate_bound_constant",
    "estimate_tail",
    "fit_tail_scaling",
    "grid_measure_from_csv",
    "grid_spec",
    "grid_weight_from_csv",
    "integrate",
    "integrate_log_kernel",
    "ks_distance",
    "l1_density_distance",
    "laguerre_spec",
    "limit_edge",
    "limit_log_weight",
    "limit_measure",
    "log_abs_theta_diff",
    "log_joint_density",
    "log_joint_density_angelesco",
    "log_partition",
    "log_weight",
    "make_angelesco_context",
    "make_context",
    "moment",
    "partition_brute_force",
    "partition_exact",
    "phi_potential",
    "quantile",
    "rate_angelesco",
    "rate_bdg_closed",
    "rate_beta_theta",
    "rate_bosonic",
    "rate_chiral",
    "rate_general",
    "rate_goe",
    "sample_chain",
    "sample_inverse_cdf",
    "solve_equilibrium",
    "solve_equilibrium_angelesco",
    "tail_bound_check",
    "tail_scaling_study",
    "wigner_dyson_spec",
    "xi_asymptotic",
    "xi_empirical",
    "zeta",
    "zeta_closed_form",
]
