"""negacopula: a one-parameter copula for strong negative dependence.

Closed-form evaluation, seeded simulation, dependence certification,
Sklar composition with standard marginals, and a rank-inversion fitting
pipeline with bootstrap goodness of fit.
"""

__version__ = "0.1.0"

from .audit import AuditReport, ordering_suite, standard_suite
from .bivariate import BivariateModel, baseline_model
from .copula import (
    cdf,
    classify_region,
    cond_cdf_u_given_v,
    cond_cdf_v_given_u,
    cond_mean_v_given_u,
    cond_mean_var_u_given_v,
    cond_quantile_u_given_v,
    cond_quantile_v_given_u,
    kendall_tau,
    pdf,
    spearman_rho,
    survival_copula,
    theta_from_rho,
    theta_from_tau,
)
from .estimation import (
    FitConfig,
    FitReport,
    PairedData,
    PositiveDependence,
    empirical_rho,
    empirical_tau,
    estimate_theta,
    fit_pipeline,
    ks_test_bootstrap,
    pseudo_observations,
)
from .estimator import BivariateCopulaModel, NegativeDependenceCopula
from .marginals import (
    BaselineY,
    Exponential,
    FitResult,
    Gamma,
    Lognormal,
    Weibull,
    mle_fit,
    select_by_aic,
)
from .sampling import RNG_ALGORITHM, SampleBatch, sample_bivariate, sample_copula

__all__ = [
    "AuditReport",
    "BaselineY",
    "BivariateCopulaModel",
    "BivariateModel",
    "Exponential",
    "FitConfig",
    "FitReport",
    "FitResult",
    "Gamma",
    "Lognormal",
    "NegativeDependenceCopula",
    "PairedData",
    "PositiveDependence",
    "RNG_ALGORITHM",
    "SampleBatch",
    "Weibull",
    "baseline_model",
    "cdf",
    "classify_region",
    "cond_cdf_u_given_v",
    "cond_cdf_v_given_u",
    "cond_mean_v_given_u",
    "cond_mean_var_u_given_v",
    "cond_quantile_u_given_v",
    "cond_quantile_v_given_u",
    "empirical_rho",
    "empirical_tau",
    "estimate_theta",
    "fit_pipeline",
    "kendall_tau",
    "ks_test_bootstrap",
    "mle_fit",
    "ordering_suite",
    "pdf",
    "pseudo_observations",
    "sample_bivariate",
    "sample_copula",
    "select_by_aic",
    "spearman_rho",
    "standard_suite",
    "survival_copula",
    "theta_from_rho",
    "theta_from_tau",
]
