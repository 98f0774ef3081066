"""Numerical toolkit for the exponentiated exponential Poisson law EEP(alpha, beta, lambda)
and its parent EE(alpha, beta)."""

from .base import ConvergenceError, DomainError, EvalResult
from .distributions import (
    EeParams,
    EepParams,
    SampleBatch,
    ee_cdf,
    ee_pdf,
    eep_cdf,
    eep_hazard,
    eep_logpdf,
    eep_pdf,
    eep_quantile,
    eep_sample,
    eep_survival,
    mixture_cdf_partial,
)
from .fitting import FitResult, fit_eep
from .moments import (
    LAMBDA_SWITCH,
    ee_moment,
    ee_moment_gupta_kundu,
    ee_moment_quadrature,
    eep_chf,
    eep_chf_quadrature,
    eep_mean_variance,
    eep_mgf,
    eep_mgf_quadrature,
    eep_moment,
    eep_moment_double_series,
    eep_moment_quadrature,
)
from .simulator import (
    KsReport,
    SystemSpec,
    ks_critical_value_1pct,
    run_ks_validation,
    sample_block_lifetimes,
    sample_system_lifetime,
    sample_ztp,
    ztp_pmf,
)
from .special_functions import (
    FoxWrightSpec,
    HlzStarArgs,
    fox_wright_1psi1,
    goyal_laddha_integral,
    goyal_laddha_phi_star,
    hlz_phi,
    log_gamma_complex,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "EvalResult",
    "FitResult",
    "fit_eep",
    "EeParams",
    "EepParams",
    "SampleBatch",
    "ee_cdf",
    "ee_pdf",
    "eep_cdf",
    "eep_hazard",
    "eep_logpdf",
    "eep_pdf",
    "eep_quantile",
    "eep_sample",
    "eep_survival",
    "mixture_cdf_partial",
    "LAMBDA_SWITCH",
    "ee_moment",
    "ee_moment_gupta_kundu",
    "ee_moment_quadrature",
    "eep_chf",
    "eep_chf_quadrature",
    "eep_mean_variance",
    "eep_mgf",
    "eep_mgf_quadrature",
    "eep_moment",
    "eep_moment_double_series",
    "eep_moment_quadrature",
    "KsReport",
    "SystemSpec",
    "ks_critical_value_1pct",
    "run_ks_validation",
    "sample_block_lifetimes",
    "sample_system_lifetime",
    "sample_ztp",
    "ztp_pmf",
    "FoxWrightSpec",
    "HlzStarArgs",
    "fox_wright_1psi1",
    "goyal_laddha_integral",
    "goyal_laddha_phi_star",
    "hlz_phi",
    "log_gamma_complex",
]
