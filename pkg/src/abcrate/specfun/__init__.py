"""Closed-form mathematics: special functions and the rate expressions."""

from .rates import (
    AnalyticRates,
    analytic_rates,
    beta_param,
    gamma_param,
    r1_lemma_bound,
    r1_quadrature_oracle,
    r1_theorem_bound,
    r2_exact,
    r2_quadrature_oracle,
    r2_theorem_bound,
    sigma1m_asymptote,
)
from .special import (
    AccuracyError,
    DomainError,
    MeijerSpec,
    UnsupportedClassError,
    bessel_k,
    clgamma,
    gamma_fn,
    lgamma_fn,
    meijer_g,
    meijer_g_ln,
    pdf_A,
    pdf_Z,
)

__all__ = [
    "AccuracyError",
    "AnalyticRates",
    "DomainError",
    "MeijerSpec",
    "UnsupportedClassError",
    "analytic_rates",
    "bessel_k",
    "beta_param",
    "clgamma",
    "gamma_fn",
    "gamma_param",
    "lgamma_fn",
    "meijer_g",
    "meijer_g_ln",
    "pdf_A",
    "pdf_Z",
    "r1_lemma_bound",
    "r1_quadrature_oracle",
    "r1_theorem_bound",
    "r2_exact",
    "r2_quadrature_oracle",
    "r2_theorem_bound",
    "sigma1m_asymptote",
]
