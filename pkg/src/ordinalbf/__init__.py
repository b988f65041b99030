"""Bayes factors for point-null and order-constrained hypotheses on binomial rates."""

__version__ = "0.1.0"

from .betabinom import (  # noqa: E402
    BetaParams,
    BinomialObservation,
    DomainError,
    joint_log_pdf,
    log_beta_binomial_pmf,
    log_beta_pdf,
    sample_beta,
    update_posterior,
)
from .constraints import ConstraintSet, CycleError, PointNull, full_order, satisfies, validate  # noqa: E402
from .engine import (  # noqa: E402
    BayesFactorEstimate,
    DegenerateCountError,
    McSettings,
    compose,
    encompassing_bf,
    mc_standard_error,
    proportion_in_region,
    savage_dickey_bf,
)
from .rng import RngStream  # noqa: E402

__all__ = [
    "__version__",
    "BetaParams",
    "BinomialObservation",
    "DomainError",
    "joint_log_pdf",
    "log_beta_binomial_pmf",
    "log_beta_pdf",
    "sample_beta",
    "update_posterior",
    "ConstraintSet",
    "CycleError",
    "PointNull",
    "full_order",
    "satisfies",
    "validate",
    "BayesFactorEstimate",
    "DegenerateCountError",
    "McSettings",
    "compose",
    "encompassing_bf",
    "mc_standard_error",
    "proportion_in_region",
    "savage_dickey_bf",
    "RngStream",
]
