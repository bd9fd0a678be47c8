"""Heavy-tailed fits of daily log returns: kappa-generalised, stable and normal laws."""

__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    InputError,
    KappaFitError,
    NumericalError,
)
from .kexp import KappaParams  # noqa: E402
from .stable import StableParams  # noqa: E402
from .mle import FitResult, NormalParams, fit_kappa, fit_normal, fit_stable  # noqa: E402
from .gof import GofResult, mc_gof_test  # noqa: E402
from .ks import ks_statistic  # noqa: E402
from .estimators import (  # noqa: E402
    KappaGeneralized,
    LogReturns,
    NormalDistribution,
    StableDistribution,
    TwoTailKappa,
)

__all__ = [
    "ConvergenceError", "DegenerateInputError", "DomainError", "InputError",
    "KappaFitError", "NumericalError", "KappaParams", "StableParams", "NormalParams",
    "FitResult", "fit_kappa", "fit_normal", "fit_stable", "GofResult", "mc_gof_test",
    "ks_statistic", "KappaGeneralized", "LogReturns", "NormalDistribution",
    "StableDistribution", "TwoTailKappa",
]
