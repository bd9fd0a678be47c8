"""Kaniadakis kappa-exponential and the kappa-generalised distribution.

The distribution lives on ``(0, inf)`` and is defined through its survival
function ``P(X > x) = exp_k(-beta * x**alpha)``.  It behaves like a Weibull
law near the origin and like a Pareto law with exponent ``alpha / kappa`` in
the tail.

All functions are vectorised over their first argument.  Logarithms of the
kappa-exponential are evaluated as ``asinh(kappa * y) / kappa`` which equals
``log exp_k(y)`` exactly but never overflows.
"""

from dataclasses import dataclass
import math

import numpy as np

from ._validation import (
    as_float_array,
    check_finite,
    check_kappa,
    check_positive,
    check_unit_interval,
    scalar_or_array,
)
from .exceptions import DomainError

# quantile() clamps probabilities to [U_CLAMP, 1 - U_CLAMP]
U_CLAMP = 1e-15


@dataclass(frozen=True)
class KappaParams:
    """Parameters ``(kappa, alpha, beta)`` of the kappa-generalised law.

    ``beta`` carries units of ``x ** -alpha``; rescaling the data by ``c``
    maps ``beta`` to ``beta * c ** -alpha`` and leaves the shape untouched.
    """

    kappa: float
    alpha: float
    beta: float

    def __post_init__(self):
        check_kappa(self.kappa)
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be finite and > 0, got {value!r}")
        object.__setattr__(self, "kappa", float(self.kappa))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))

    def rescaled(self, scale):
        """Parameters of ``scale * X`` when ``X`` follows ``self``."""
        return KappaParams(self.kappa, self.alpha, self.beta * scale ** -self.alpha)

    def as_dict(self):
        return {"kappa": self.kappa, "alpha": self.alpha, "beta": self.beta}


def kexp(x, kappa):
    """kappa-exponential ``(sqrt(1 + k^2 x^2) + k x) ** (1/k)``."""
    kappa = check_kappa(kappa)
    x = check_finite(x)
    return scalar_or_array(np.exp(np.arcsinh(kappa * x) / kappa), x)


def klog(x, kappa):
    """kappa-logarithm ``(x**k - x**-k) / (2k)``, the inverse of :func:`kexp`."""
    kappa = check_kappa(kappa)
    x = check_positive(x)
    return scalar_or_array(np.sinh(kappa * np.log(x)) / kappa, x)


def _log_survival(x, p):
    # x > 0 already checked; y = beta * x**alpha may overflow to inf, which is fine
    with np.errstate(over="ignore"):
        y = np.exp(math.log(p.beta) + p.alpha * np.log(x))
    return np.arcsinh(-p.kappa * y) / p.kappa


def survival(x, p):
    """``P(X > x)``."""
    x = check_positive(x)
    return scalar_or_array(np.exp(_log_survival(x, p)), x)


def cdf(x, p):
    """``P(X <= x)``; computed with ``expm1`` so small probabilities keep precision."""
    x = check_positive(x)
    return scalar_or_array(-np.expm1(_log_survival(x, p)), x)


def log_pdf(x, p):
    x = check_positive(x)
    logx = np.log(x)
    with np.errstate(over="ignore"):
        ky = p.kappa * np.exp(math.log(p.beta) + p.alpha * logx)
    out = (math.log(p.alpha) + math.log(p.beta) + (p.alpha - 1.0) * logx
           + np.arcsinh(-ky) / p.kappa - np.log(np.hypot(1.0, ky)))
    return scalar_or_array(out, x)


def pdf(x, p):
    """Density ``alpha beta x^(alpha-1) exp_k(-beta x^alpha) / sqrt(1 + (k beta x^alpha)^2)``."""
    x = check_positive(x)
    return scalar_or_array(np.exp(log_pdf(x, p)), x)


def quantile(u, p):
    """Inverse CDF; ``u`` is clamped to ``[1e-15, 1 - 1e-15]`` first."""
    u = check_unit_interval(u)
    u = np.clip(u, U_CLAMP, 1.0 - U_CLAMP)
    # -log_k(1 - u) written via log1p to keep precision for small u
    y = -np.sinh(p.kappa * np.log1p(-u)) / p.kappa
    x = np.exp((np.log(y) - math.log(p.beta)) / p.alpha)
    return scalar_or_array(x, u)


def sample(n, p, seed=None):
    """Draw ``n`` i.i.d. variates by inverse-transform sampling.

    ``seed`` may be an integer, ``None`` or a :class:`numpy.random.Generator`.
    """
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    # rng.random() can return exactly 0.0; the clamp in quantile() covers it
    u[u == 0.0] = U_CLAMP
    return quantile(u, p)


def loglik(data, p):
    """Sum of :func:`log_pdf` over ``data``."""
    data = check_positive(data)
    return float(np.sum(log_pdf(np.atleast_1d(data), p)))


def tail_asymptote(p):
    """Return ``(exponent, prefactor)`` with ``P(X > x) ~ prefactor * x**-exponent``."""
    exponent = p.alpha / p.kappa
    prefactor = (2.0 * p.kappa * p.beta) ** (-1.0 / p.kappa)
    return exponent, prefactor


def weibull_survival(x, alpha, beta):
    """Survival of the kappa -> 0 limit, ``exp(-beta x^alpha)``."""
    x = check_positive(x)
    return scalar_or_array(np.exp(-beta * x ** alpha), x)


__all__ = [
    "KappaParams", "kexp", "klog", "survival", "cdf", "pdf", "log_pdf",
    "quantile", "sample", "loglik", "tail_asymptote", "weibull_survival",
]
