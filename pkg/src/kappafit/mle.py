"""Maximum-likelihood fitters returning a common :class:`FitResult`."""

from dataclasses import dataclass
import math
import warnings

import numpy as np
from scipy import stats

from . import kexp, stable
from ._validation import check_finite, check_positive
from .exceptions import ConvergenceError, DegenerateInputError
from .ks import ks_statistic
from .optimize import maximize

# kappa is confined to (EPS, 1 - EPS) during fitting
EPS = 1e-6
LOW_SAMPLE = 30
FTOL = 1e-9
COARSE_FTOL = 1e-3
EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class NormalParams:
    mu: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise DegenerateInputError("sigma must be > 0")

    def as_dict(self):
        return {"mu": self.mu, "sigma": self.sigma}


@dataclass(frozen=True)
class FitResult:
    """Outcome of one maximum-likelihood fit.

    ``ks`` is the Kolmogorov-Smirnov distance between the fitted sample and
    the fitted model.
    """

    family: str
    params: object
    loglik: float
    ks: float
    converged: bool
    iterations: int
    n: int

    def as_dict(self):
        return {
            "family": self.family,
            "params": self.params.as_dict(),
            "loglik": self.loglik,
            "ks": self.ks,
            "converged": self.converged,
            "iterations": self.iterations,
            "n": self.n,
        }


# ---------------------------------------------------------------------------
# kappa-generalised

def _to_theta(p):
    u = (p.kappa - EPS) / (1.0 - 2.0 * EPS)
    return np.array([math.log(u / (1.0 - u)), math.log(p.alpha), math.log(p.beta)])


def _from_theta(theta):
    kappa = EPS + (1.0 - 2.0 * EPS) / (1.0 + math.exp(-theta[0]))
    return kappa, math.exp(theta[1]), math.exp(theta[2])


class _KappaObjective:
    """Log-likelihood of the rescaled sample as a function of unconstrained theta."""

    def __init__(self, x):
        self.logx = np.log(x)
        self.sumlog = float(self.logx.sum())
        self.n = x.size

    def params_ll(self, kappa, alpha, beta):
        ky = kappa * np.exp(math.log(beta) + alpha * self.logx)
        return (self.n * (math.log(alpha) + math.log(beta)) + (alpha - 1.0) * self.sumlog
                + float(np.sum(np.arcsinh(-ky))) / kappa - float(np.sum(np.log(np.hypot(1.0, ky)))))

    def __call__(self, theta):
        if not np.all(np.abs(theta) < 60):
            return -math.inf
        with np.errstate(over="ignore", invalid="ignore"):
            return self.params_ll(*_from_theta(theta))


def kappa_initializers(x):
    """Three starting points: Weibull log-moments with kappa 0.3 and 0.7, and a
    tail-slope start that maps an upper-decile log-log regression through
    ``exponent = alpha / kappa``."""
    logx = np.log(x)
    sd = float(np.std(logx))
    alpha_w = math.pi / (math.sqrt(6.0) * sd) if sd > 0 else 1.0
    alpha_w = min(max(alpha_w, 0.05), 20.0)
    beta_w = math.exp(-alpha_w * float(np.mean(logx)) - EULER_GAMMA)
    starts = [kexp.KappaParams(0.3, alpha_w, beta_w), kexp.KappaParams(0.7, alpha_w, beta_w)]

    n = x.size
    xs = np.sort(x)
    k = max(5, n // 10)
    top = xs[-k:]
    # empirical tail at the upper-decile order statistics
    emp = (n - np.arange(n - k + 1, n + 1) + 0.5) / n
    slope, intercept = np.polyfit(np.log(top), np.log(emp), 1)
    exponent = -slope
    if np.isfinite(exponent) and exponent > 0:
        kappa_t = min(max(alpha_w / exponent, 0.05), 0.95)
        prefactor = math.exp(intercept)
        beta_t = prefactor ** -kappa_t / (2.0 * kappa_t)
        alpha_t = exponent * kappa_t
        if all(map(math.isfinite, (alpha_t, beta_t))) and beta_t > 0:
            starts.append(kexp.KappaParams(kappa_t, alpha_t, beta_t))
    return starts


def fit_kappa(tail, ftol=FTOL, max_iter=4000):
    """Fit ``(kappa, alpha, beta)`` to a positive sample by maximum likelihood.

    The sample is divided by its median before optimisation (the law is
    scale-equivariant, ``beta -> beta * c**-alpha``), and the Nelder-Mead
    maximiser is run from each of :func:`kappa_initializers`; the highest
    final log-likelihood wins.
    """
    x = np.atleast_1d(check_positive(tail)).astype(float).ravel()
    if x.size < 3:
        raise DegenerateInputError("need at least 3 observations for a kappa fit")
    if x.size < LOW_SAMPLE:
        warnings.warn(f"only {x.size} observations; kappa fit may be unstable", RuntimeWarning)
    scale = float(np.median(x))
    xs = x / scale
    obj = _KappaObjective(xs)

    # coarse pass from every start, then polish the winner to ftol
    coarse = None
    iterations = 0
    for start in kappa_initializers(xs):
        theta0 = _to_theta(start)
        if not math.isfinite(obj(theta0)):
            continue
        res = maximize(obj, theta0, tol=1e-6, ftol=COARSE_FTOL, max_iter=max_iter,
                       step=np.array([0.5, 0.2, 0.3]), restart=False)
        iterations += res.iterations
        if math.isfinite(res.value) and (coarse is None or res.value > coarse.value):
            coarse = res
    if coarse is None:
        raise ConvergenceError("kappa fit failed from every initializer")
    best = maximize(obj, coarse.x, tol=1e-10, ftol=ftol, max_iter=max_iter,
                    step=np.array([0.1, 0.05, 0.05]))
    iterations += best.iterations
    kappa, alpha, beta = _from_theta(best.x)
    params = kexp.KappaParams(kappa, alpha, beta).rescaled(scale)
    return FitResult(
        family="kappa",
        params=params,
        loglik=kexp.loglik(x, params),
        ks=ks_statistic(x, lambda v: kexp.survival(v, params)),
        converged=best.converged,
        iterations=iterations,
        n=x.size,
    )


# ---------------------------------------------------------------------------
# normal and stable on the full return sample

def normal_loglik(data, p):
    return float(np.sum(stats.norm.logpdf(data, loc=p.mu, scale=p.sigma)))


def fit_normal(returns):
    """Closed-form normal MLE: sample mean and divide-by-n standard deviation."""
    r = np.atleast_1d(check_finite(returns)).astype(float).ravel()
    if r.size < 2:
        raise DegenerateInputError("normal fit needs at least 2 observations")
    mu = float(np.mean(r))
    sigma = float(np.sqrt(np.mean((r - mu) ** 2)))
    if not sigma > 0:
        raise DegenerateInputError("zero variance: the normal fit is degenerate")
    params = NormalParams(mu, sigma)
    return FitResult(
        family="normal",
        params=params,
        loglik=normal_loglik(r, params),
        ks=ks_statistic(r, lambda v: stats.norm.sf(v, loc=mu, scale=sigma)),
        converged=True,
        iterations=0,
        n=r.size,
    )


def fit_stable(returns, heavy_tailed=True):
    """Stable MLE wrapped as a :class:`FitResult`."""
    r = np.atleast_1d(check_finite(returns)).astype(float).ravel()
    fit = stable.fit_mle(r, heavy_tailed=heavy_tailed)
    return FitResult(
        family="stable",
        params=fit.params,
        loglik=fit.loglik,
        ks=ks_statistic(r, lambda v: stable.sf(v, fit.params)),
        converged=fit.converged,
        iterations=fit.iterations,
        n=r.size,
    )
