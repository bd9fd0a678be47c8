"""scikit-learn style estimators wrapping the functional API.

Each distribution estimator follows the density-estimator conventions of
:class:`sklearn.neighbors.KernelDensity`: ``fit(X)`` learns parameters into
trailing-underscore attributes, ``score_samples(X)`` returns per-sample
log-densities and ``score(X)`` their sum.  ``X`` may be 1-D or a single
column.
"""

import numpy as np
from scipy import stats
from sklearn.base import BaseEstimator, DensityMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import kexp, mle, returns as rp, stable
from ._validation import check_sample
from .exceptions import InputError
from .ks import ks_statistic


class _FitAttributes:
    def _store(self, result):
        self.fit_result_ = result
        self.params_ = result.params
        self.loglik_ = result.loglik
        self.ks_ = result.ks
        self.converged_ = result.converged
        self.n_iter_ = result.iterations
        self.n_samples_fit_ = result.n

    def score(self, X, y=None):
        """Total log-likelihood of ``X`` under the fitted model."""
        return float(np.sum(self.score_samples(X)))


class KappaGeneralized(_FitAttributes, DensityMixin, BaseEstimator):
    """kappa-generalised law on (0, inf) fitted by maximum likelihood.

    Parameters
    ----------
    ftol : float
        Convergence tolerance on the log-likelihood spread of the simplex.
    max_iter : int
        Iteration cap per optimizer run.

    Attributes
    ----------
    kappa_, alpha_, beta_ : float
        Fitted parameters.
    params_ : KappaParams
    loglik_, ks_ : float
        Log-likelihood and KS distance of the training sample.
    """

    def __init__(self, ftol=mle.FTOL, max_iter=4000):
        self.ftol = ftol
        self.max_iter = max_iter

    def fit(self, X, y=None):
        x = check_sample(X, min_samples=3)
        if np.any(x <= 0):
            raise InputError("KappaGeneralized needs strictly positive data")
        self._store(mle.fit_kappa(x, ftol=self.ftol, max_iter=self.max_iter))
        self.kappa_ = self.params_.kappa
        self.alpha_ = self.params_.alpha
        self.beta_ = self.params_.beta
        return self

    def score_samples(self, X):
        check_is_fitted(self, "params_")
        return kexp.log_pdf(check_sample(X), self.params_)

    def pdf(self, X):
        check_is_fitted(self, "params_")
        return kexp.pdf(check_sample(X), self.params_)

    def cdf(self, X):
        check_is_fitted(self, "params_")
        return kexp.cdf(check_sample(X), self.params_)

    def sf(self, X):
        check_is_fitted(self, "params_")
        return kexp.survival(check_sample(X), self.params_)

    def ppf(self, u):
        check_is_fitted(self, "params_")
        return kexp.quantile(u, self.params_)

    def sample(self, n_samples=1, random_state=None):
        check_is_fitted(self, "params_")
        return kexp.sample(n_samples, self.params_, random_state)

    def tail_asymptote(self):
        """``(exponent, prefactor)`` of the power-law tail."""
        check_is_fitted(self, "params_")
        return kexp.tail_asymptote(self.params_)


class StableDistribution(_FitAttributes, DensityMixin, BaseEstimator):
    """Four-parameter stable law (0-parameterisation) fitted by maximum likelihood.

    With ``heavy_tailed=True`` the stability index is kept below 2 so the
    fitted law always has power-law tails.
    """

    def __init__(self, heavy_tailed=True):
        self.heavy_tailed = heavy_tailed

    def fit(self, X, y=None):
        x = check_sample(X, min_samples=20)
        self._store(mle.fit_stable(x, heavy_tailed=self.heavy_tailed))
        p = self.params_
        self.alpha_, self.beta_, self.gamma_, self.delta_ = p.alpha, p.beta, p.gamma, p.delta
        return self

    def score_samples(self, X):
        check_is_fitted(self, "params_")
        f = stable.pdf(check_sample(X), self.params_)
        return np.log(np.maximum(f, 1e-300))

    def pdf(self, X):
        check_is_fitted(self, "params_")
        return stable.pdf(check_sample(X), self.params_)

    def cdf(self, X):
        check_is_fitted(self, "params_")
        return stable.cdf(check_sample(X), self.params_)

    def sf(self, X):
        check_is_fitted(self, "params_")
        return stable.sf(check_sample(X), self.params_)


class NormalDistribution(_FitAttributes, DensityMixin, BaseEstimator):
    """Normal law fitted in closed form (mean, divide-by-n standard deviation)."""

    def fit(self, X, y=None):
        x = check_sample(X, min_samples=2)
        self._store(mle.fit_normal(x))
        self.mu_, self.sigma_ = self.params_.mu, self.params_.sigma
        return self

    def score_samples(self, X):
        check_is_fitted(self, "params_")
        return stats.norm.logpdf(check_sample(X), self.mu_, self.sigma_)

    def cdf(self, X):
        check_is_fitted(self, "params_")
        return stats.norm.cdf(check_sample(X), self.mu_, self.sigma_)

    def sf(self, X):
        check_is_fitted(self, "params_")
        return stats.norm.sf(check_sample(X), self.mu_, self.sigma_)


class TwoTailKappa(BaseEstimator):
    """Separate kappa-generalised fits to ``-R | R < 0`` and ``R | R > 0``.

    The composite model puts mass ``q_`` below zero, ``zero_mass_`` at
    exactly zero and the rest above, each tail shaped by its own fit.
    """

    def __init__(self, ftol=mle.FTOL, max_iter=4000):
        self.ftol = ftol
        self.max_iter = max_iter

    def fit(self, X, y=None):
        r = check_sample(X, min_samples=2)
        tails = rp.split_tails(r)
        self.q_ = tails.q
        self.zero_mass_ = tails.zero_count / tails.n
        self.neg_ = KappaGeneralized(self.ftol, self.max_iter).fit(tails.tail("neg"))
        self.pos_ = KappaGeneralized(self.ftol, self.max_iter).fit(tails.tail("pos"))
        self.ks_ = ks_statistic(r, self.sf, self._sf_left)
        return self

    def composite_tail(self, r):
        """``P(R < r)`` for negative ``r`` and ``P(R > r)`` for positive ``r``."""
        check_is_fitted(self, "q_")
        return rp.composite_tail(r, self.q_, self.neg_.params_, self.pos_.params_, self.zero_mass_)

    def sf(self, r):
        check_is_fitted(self, "q_")
        return rp.composite_sf(r, self.q_, self.neg_.params_, self.pos_.params_, self.zero_mass_)

    def _sf_left(self, r):
        return rp.composite_sf_left(r, self.q_, self.neg_.params_, self.pos_.params_,
                                    self.zero_mass_)

    def cdf(self, r):
        return 1.0 - self.sf(r)


class LogReturns(TransformerMixin, BaseEstimator):
    """Map closing prices ``S_0..S_n`` to daily log returns ``R_1..R_n``.

    The output has one row fewer than the input.
    """

    def fit(self, X, y=None):
        check_sample(X, min_samples=2)
        return self

    def transform(self, X):
        s = check_sample(X, min_samples=2)
        if np.any(s <= 0):
            raise InputError("prices must be strictly positive")
        return np.log(s[1:] / s[:-1])
