"""Monte-Carlo (parametric bootstrap) goodness-of-fit test for kappa-generalised tails.

The test refits the model to every synthetic sample before computing its
KS distance, which is what makes the p-value valid when the parameters
were estimated from the data (Lilliefors' construction).
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import math

import numpy as np

from . import kexp
from ._validation import check_positive
from .exceptions import DomainError, KappaFitError
from .ks import ks_statistic
from .mle import fit_kappa

MASK64 = (1 << 64) - 1
MAX_RETRIES = 3


def splitmix64(x):
    """One step of the SplitMix64 mixer; maps any integer to a 64-bit integer."""
    z = (int(x) + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def child_seed(seed, index, attempt=0):
    """Seed for replicate ``index``: ``seed XOR splitmix(index)``; retries remix."""
    mix = splitmix64(index)
    for _ in range(attempt):
        mix = splitmix64(mix)
    return (int(seed) ^ mix) & MASK64


@dataclass(frozen=True)
class GofResult:
    s_data: float
    s_boot: np.ndarray = field(repr=False)
    p_value: float
    n_boot: int
    alpha_level: float
    reject: bool
    seed: int
    params: kexp.KappaParams = None
    n_failed: int = 0

    @classmethod
    def from_statistics(cls, s_data, s_boot, alpha_level=0.1, seed=0, params=None, n_failed=0):
        """Build the result from the observed and replicate statistics.

        ``p`` is the fraction of replicates whose statistic strictly exceeds
        the observed one; the hypothesis is rejected when ``p < alpha_level``.
        """
        s_boot = np.asarray(s_boot, dtype=float)
        n_boot = s_boot.size
        if n_boot == 0:
            raise DomainError("need at least one replicate")
        p_value = int(np.count_nonzero(s_boot > s_data)) / n_boot
        return cls(
            s_data=float(s_data),
            s_boot=s_boot,
            p_value=p_value,
            n_boot=n_boot,
            alpha_level=float(alpha_level),
            reject=bool(p_value < alpha_level),
            seed=int(seed),
            params=params,
            n_failed=int(n_failed),
        )

    def as_dict(self):
        return {
            "s_data": self.s_data,
            "s_boot": [float(v) if math.isfinite(v) else None for v in self.s_boot],
            "p_value": self.p_value,
            "n_boot": self.n_boot,
            "alpha_level": self.alpha_level,
            "reject": self.reject,
            "seed": self.seed,
            "n_failed": self.n_failed,
            "params": None if self.params is None else self.params.as_dict(),
        }


def _replicate(args):
    index, n, params, seed = args
    for attempt in range(MAX_RETRIES + 1):
        synthetic = kexp.sample(n, params, child_seed(seed, index, attempt))
        try:
            refit = fit_kappa(synthetic)
        except KappaFitError:
            continue
        return ks_statistic(synthetic, lambda v, p=refit.params: kexp.survival(v, p)), attempt
    # every attempt failed: count as exceeding the observed statistic
    return math.inf, MAX_RETRIES + 1


def mc_gof_test(tail, n_boot=100, alpha_level=0.1, seed=0, n_jobs=1, fit=None):
    """Five-step Monte-Carlo KS test of the kappa-generalised hypothesis.

    1. fit the sample and compute its KS distance ``S``;
    2. draw ``n_boot`` samples of the same size from the fitted law;
    3. refit every synthetic sample and compute its KS distance ``S_i``
       against its own refitted model;
    4. ``p = #{S_i > S} / n_boot``;
    5. reject at ``alpha_level`` when ``p < alpha_level``.

    Replicate ``i`` draws from a generator seeded with
    ``seed XOR splitmix64(i)``, so the result does not depend on ``n_jobs``.
    A pre-computed ``fit`` of ``tail`` may be passed to skip step 1's fit.
    """
    x = np.atleast_1d(check_positive(tail)).astype(float).ravel()
    n_boot = int(n_boot)
    if n_boot < 1:
        raise DomainError("n_boot must be >= 1")
    if not 0.0 < alpha_level <= 1.0:
        raise DomainError("alpha_level must lie in (0, 1]")
    if fit is None:
        fit = fit_kappa(x)
    params = fit.params
    s_data = ks_statistic(x, lambda v: kexp.survival(v, params))

    jobs = [(i, x.size, params, seed) for i in range(n_boot)]
    if n_jobs is not None and n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(_replicate, jobs, chunksize=max(1, n_boot // (4 * n_jobs))))
    else:
        results = [_replicate(job) for job in jobs]
    s_boot = np.array([r[0] for r in results])
    n_failed = sum(1 for r in results if not math.isfinite(r[0]))
    return GofResult.from_statistics(s_data, s_boot, alpha_level, seed=seed, params=params,
                                     n_failed=n_failed)
