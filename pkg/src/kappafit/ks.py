"""Kolmogorov-Smirnov distance between a sample and a model tail."""

import numpy as np

from ._validation import as_float_array
from .exceptions import InputError


def ks_statistic(data, survival_fn, survival_left_fn=None):
    """``max_i |P_hat(X > x_i) - P(X > x_i)|`` over the sample.

    The empirical tail is a step function, so both one-sided limits are
    checked at every order statistic: ``(n - i)/n`` just after ``x_(i)`` and
    ``(n - i + 1)/n`` just before it (with ties, the counts of points strictly
    above and at-or-above).  For a model with atoms pass
    ``survival_left_fn(x) = P(X >= x)``; the left limits are then compared
    against it.
    """
    x = np.sort(np.atleast_1d(as_float_array(data)).ravel())
    n = x.size
    if n == 0:
        raise InputError("data must be non-empty")
    model = np.asarray(survival_fn(x), dtype=float)
    model_left = model if survival_left_fn is None else np.asarray(survival_left_fn(x), dtype=float)
    # counts above / at-or-above each point, exact under ties
    after = (n - np.searchsorted(x, x, side="right")) / n
    before = (n - np.searchsorted(x, x, side="left")) / n
    return float(max(np.max(np.abs(after - model)), np.max(np.abs(before - model_left))))
