"""Input checks used by the functional API and the estimators."""

import math

import numpy as np
from sklearn.utils import check_array

from .exceptions import DomainError, InputError


def as_float_array(x):
    """Return ``x`` as a float ndarray; scalars come back 0-d."""
    return np.asarray(x, dtype=float)


def scalar_or_array(out, like):
    """Unwrap 0-d results so scalar input gives a Python float."""
    if np.ndim(like) == 0:
        return float(out)
    return out


def check_finite(x, name="x"):
    x = as_float_array(x)
    if not np.all(np.isfinite(x)):
        raise DomainError(f"{name} must be finite")
    return x


def check_positive(x, name="x"):
    x = as_float_array(x)
    if np.any(np.isnan(x)) or np.any(x <= 0):
        raise DomainError(f"{name} must be strictly positive")
    return x


def check_unit_interval(u, name="u"):
    u = as_float_array(u)
    if np.any(~((u > 0) & (u < 1))):
        raise DomainError(f"{name} must lie in the open interval (0, 1)")
    return u


def check_kappa(kappa):
    kappa = float(kappa)
    if not (math.isfinite(kappa) and 0.0 < kappa < 1.0):
        raise DomainError(f"kappa must lie in (0, 1), got {kappa!r}")
    return kappa


def check_sample(X, name="X", min_samples=1):
    """Validate a univariate sample given as 1-D or single-column 2-D data."""
    try:
        arr = check_array(X, ensure_2d=False, dtype=np.float64,
                          ensure_min_samples=min_samples)
    except ValueError as exc:
        raise InputError(f"{name}: {exc}") from exc
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise InputError(f"{name} must be univariate, got shape {arr.shape}")
        arr = arr[:, 0]
    return np.ascontiguousarray(arr)
