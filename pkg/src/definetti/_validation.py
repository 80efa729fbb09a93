"""Small input-validation helpers shared across modules."""

import numbers

import numpy as np


def check_unit_interval(x, name="x", open_=False):
    """Return ``x`` as a float array, raising ``ValueError`` outside [0, 1].

    With ``open_=True`` the endpoints are rejected too.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)):
        raise ValueError(f"{name} contains NaN")
    if open_:
        bad = (arr <= 0.0) | (arr >= 1.0)
    else:
        bad = (arr < 0.0) | (arr > 1.0)
    if np.any(bad):
        interval = "(0, 1)" if open_ else "[0, 1]"
        raise ValueError(f"{name} must lie in {interval}, got {x!r}")
    return arr


def check_positive_int(n, name="n", max_value=None):
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"{name} must be >= 1, got {n}")
    if max_value is not None and n > max_value:
        raise OverflowError(f"{name}={n} exceeds the configured maximum {max_value}")
    return int(n)


def check_positive(value, name):
    value = float(value)
    if not value > 0.0 or not np.isfinite(value):
        raise ValueError(f"{name} must be a positive finite number, got {value}")
    return value


def floor_nx(n, x):
    """``floor(n * x)`` that treats ``x == k/n`` as exactly ``k``.

    Products like ``n * (k / n)`` can land one ulp below ``k``; values within a
    few ulps of an integer are snapped to it before flooring.
    """
    nx = np.asarray(n * np.asarray(x, dtype=float))
    nearest = np.rint(nx)
    snap = np.abs(nx - nearest) <= 8.0 * np.finfo(float).eps * np.maximum(1.0, np.abs(nx))
    out = np.where(snap, nearest, np.floor(nx)).astype(np.int64)
    return out if out.ndim else int(out)
