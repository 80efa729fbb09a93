"""Log-log rate estimation with a scikit-learn compatible interface.

``LogLogRegressor`` is an ordinary least-squares fit of ``log d`` on
``log n``. ``ConvergenceRateEstimator`` wraps the whole pipeline (build
``mu_n`` for every ``n``, measure a distance to the prior, fit the rate), so
it can be cloned, grid-searched or dropped into other sklearn tooling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, column_or_1d

from .exceptions import DegenerateInputError
from .metrics import METRICS, distance
from .mixture import sample_mean_law
from .priors import Prior, prior_from_dict

__all__ = [
    "RateFit",
    "LogLogRegressor",
    "ConvergenceRateEstimator",
    "fit_loglog",
    "distance_table",
]

MIN_POINTS = 4


@dataclass(frozen=True)
class RateFit:
    ns: tuple
    distances: tuple
    slope: float
    intercept: float
    r_squared: float

    def to_dict(self):
        return {"ns": list(self.ns), "distances": list(self.distances), "slope": self.slope,
                "intercept": self.intercept, "r_squared": self.r_squared}


def _check_ns(X):
    X = check_array(X, ensure_2d=False, dtype=float)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected a single column of sample sizes, got shape {X.shape}")
        X = X[:, 0]
    return X


class LogLogRegressor(RegressorMixin, BaseEstimator):
    """Least-squares fit of ``log(y) = intercept + slope * log(X)``.

    Attributes
    ----------
    slope_, intercept_ : float
    r_squared_ : float
        Coefficient of determination in log-log space.
    """

    def __init__(self, min_points=MIN_POINTS):
        self.min_points = min_points

    def fit(self, X, y):
        X = _check_ns(X)
        y = column_or_1d(check_array(y, ensure_2d=False, dtype=float), warn=True)
        if X.shape[0] != y.shape[0]:
            raise ValueError(f"X has {X.shape[0]} samples but y has {y.shape[0]}")
        if X.shape[0] < self.min_points:
            raise DegenerateInputError(f"need at least {self.min_points} points, got {X.shape[0]}")
        if np.any(y <= 0.0):
            raise DegenerateInputError("all distances must be positive for a log-log fit")
        if np.any(X < 1.0):
            raise DegenerateInputError("sample sizes must be >= 1")
        lx, ly = np.log(X), np.log(y)
        lx_c = lx - lx.mean()
        ly_c = ly - ly.mean()
        sxx = float(lx_c @ lx_c)
        if sxx == 0.0:
            raise DegenerateInputError("sample sizes must not all be equal")
        self.slope_ = float(lx_c @ ly_c) / sxx
        self.intercept_ = float(ly.mean() - self.slope_ * lx.mean())
        resid = ly - (self.intercept_ + self.slope_ * lx)
        syy = float(ly_c @ ly_c)
        self.r_squared_ = 1.0 if syy == 0.0 else float(max(0.0, 1.0 - (resid @ resid) / syy))
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "slope_")
        X = _check_ns(X)
        return np.exp(self.intercept_) * X ** self.slope_

    def score(self, X, y, sample_weight=None):
        """R^2 of the fit in log-log space."""
        check_is_fitted(self, "slope_")
        X = _check_ns(X)
        ly = np.log(column_or_1d(y))
        pred = self.intercept_ + self.slope_ * np.log(X)
        ss_res = float(np.sum((ly - pred) ** 2))
        ss_tot = float(np.sum((ly - ly.mean()) ** 2))
        return 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot


def fit_loglog(points) -> RateFit:
    """Fit ``(n, d)`` pairs; raises ``DegenerateInputError`` on fewer than 4 or nonpositive ``d``."""
    points = list(points)
    if len(points) < MIN_POINTS:
        raise DegenerateInputError(f"need at least {MIN_POINTS} points, got {len(points)}")
    ns = np.array([p[0] for p in points], dtype=float)
    ds = np.array([p[1] for p in points], dtype=float)
    reg = LogLogRegressor().fit(ns, ds)
    return RateFit(tuple(int(v) if float(v).is_integer() else float(v) for v in ns),
                   tuple(float(v) for v in ds), reg.slope_, reg.intercept_, reg.r_squared_)


def _resolve_jobs(n_jobs):
    if n_jobs is None:
        return os.cpu_count() or 1
    return max(1, int(n_jobs))


def _reports_for_n(prior, n, metrics):
    law = sample_mean_law(prior, int(n))
    out = {}
    for metric in metrics:
        try:
            out[metric] = distance(law, prior, metric)
        except Exception as exc:
            raise type(exc)(f"{exc} (prior={prior}, n={n}, metric={metric})") from exc
    return out


def distance_table(prior, ns, metrics=("K",), n_jobs=None):
    """``{metric: [DistanceReport for n in ns]}``, computed per ``n`` (optionally in parallel)."""
    for metric in metrics:
        if metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")
    jobs = _resolve_jobs(n_jobs)
    if jobs == 1:
        rows = [_reports_for_n(prior, n, metrics) for n in ns]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda n: _reports_for_n(prior, n, metrics), ns))
    return {metric: [row[metric] for row in rows] for metric in metrics}


class ConvergenceRateEstimator(BaseEstimator):
    """Estimate the decay exponent of ``d(mu_n, mu)`` over a grid of sample sizes.

    Parameters
    ----------
    prior : Prior or dict
        Mixing measure, or its ``{"kind": ...}`` description.
    metric : {"K", "W", "L"}
    n_skip : int
        Number of smallest sample sizes left out of the fit (still reported).
    n_jobs : int or None
        Worker threads; ``None`` uses all available cores.

    Attributes
    ----------
    reports_ : list of DistanceReport
    rate_ : LogLogRegressor
    slope_, intercept_ : float
    """

    def __init__(self, prior=None, metric="K", n_skip=2, n_jobs=None):
        self.prior = prior
        self.metric = metric
        self.n_skip = n_skip
        self.n_jobs = n_jobs

    def _prior(self):
        if isinstance(self.prior, Prior):
            return self.prior
        if isinstance(self.prior, dict):
            return prior_from_dict(self.prior)
        raise ValueError(f"prior must be a Prior or a dict, got {self.prior!r}")

    def fit(self, X, y=None):
        ns = _check_ns(X).astype(int)
        if np.any(np.diff(ns) <= 0):
            raise ValueError("sample sizes must be strictly increasing")
        if ns.size - self.n_skip < MIN_POINTS:
            raise DegenerateInputError(
                f"{ns.size} sample sizes minus n_skip={self.n_skip} leaves fewer than {MIN_POINTS}")
        table = distance_table(self._prior(), ns, (self.metric,), self.n_jobs)
        self.reports_ = table[self.metric]
        self.ns_ = ns
        self.distances_ = np.array([r.value for r in self.reports_])
        self.rate_ = LogLogRegressor().fit(ns[self.n_skip:], self.distances_[self.n_skip:])
        self.slope_ = self.rate_.slope_
        self.intercept_ = self.rate_.intercept_
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "rate_")
        return self.rate_.predict(X)

    def score(self, X=None, y=None):
        check_is_fitted(self, "rate_")
        return self.rate_.r_squared_

    def rate_fit(self) -> RateFit:
        check_is_fitted(self, "rate_")
        keep = slice(self.n_skip, None)
        return RateFit(tuple(int(n) for n in self.ns_[keep]),
                       tuple(float(d) for d in self.distances_[keep]),
                       self.slope_, self.intercept_, self.rate_.r_squared_)
