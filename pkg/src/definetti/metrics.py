"""Exact Kolmogorov, Wasserstein-1 and Levy distances between ``mu_n`` and ``mu``.

``F_n`` is constant on every cell ``[k/n, (k+1)/n)`` and ``F`` is
nondecreasing, so each distance reduces to evaluations of ``F`` (and its
left limits, generalized inverse and partial first moments) at finitely
many points. No grids are involved.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .mixture import SampleMeanLaw
from .priors import Prior

__all__ = ["DistanceReport", "kolmogorov", "wasserstein", "levy", "distance", "METRICS"]

METRICS = ("K", "W", "L")
LEVY_TOL = 1e-10
LEVY_MAX_ITER = 60


@dataclass(frozen=True)
class DistanceReport:
    metric: str
    n: int
    value: float
    lower: Optional[float] = None
    upper: Optional[float] = None

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")

    @property
    def envelope(self):
        if self.lower is None and self.upper is None:
            return None
        return self.lower, self.upper

    def within_envelope(self, slack=0.0):
        if self.envelope is None:
            return True
        lo = -math.inf if self.lower is None else self.lower
        hi = math.inf if self.upper is None else self.upper
        return lo - slack <= self.value <= hi + slack

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict())


def _cells(n):
    k = np.arange(n)
    return k / n, (k + 1) / n


def kolmogorov_value(law: SampleMeanLaw, prior: Prior) -> float:
    left, right = _cells(law.n)
    level = law.cumulative[:-1]
    dev_left = np.abs(level - prior.cdf(left))
    dev_right = np.abs(level - prior.cdf(right, left=True))
    return float(max(dev_left.max(), dev_right.max()))


def kolmogorov(law: SampleMeanLaw, prior: Prior) -> DistanceReport:
    """``sup_x |F_n(x) - F(x)|``.

    On each cell the deviation is monotone, so the supremum is attained at
    the left endpoint or approached at the right endpoint; atoms of the
    prior are handled through the left limits ``F(x-)``. At ``x = 1`` both
    functions equal 1.
    """
    return DistanceReport("K", law.n, kolmogorov_value(law, prior))


def wasserstein(law: SampleMeanLaw, prior: Prior) -> DistanceReport:
    """``int_0^1 |F_n - F| dx`` with the envelope ``(C1/n, sqrt(C1/n))``.

    Per cell the crossing point ``x* = F^{-1}(F_n)`` splits the integral
    into two one-signed pieces, each evaluated in closed form through
    ``int_a^b F = b F(b) - a F(a) - int_(a,b] t mu(dt)``.
    """
    left, right = _cells(law.n)
    level = law.cumulative[:-1]
    cross = np.clip(prior.quantile(level), left, right)
    below = level * (cross - left) - prior.integrated_cdf(left, cross)
    above = prior.integrated_cdf(cross, right) - level * (right - cross)
    # each piece is nonnegative up to rounding
    value = float(math.fsum(np.clip(below, 0.0, None)) + math.fsum(np.clip(above, 0.0, None)))
    c1 = prior.c1()
    return DistanceReport("W", law.n, value, c1 / law.n, math.sqrt(c1 / law.n))


def _levy_feasible(law, prior, eps):
    n = law.n
    grid = np.arange(n + 1) / n
    cum = law.cumulative
    upper_ok = np.all(cum <= prior.cdf_ext(grid + eps) + eps)
    lower_ok = np.all(prior.cdf_ext(grid[1:] - eps, left=True) - eps <= cum[:-1])
    return bool(upper_ok and lower_ok)


def levy(law: SampleMeanLaw, prior: Prior, d_k: Optional[float] = None) -> DistanceReport:
    """Smallest ``eps`` with ``F(x-eps)-eps <= F_n(x) <= F(x+eps)+eps`` for all x.

    Bisection on ``[0, d_K]`` (``d_K`` is always feasible) to ``1e-10``.
    """
    hi = kolmogorov_value(law, prior) if d_k is None else float(d_k)
    if hi == 0.0 or _levy_feasible(law, prior, 0.0):
        return DistanceReport("L", law.n, 0.0)
    lo = 0.0
    for _ in range(LEVY_MAX_ITER):
        if hi - lo <= LEVY_TOL:
            break
        mid = 0.5 * (lo + hi)
        if _levy_feasible(law, prior, mid):
            hi = mid
        else:
            lo = mid
    return DistanceReport("L", law.n, hi)


_DISPATCH = {"K": kolmogorov, "W": wasserstein, "L": levy}


def distance(law: SampleMeanLaw, prior: Prior, metric: str) -> DistanceReport:
    try:
        func = _DISPATCH[metric]
    except KeyError:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}") from None
    return func(law, prior)
