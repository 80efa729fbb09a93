"""Edgeworth-type approximations for standardized binomial sums.

For ``V = X - theta`` with ``X ~ Bernoulli(theta)`` this module provides the
exact characteristic function of ``(V_1 + ... + V_n) / sqrt(n sigma^2)``,
its two-term expansion, the admissible frequency range of the
``3 + delta`` moment error bound, and the lattice-corrected distribution
function ``G_n = Phi + H_n`` compared against the exact binomial one.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import special, stats

from ._validation import check_positive_int
from .exceptions import PreconditionError

__all__ = [
    "BernoulliMoments",
    "EdgeworthEval",
    "exact_cf",
    "edgeworth_cf",
    "admissible_xi",
    "bound_scale",
    "cf_error_ratio",
    "evaluate_cf",
    "sawtooth",
    "lattice_cdf_g",
    "exact_standardized_cdf",
    "edgeworth_sup_error",
    "sweep_to_csv",
]


def _check_theta(theta):
    theta = float(theta)
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    return theta


def _check_delta(delta):
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return delta


@dataclass(frozen=True)
class BernoulliMoments:
    """Moments of the centered Bernoulli variable ``X - theta``."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", _check_theta(self.theta))

    @property
    def variance(self):
        return self.theta * (1.0 - self.theta)

    @property
    def sigma(self):
        return math.sqrt(self.variance)

    @property
    def alpha3(self):
        """Third central moment ``theta (1-theta) (1 - 2 theta)``."""
        return self.variance * (1.0 - 2.0 * self.theta)

    def abs_moment(self, delta):
        """``E|X - theta|^(3+delta) = theta(1-theta) [theta^(2+delta) + (1-theta)^(2+delta)]``."""
        t = self.theta
        return self.variance * (t ** (2.0 + delta) + (1.0 - t) ** (2.0 + delta))


@dataclass(frozen=True)
class EdgeworthEval:
    n: int
    theta: float
    point: float
    exact: complex
    approx: complex
    abs_error: float
    bound_scale: float

    def row(self):
        return [self.n, self.theta, self.point, self.exact.real, self.exact.imag,
                self.approx.real, self.approx.imag, self.abs_error, self.bound_scale]


def exact_cf(n: int, theta: float, xi):
    """``E exp(i xi S / sqrt(n sigma^2))`` for the centered binomial sum ``S``.

    Computed as ``exp(n Log psi)`` with the principal logarithm of the
    single-trial characteristic function.
    """
    n = check_positive_int(n)
    theta = _check_theta(theta)
    xi = np.asarray(xi, dtype=float)
    scale = math.sqrt(n * theta * (1.0 - theta))
    u = xi / scale
    single = (1.0 - theta) * np.exp(-1j * u * theta) + theta * np.exp(1j * u * (1.0 - theta))
    out = np.exp(n * np.log(single))
    return complex(out) if out.ndim == 0 else out


def edgeworth_cf(n: int, theta: float, xi):
    """``exp(-xi^2/2) [1 + alpha3 / (6 sqrt(n) sigma^3) (i xi)^3]``."""
    n = check_positive_int(n)
    mom = BernoulliMoments(theta)
    xi = np.asarray(xi, dtype=float)
    skew = mom.alpha3 / (6.0 * math.sqrt(n) * mom.sigma ** 3)
    out = np.exp(-0.5 * xi ** 2) * (1.0 + skew * (1j * xi) ** 3)
    if mom.theta == 0.5:
        out = out.real + 0j
    return complex(out) if out.ndim == 0 else out


def admissible_xi(n: int, theta: float, delta: float) -> float:
    """``sqrt(n)/4 * (sigma^(3+delta) / beta_(3+delta))^(1/(1+delta))``."""
    n = check_positive_int(n)
    delta = _check_delta(delta)
    mom = BernoulliMoments(theta)
    ratio = mom.sigma ** (3.0 + delta) / mom.abs_moment(delta)
    return 0.25 * math.sqrt(n) * ratio ** (1.0 / (1.0 + delta))


def bound_scale(n: int, theta: float, xi, delta: float):
    """Right side of the ``3 + delta`` error bound without its numerical constant."""
    mom = BernoulliMoments(theta)
    xi = np.abs(np.asarray(xi, dtype=float))
    lead = mom.abs_moment(delta) / (n ** ((1.0 + delta) / 2.0) * mom.sigma ** (3.0 + delta))
    out = lead * xi ** (3.0 + delta) * (1.0 + xi ** 4) * np.exp(-0.25 * xi ** 2)
    return float(out) if out.ndim == 0 else out


def evaluate_cf(n: int, theta: float, xi: float, delta: float) -> EdgeworthEval:
    exact = exact_cf(n, theta, xi)
    approx = edgeworth_cf(n, theta, xi)
    return EdgeworthEval(int(n), float(theta), float(xi), exact, approx,
                         float(abs(exact - approx)), float(bound_scale(n, theta, xi, delta)))


def cf_error_ratio(n: int, theta: float, xi: float, delta: float) -> float:
    """``|exact_cf - edgeworth_cf| / bound_scale``; 0 at ``xi = 0``.

    Raises ``PreconditionError`` outside the admissible range.
    """
    limit = admissible_xi(n, theta, delta)
    if abs(xi) > limit:
        raise PreconditionError(f"|xi|={abs(xi)} exceeds the admissible bound {limit}")
    if xi == 0.0:
        return 0.0
    ev = evaluate_cf(n, theta, xi, delta)
    return ev.abs_error / ev.bound_scale


def sawtooth(x):
    """``S(x) = floor(x) - x + 1/2``."""
    x = np.asarray(x, dtype=float)
    out = np.floor(x) - x + 0.5
    return float(out) if out.ndim == 0 else out


def _g_parts(n, theta, y, saw):
    spread = math.sqrt(n * theta * (1.0 - theta))
    skew = 1.0 - 2.0 * theta
    h = (np.exp(-0.5 * y ** 2) / (math.sqrt(2.0 * math.pi) * spread)
         * (skew * (1.0 - y ** 2) / 6.0 + saw * (1.0 + skew / (6.0 * spread) * (y ** 3 - 3.0 * y))))
    return special.ndtr(y) + h


def lattice_cdf_g(n: int, theta: float, y):
    """``G_n(y; theta) = Phi(y) + H_n(y; theta)`` with the sawtooth lattice term."""
    n = check_positive_int(n)
    theta = _check_theta(theta)
    y = np.asarray(y, dtype=float)
    saw = sawtooth(n * theta + y * math.sqrt(n * theta * (1.0 - theta)))
    out = _g_parts(n, theta, y, saw)
    return float(out) if out.ndim == 0 else out


def exact_standardized_cdf(n: int, theta: float, y):
    """``P[sum (X_i - theta) <= y sqrt(n theta (1-theta))]`` for i.i.d. Bernoulli(theta)."""
    n = check_positive_int(n)
    theta = _check_theta(theta)
    y = np.asarray(y, dtype=float)
    k = np.floor(n * theta + y * math.sqrt(n * theta * (1.0 - theta)))
    out = stats.binom.cdf(k, n, theta)
    return float(out) if out.ndim == 0 else out


def edgeworth_sup_error(n: int, theta: float) -> float:
    """``sup_y |B_n(y) - G_n(y)|`` over both one-sided limits at every lattice point and the midpoints.

    Both functions jump exactly on ``y_k = (k - n theta) / sqrt(n theta(1-theta))``.
    One-sided values are assembled directly: at ``y_k`` the sawtooth equals
    ``+1/2`` (right value) or ``-1/2`` (left limit), and ``B_n`` equals
    ``P[S <= k]`` or ``P[S <= k-1]``. Between lattice points the deviation is
    smooth, so midpoints are added as interior probes.
    """
    n = check_positive_int(n)
    theta = _check_theta(theta)
    spread = math.sqrt(n * theta * (1.0 - theta))
    margin = int(math.ceil(12.0 * spread)) + 2
    k = np.arange(-margin, n + margin + 1, dtype=float)
    y = (k - n * theta) / spread
    cdf_k = stats.binom.cdf(k, n, theta)
    cdf_km1 = stats.binom.cdf(k - 1.0, n, theta)
    right = np.abs(cdf_k - _g_parts(n, theta, y, 0.5))
    left = np.abs(cdf_km1 - _g_parts(n, theta, y, -0.5))
    y_mid = (k + 0.5 - n * theta) / spread
    mid = np.abs(cdf_k - _g_parts(n, theta, y_mid, 0.0))
    return float(max(right.max(), left.max(), mid.max()))


def sweep_to_csv(evals) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "theta", "point", "exact_re", "exact_im",
                     "approx_re", "approx_im", "abs_error", "bound_scale"])
    for ev in evals:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in ev.row()])
    return buf.getvalue()
