"""The law of the sample mean of ``n`` exchangeable Bernoulli variables.

``sample_mean_law`` builds the atoms ``p[k] = P[X_1 + ... + X_n = k]`` from
the mixing measure. Its distribution function is available along two
independent routes: summing atoms (``law_cdf``) or integrating the prior's
distribution function against a beta kernel (``smoothing_cdf``). For the
Beta(alpha, 1) prior there is also a closed gamma-ratio form together with
Wendel-type two-sided bounds.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special, stats

from ._validation import check_positive, check_positive_int, check_unit_interval, floor_nx
from .exceptions import QuadratureError
from .priors import Beta, PolyDensity, Prior
from .special import log_gamma_ratio

__all__ = [
    "MAX_N",
    "SampleMeanLaw",
    "sample_mean_law",
    "law_cdf",
    "smoothing_cdf",
    "beta_power_cdf",
    "wendel_bounds",
    "complement_law",
    "polya_sample",
]

MAX_N = 2 ** 16
SMOOTHING_TOL = 1e-11
_CHUNK_ENTRIES = 4_000_000


@dataclass(frozen=True, eq=False)
class SampleMeanLaw:
    """Discrete law on ``{0, 1/n, ..., 1}`` given by its atoms ``p[0..n]``."""

    n: int
    p: np.ndarray

    def __post_init__(self):
        n = check_positive_int(self.n)
        p = np.asarray(self.p, dtype=float).copy()
        if p.shape != (n + 1,):
            raise ValueError(f"expected {n + 1} atoms, got shape {p.shape}")
        if np.any(p < -1e-15):
            raise ValueError("atom probabilities must be nonnegative")
        p = np.clip(p, 0.0, None)
        if abs(math.fsum(p) - 1.0) > 1e-12:
            raise ValueError(f"atoms sum to {math.fsum(p)!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "p", p)

    @property
    def support(self):
        return np.arange(self.n + 1) / self.n

    @property
    def cumulative(self):
        """``cumulative[k] = P[S_n <= k]``, with the last entry pinned to 1."""
        cum = np.cumsum(self.p)
        cum[-1] = 1.0
        return cum

    def mean(self):
        return math.fsum(np.arange(self.n + 1) * self.p) / self.n

    def cdf(self, x):
        return law_cdf(self, x)

    def to_dict(self):
        return {"n": self.n, "p": [float(v) for v in self.p]}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        return cls(int(data["n"]), np.asarray(data["p"], dtype=float))

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "p"])
        for k, v in enumerate(self.p):
            writer.writerow([k, repr(float(v))])
        return buf.getvalue()


def _beta_atoms(prior, n):
    # C(n,k) B(a+k, b+n-k) / B(a,b) regrouped into gamma ratios with small shifts
    a, b = prior.a, prior.b
    k = np.arange(n + 1, dtype=float)
    log_p = (log_gamma_ratio(k + 1.0, a - 1.0) + log_gamma_ratio(n - k + 1.0, b - 1.0)
             - log_gamma_ratio(n + 1.0, a + b - 1.0) - special.betaln(a, b))
    return np.exp(log_p)


def _poly_atoms(prior, n):
    # C(n,k) int t^(k+i) (1-t)^(n-k) dt = Gamma(k+i+1) Gamma(n+1) / (Gamma(k+1) Gamma(n+i+2))
    k = np.arange(n + 1, dtype=float)
    out = np.zeros(n + 1)
    for i, c in enumerate(prior.coeffs):
        if c != 0.0:
            out += c * np.exp(log_gamma_ratio(k + 1.0, i) - log_gamma_ratio(n + 1.0, i + 1.0))
    return out


def _mixed_binomial_atoms(nodes, weights, n):
    """``sum_i weights[i] * Binomial(n, nodes[i]).pmf(k)`` for all k.

    Nodes are processed in sorted chunks and each chunk only touches the
    ``k`` window where the binomial mass is not negligible (Hoeffding,
    ``exp(-200)`` outside).
    """
    order = np.argsort(nodes)
    nodes = np.asarray(nodes, dtype=float)[order]
    weights = np.asarray(weights, dtype=float)[order]
    out = np.zeros(n + 1)
    half_width = 10.0 * math.sqrt(n) + 10.0
    chunk = max(1, _CHUNK_ENTRIES // (n + 1))
    for start in range(0, nodes.size, chunk):
        t = nodes[start:start + chunk]
        w = weights[start:start + chunk]
        k_lo = max(0, int(math.floor(n * t[0] - half_width)))
        k_hi = min(n, int(math.ceil(n * t[-1] + half_width)))
        k = np.arange(k_lo, k_hi + 1, dtype=float)
        out[k_lo:k_hi + 1] += w @ stats.binom.pmf(k[None, :], n, t[:, None])
    return out


def sample_mean_law(prior: Prior, n: int, max_n: int = MAX_N) -> SampleMeanLaw:
    """Law of ``(X_1 + ... + X_n) / n`` under the mixing measure ``prior``.

    Beta priors give beta-binomial atoms in log space, polynomial densities
    are integrated exactly term by term, and atomic priors (discrete,
    Cantor) are exact finite mixtures of binomials.
    """
    n = check_positive_int(n, max_value=max_n)
    if isinstance(prior, Beta):
        p = _beta_atoms(prior, n)
    elif isinstance(prior, PolyDensity):
        p = np.clip(_poly_atoms(prior, n), 0.0, None)
    else:
        nodes, weights = prior.mixing_rule(n)
        p = _mixed_binomial_atoms(nodes, weights, n)
    return SampleMeanLaw(n, p)


def law_cdf(law: SampleMeanLaw, x):
    """``F_n(x) = sum_{k <= floor(n x)} p[k]``; right-continuous with jumps at ``k/n``."""
    arr = check_unit_interval(x)
    idx = floor_nx(law.n, arr)
    out = law.cumulative[np.clip(idx, 0, law.n)]
    return float(out) if np.ndim(x) == 0 else out


@lru_cache(maxsize=65536)
def _smoothing_cdf_cell(prior, n, k):
    if prior.absolutely_continuous:
        # Y ~ Beta(k+1, n-k) concentrates near k/n; give quad the bulk explicitly
        mean = (k + 1.0) / (n + 1.0)
        sd = math.sqrt(mean * (1.0 - mean) / (n + 2.0))
        points = sorted({float(np.clip(mean + s * sd, 1e-12, 1.0 - 1e-12))
                         for s in (-8.0, -3.0, 0.0, 3.0, 8.0)})
        log_norm = special.betaln(k + 1.0, n - k)
        cdf = prior._cdf

        def integrand(y):
            log_kernel = special.xlogy(k, y) + special.xlog1py(n - k - 1.0, -y) - log_norm
            return math.exp(log_kernel) * cdf(y, False)

        value, err = integrate.quad(
            integrand,
            0.0, 1.0, points=points, epsabs=1e-14, epsrel=1e-13, limit=400,
        )
        if err > SMOOTHING_TOL:
            raise QuadratureError(
                f"smoothing integral for n={n}, k={k} reached error {err:.3g} > {SMOOTHING_TOL}")
        return value
    # step distribution function: E[F(Y)] = sum_atoms w * P[Y >= t]
    if hasattr(prior, "mixing_level"):
        nodes, weights = prior.mixing_rule(n, level=prior.mixing_level(n) + 2)
    else:
        nodes, weights = prior.mixing_rule(n)
    return float(np.dot(weights, special.betaincc(k + 1.0, n - k, nodes)))


def smoothing_cdf(prior: Prior, n: int, x: float) -> float:
    """``F_n(x)`` as ``int_0^1 beta(y; floor(nx)+1, n-floor(nx)) F(y) dy``.

    Absolutely continuous priors use adaptive Gauss-Kronrod quadrature with
    breakpoints around the kernel's bulk; step priors reduce to a sum of
    regularized incomplete beta values, one per atom.
    """
    n = check_positive_int(n)
    x = float(check_unit_interval(x, open_=True))
    k = int(floor_nx(n, x))
    return _smoothing_cdf_cell(prior, n, k)


def beta_power_cdf(alpha: float, n: int, x) -> float:
    """Closed form of ``F_n(x)`` under the Beta(alpha, 1) prior.

    ``Gamma(n+1) Gamma(k+1+alpha) / (Gamma(n+1+alpha) Gamma(k+1))`` with
    ``k = floor(n x)``.
    """
    alpha = check_positive(alpha, "alpha")
    n = check_positive_int(n)
    arr = check_unit_interval(x)
    k = np.asarray(floor_nx(n, arr), dtype=float)
    log_val = log_gamma_ratio(k + 1.0, alpha) - log_gamma_ratio(n + 1.0, alpha)
    out = np.minimum(np.exp(log_val), 1.0)
    return float(out) if np.ndim(x) == 0 else out


def wendel_bounds(alpha: float, n: int, x):
    """Lower and upper Wendel envelopes of ``beta_power_cdf(alpha, n, x)``, 0 < alpha < 1."""
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    n = check_positive_int(n)
    arr = check_unit_interval(x)
    k = np.asarray(floor_nx(n, arr), dtype=float)
    base = ((k + 1.0) / (n + 1.0)) ** alpha
    lower = ((k + 1.0) / (k + 1.0 + alpha)) ** (1.0 - alpha) * base
    upper = ((n + 1.0 + alpha) / (n + 1.0)) ** (1.0 - alpha) * base
    if np.ndim(x) == 0:
        return float(lower), float(upper)
    return lower, upper


def complement_law(law: SampleMeanLaw) -> SampleMeanLaw:
    """Law of the mean of ``1 - X_i``: atoms reversed."""
    return SampleMeanLaw(law.n, law.p[::-1])


def polya_sample(a: float, b: float, n: int, seed=None, size=None):
    """Draw Polya-urn sequences with ``P[X_{k+1}=1 | S_k] = (a + S_k) / (a + b + k)``.

    Returns an int8 array of shape ``(n,)``, or ``(size, n)`` when ``size`` is given.
    """
    a = check_positive(a, "a")
    b = check_positive(b, "b")
    n = check_positive_int(n)
    rng = np.random.default_rng(seed)
    reps = 1 if size is None else int(size)
    draws = np.empty((reps, n), dtype=np.int8)
    successes = np.zeros(reps)
    for k in range(n):
        prob = (a + successes) / (a + b + k)
        step = rng.random(reps) < prob
        draws[:, k] = step
        successes += step
    return draws[0] if size is None else draws
