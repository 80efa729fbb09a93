"""De Finetti (mixing) measures on [0, 1].

Four families are supported: beta laws, polynomial densities, finitely
supported laws and a finite-depth approximation of the Cantor measure.
Every prior exposes its distribution function (with left limits), the
generalized inverse, partial first moments, raw moments and ``C1``.
Absolutely continuous priors also expose the density, its derivative,
the sup norm and the weighted seminorm ``sup [t(1-t)]^g |f'(t)|``.

All values are immutable and hashable, so they can be used as cache keys.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from numpy.polynomial import Polynomial
from scipy import special

from ._validation import check_positive, check_unit_interval
from .exceptions import UnsupportedPriorError

__all__ = [
    "Prior",
    "Beta",
    "PolyDensity",
    "Discrete",
    "Cantor",
    "prior_from_dict",
    "poly_weighted_sup",
]

SEMINORM_START = 2 ** 10
SEMINORM_MAX = 2 ** 20
SEMINORM_RTOL = 1e-6


def _scalar_or_array(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


class Prior:
    """Common interface of all mixing measures."""

    kind = "abstract"
    absolutely_continuous = False

    # -- distribution function ------------------------------------------
    def cdf(self, x, left=False):
        """``F(x) = mu([0, x])``, or ``mu([0, x))`` when ``left`` is true.

        ``x`` must lie in [0, 1]. ``F(1) == 1`` exactly.
        """
        arr = check_unit_interval(x)
        out = np.clip(self._cdf(np.atleast_1d(arr), left), 0.0, 1.0)
        if not left:
            out = np.where(np.atleast_1d(arr) >= 1.0, 1.0, out)
        return _scalar_or_array(out.reshape(arr.shape), x)

    def cdf_ext(self, x, left=False):
        """Distribution function extended to the real line (0 left of 0, 1 right of 1)."""
        x = np.asarray(x, dtype=float)
        inside = np.clip(x, 0.0, 1.0)
        vals = np.atleast_1d(self.cdf(inside, left=left)).reshape(x.shape)
        vals = np.where(x < 0.0, 0.0, vals)
        vals = np.where(x > 1.0, 1.0, vals)
        if left:
            vals = np.where(x == 0.0, 0.0, vals)
        return vals

    def quantile(self, u):
        """Generalized inverse ``inf{x in [0, 1] : F(x) >= u}``."""
        arr = np.asarray(u, dtype=float)
        out = self._quantile(np.clip(np.atleast_1d(arr), 0.0, 1.0))
        return _scalar_or_array(out.reshape(arr.shape), u)

    def partial_mean(self, x, left=False):
        """``int_{[0, x]} t mu(dt)`` (``[0, x)`` when ``left``)."""
        arr = check_unit_interval(x)
        out = self._partial_mean(np.atleast_1d(arr), left)
        return _scalar_or_array(out.reshape(arr.shape), x)

    def integrated_cdf(self, a, b):
        """``int_a^b F(x) dx`` for ``0 <= a <= b <= 1``, by parts."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return (b * self.cdf(b) - a * self.cdf(a)
                - (self.partial_mean(b) - self.partial_mean(a)))

    # -- moments ----------------------------------------------------------
    def moment(self, j):
        """Raw moment ``E[theta^j]``."""
        if j < 0 or int(j) != j:
            raise ValueError(f"moment order must be a nonnegative integer, got {j}")
        if j == 0:
            return 1.0
        return float(self._moment(int(j)))

    def c1(self):
        """``C1 = int t(1-t) mu(dt) = m1 - m2``; lies in [0, 1/4]."""
        return float(min(max(self.moment(1) - self.moment(2), 0.0), 0.25))

    # -- densities --------------------------------------------------------
    def density(self, theta):
        raise UnsupportedPriorError(f"{self.kind} prior has no density")

    def derivative(self, theta):
        raise UnsupportedPriorError(f"{self.kind} prior has no density")

    def sup_norm(self):
        raise UnsupportedPriorError(f"{self.kind} prior has no density")

    def weighted_seminorm(self, gamma):
        raise UnsupportedPriorError(f"{self.kind} prior has no density")

    # -- atomic representation -------------------------------------------
    def mixing_rule(self, n):
        """Nodes and weights integrating degree-``n`` polynomials against ``mu``.

        Only defined for the atomic families (discrete and Cantor).
        """
        raise UnsupportedPriorError(f"{self.kind} prior has no atomic representation")

    @property
    def jump_points(self):
        return np.empty(0)

    def to_dict(self):
        raise NotImplementedError

    # subclass hooks
    def _cdf(self, x, left):
        raise NotImplementedError

    def _quantile(self, u):
        raise NotImplementedError

    def _partial_mean(self, x, left):
        raise NotImplementedError

    def _moment(self, j):
        raise NotImplementedError


def _check_gamma(gamma):
    gamma = float(gamma)
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    return gamma


# ---------------------------------------------------------------------------
# Beta
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Beta(Prior):
    """Beta(a, b) prior with density ``t^(a-1) (1-t)^(b-1) / B(a, b)``."""

    a: float
    b: float

    kind = "beta"
    absolutely_continuous = True

    def __post_init__(self):
        object.__setattr__(self, "a", check_positive(self.a, "a"))
        object.__setattr__(self, "b", check_positive(self.b, "b"))

    def __str__(self):
        return f"Beta({self.a:g},{self.b:g})"

    def _cdf(self, x, left):
        return special.betainc(self.a, self.b, x)

    def _quantile(self, u):
        return special.betaincinv(self.a, self.b, u)

    def _partial_mean(self, x, left):
        return self.a / (self.a + self.b) * special.betainc(self.a + 1.0, self.b, x)

    def _moment(self, j):
        return math.exp(special.betaln(self.a + j, self.b) - special.betaln(self.a, self.b))

    def _log_density(self, theta):
        return (special.xlogy(self.a - 1.0, theta) + special.xlog1py(self.b - 1.0, -theta)
                - special.betaln(self.a, self.b))

    def density(self, theta):
        arr = check_unit_interval(theta, "theta")
        with np.errstate(divide="ignore"):
            out = np.exp(self._log_density(arr))
        return _scalar_or_array(out, theta)

    def derivative(self, theta):
        arr = check_unit_interval(theta, "theta")
        with np.errstate(divide="ignore", invalid="ignore"):
            slope = (self.a - 1.0) / arr - (self.b - 1.0) / (1.0 - arr)
            out = np.exp(self._log_density(arr)) * slope
        return _scalar_or_array(out, theta)

    def sup_norm(self):
        a, b = self.a, self.b
        if a < 1.0 or b < 1.0:
            return math.inf
        if a == 1.0 and b == 1.0:
            return 1.0
        mode = (a - 1.0) / (a + b - 2.0)
        return float(self.density(mode))

    def _weighted_abs_derivative(self, theta, gamma):
        a, b = self.a, self.b
        # |f'| = f * |(a-1)(1-t) - (b-1)t| / (t(1-t)), kept in log space
        lin = np.abs((a - 1.0) * (1.0 - theta) - (b - 1.0) * theta)
        with np.errstate(divide="ignore"):
            log_val = ((gamma - 1.0) * (np.log(theta) + np.log1p(-theta))
                       + self._log_density(theta) + np.log(lin))
        return np.exp(log_val)

    def weighted_seminorm(self, gamma):
        """``sup_t [t(1-t)]^gamma |f'(t)|`` by grid refinement.

        Chebyshev-Lobatto grids are doubled from 2**10 points until two
        successive maxima agree to a relative 1e-6; if 2**20 points are
        reached first the supremum is declared infinite.
        """
        gamma = _check_gamma(gamma)
        previous = None
        size = SEMINORM_START
        while size <= SEMINORM_MAX:
            i = np.arange(1, size)
            grid = 0.5 * (1.0 - np.cos(np.pi * i / size))
            grid = grid[(grid > 0.0) & (grid < 1.0)]
            current = float(np.max(self._weighted_abs_derivative(grid, gamma)))
            if not np.isfinite(current):
                return math.inf
            if previous is not None and abs(current - previous) <= SEMINORM_RTOL * max(current, 1e-300):
                return current
            if previous is not None and current == 0.0 and previous == 0.0:
                return 0.0
            previous = current
            size *= 2
        return math.inf

    def to_dict(self):
        return {"kind": "beta", "a": self.a, "b": self.b}


# ---------------------------------------------------------------------------
# Polynomial densities
# ---------------------------------------------------------------------------

def _real_roots_in(poly, lo, hi):
    if poly.degree() < 1 or not np.any(poly.coef):
        return np.empty(0)
    roots = poly.roots()
    real = roots[np.abs(roots.imag) <= 1e-9 * np.maximum(1.0, np.abs(roots.real))].real
    return np.sort(real[(real > lo) & (real < hi)])


def poly_weighted_sup(deriv, gamma, lo=0.0, hi=1.0):
    """Exact ``sup_{lo<=t<=hi} [t(1-t)]^gamma |p(t)|`` for a polynomial ``p``.

    Interior critical points of ``w p`` solve the polynomial equation
    ``gamma (1 - 2t) p + t (1 - t) p' = 0``; the endpoints complete the
    candidate set.
    """
    deriv = Polynomial(np.atleast_1d(deriv.coef) if isinstance(deriv, Polynomial) else deriv)
    if not np.any(deriv.coef):
        return 0.0
    t = Polynomial([0.0, 1.0])
    crit = gamma * (1.0 - 2.0 * t) * deriv + t * (1.0 - t) * deriv.deriv()
    cands = np.concatenate([[lo, hi], _real_roots_in(crit, lo, hi)])
    weight = np.clip(cands * (1.0 - cands), 0.0, None) ** gamma
    return float(np.max(weight * np.abs(deriv(cands))))


def poly_sup_abs(poly, lo=0.0, hi=1.0):
    """Exact ``sup_{lo<=t<=hi} |p(t)|`` via the roots of ``p'``."""
    if poly.degree() < 1:
        return float(abs(poly.coef[0]))
    cands = np.concatenate([[lo, hi], _real_roots_in(poly.deriv(), lo, hi)])
    return float(np.max(np.abs(poly(cands))))


@dataclass(frozen=True)
class PolyDensity(Prior):
    """Prior with a polynomial density ``f(t) = sum_i coeffs[i] t^i`` on [0, 1]."""

    coeffs: tuple

    kind = "poly"
    absolutely_continuous = True

    def __post_init__(self):
        coeffs = tuple(float(c) for c in np.atleast_1d(self.coeffs))
        if not coeffs:
            raise ValueError("coeffs must be non-empty")
        object.__setattr__(self, "coeffs", coeffs)
        mass = math.fsum(c / (i + 1) for i, c in enumerate(coeffs))
        if abs(mass - 1.0) > 1e-12:
            raise ValueError(f"polynomial density integrates to {mass!r}, not 1")
        poly = self.poly
        cands = np.concatenate([[0.0, 1.0], _real_roots_in(poly.deriv(), 0.0, 1.0),
                                np.linspace(0.0, 1.0, 1025)])
        if np.min(poly(cands)) < -1e-12:
            raise ValueError("polynomial density is negative somewhere on [0, 1]")

    def __str__(self):
        return "Poly(" + ",".join(f"{c:g}" for c in self.coeffs) + ")"

    @cached_property
    def poly(self):
        return Polynomial(self.coeffs)

    @cached_property
    def _antiderivative(self):
        return self.poly.integ(lbnd=0.0)

    @cached_property
    def _first_moment_antiderivative(self):
        return (Polynomial([0.0, 1.0]) * self.poly).integ(lbnd=0.0)

    def _cdf(self, x, left):
        return self._antiderivative(x)

    def _partial_mean(self, x, left):
        return self._first_moment_antiderivative(x)

    def _quantile(self, u):
        lo = np.zeros_like(u)
        hi = np.ones_like(u)
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            below = self._antiderivative(mid) < u
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return np.where(u <= 0.0, 0.0, hi)

    def _moment(self, j):
        return math.fsum(c / (i + j + 1) for i, c in enumerate(self.coeffs))

    def density(self, theta):
        arr = check_unit_interval(theta, "theta")
        return _scalar_or_array(self.poly(arr), theta)

    def derivative(self, theta):
        arr = check_unit_interval(theta, "theta")
        return _scalar_or_array(self.poly.deriv()(arr), theta)

    def sup_norm(self):
        return poly_sup_abs(self.poly)

    def weighted_seminorm(self, gamma):
        """Exact weighted seminorm from the derivative's coefficients."""
        return poly_weighted_sup(self.poly.deriv(), _check_gamma(gamma))

    def to_dict(self):
        return {"kind": "poly", "coeffs": list(self.coeffs)}


# ---------------------------------------------------------------------------
# Finitely supported priors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Discrete(Prior):
    """Finitely supported prior; ``atoms`` is a sequence of ``(location, weight)``."""

    atoms: tuple

    kind = "discrete"

    def __post_init__(self):
        pairs = sorted((float(loc), float(w)) for loc, w in self.atoms)
        if not pairs:
            raise ValueError("a discrete prior needs at least one atom")
        locs = np.array([p[0] for p in pairs])
        weights = np.array([p[1] for p in pairs])
        check_unit_interval(locs, "atom location")
        if np.any(weights < 0.0):
            raise ValueError("atom weights must be nonnegative")
        total = math.fsum(weights)
        if abs(total - 1.0) > 1e-15:
            raise ValueError(f"atom weights sum to {total!r}, not 1")
        object.__setattr__(self, "atoms", tuple(pairs))

    def __str__(self):
        return "Discrete(" + ",".join(f"{l:g}:{w:g}" for l, w in self.atoms) + ")"

    @cached_property
    def locations(self):
        return np.array([p[0] for p in self.atoms])

    @cached_property
    def weights(self):
        return np.array([p[1] for p in self.atoms])

    @cached_property
    def _cum(self):
        cum = np.cumsum(self.weights)
        cum[-1] = 1.0
        return np.concatenate([[0.0], cum])

    @cached_property
    def _cum_mean(self):
        return np.concatenate([[0.0], np.cumsum(self.weights * self.locations)])

    @property
    def jump_points(self):
        return self.locations

    def _cdf(self, x, left):
        side = "left" if left else "right"
        return self._cum[np.searchsorted(self.locations, x, side=side)]

    def _partial_mean(self, x, left):
        side = "left" if left else "right"
        return self._cum_mean[np.searchsorted(self.locations, x, side=side)]

    def _quantile(self, u):
        idx = np.searchsorted(self._cum[1:], u, side="left")
        idx = np.clip(idx, 0, len(self.atoms) - 1)
        return np.where(u <= 0.0, 0.0, self.locations[idx])

    def _moment(self, j):
        return math.fsum(self.weights * self.locations ** j)

    def mixing_rule(self, n):
        return self.locations, self.weights

    def to_dict(self):
        return {"kind": "discrete", "atoms": [list(p) for p in self.atoms]}


# ---------------------------------------------------------------------------
# Cantor measure
# ---------------------------------------------------------------------------

CANTOR_EXACT_DEPTH = 20
CANTOR_GAUSS_NODES = 10


@lru_cache(maxsize=None)
def _cantor_left_ends(level):
    ends = np.zeros(1)
    for j in range(1, level + 1):
        ends = np.stack([ends, ends + 2.0 * 3.0 ** (-j)], axis=1).ravel()
    return ends


@lru_cache(maxsize=None)
def _cantor_gauss(depth, nodes):
    """Gauss rule on [0, 1] for the depth-``depth`` midpoint Cantor measure.

    Depths beyond ``CANTOR_EXACT_DEPTH`` reuse that depth; the moments then
    differ by O(9**-CANTOR_EXACT_DEPTH).
    """
    if 2 ** depth <= nodes:
        x = _cantor_left_ends(depth) + 0.5 * 3.0 ** (-depth)
        return x, np.full(x.size, 2.0 ** (-depth))
    d = min(depth, CANTOR_EXACT_DEPTH)
    x = _cantor_left_ends(d) + 0.5 * 3.0 ** (-d)
    w = np.full(x.size, 2.0 ** (-d))
    # discretized Stieltjes procedure for the three-term recurrence
    alpha = np.empty(nodes)
    beta = np.empty(nodes)
    p_prev = np.zeros_like(x)
    p_cur = np.ones_like(x)
    norm_prev = 1.0
    for k in range(nodes):
        norm = np.dot(w, p_cur * p_cur)
        alpha[k] = np.dot(w, x * p_cur * p_cur) / norm
        beta[k] = norm / norm_prev if k else 1.0
        p_prev, p_cur = p_cur, (x - alpha[k]) * p_cur - (beta[k] if k else 0.0) * p_prev
        norm_prev = norm
    jacobi = np.diag(alpha) + np.diag(np.sqrt(beta[1:]), 1) + np.diag(np.sqrt(beta[1:]), -1)
    eigval, eigvec = np.linalg.eigh(jacobi)
    return eigval, eigvec[0] ** 2


@lru_cache(maxsize=None)
def _cantor_moments(depth, order):
    # X_m = X_{m-1}/3 or X_{m-1}/3 + 2/3 with probability 1/2, X_0 = 1/2
    moments = [0.5 ** j for j in range(order + 1)]
    binom = [[math.comb(j, i) for i in range(j + 1)] for j in range(order + 1)]
    for _ in range(depth):
        new = []
        for j in range(order + 1):
            shifted = math.fsum(binom[j][i] * 2.0 ** (j - i) * moments[i] for i in range(j + 1))
            new.append(3.0 ** (-j) * 0.5 * (moments[j] + shifted))
        moments = new
    return tuple(moments)


@dataclass(frozen=True)
class Cantor(Prior):
    """Depth-``depth`` approximation of the Cantor measure.

    ``2**depth`` atoms of weight ``2**-depth`` sit at the midpoints of the
    surviving level-``depth`` ternary intervals. The atoms are never
    enumerated for large depths; distribution function, inverse and partial
    moments walk the ternary tree, and integrals of smooth functions use a
    composite Gauss rule over the self-similar pieces.
    """

    depth: int = 30

    kind = "cantor"

    def __post_init__(self):
        if isinstance(self.depth, bool) or int(self.depth) != self.depth or self.depth < 1:
            raise ValueError(f"depth must be a positive integer, got {self.depth}")
        object.__setattr__(self, "depth", int(self.depth))

    def __str__(self):
        return f"Cantor(depth={self.depth})"

    @property
    def holder_exponent(self):
        return math.log(2.0) / math.log(3.0)

    def _walk(self, x, left):
        """Return ``(mass, first_moment)`` of the atoms in ``[0, x]`` (or ``[0, x)``)."""
        x = np.asarray(x, dtype=float)
        mass = np.zeros_like(x)
        mean = np.zeros_like(x)
        start = np.zeros_like(x)
        active = np.ones(x.shape, dtype=bool)
        for j in range(self.depth):
            weight = 2.0 ** (-j)
            third = 3.0 ** (-j - 1)
            rel = x - start
            in_left = rel < third
            in_right = rel >= 2.0 * third
            # whole left child lies below x unless x is in the left third
            take = active & ~in_left
            mass = np.where(take, mass + 0.5 * weight, mass)
            mean = np.where(take, mean + 0.5 * weight * (start + 0.5 * third), mean)
            active = active & (in_left | in_right)
            start = np.where(active & in_right, start + 2.0 * third, start)
        mid = start + 0.5 * 3.0 ** (-self.depth)
        hit = active & ((x > mid) if left else (x >= mid))
        leaf = 2.0 ** (-self.depth)
        mass = np.where(hit, mass + leaf, mass)
        mean = np.where(hit, mean + leaf * mid, mean)
        return mass, mean

    def _cdf(self, x, left):
        return self._walk(x, left)[0]

    def _partial_mean(self, x, left):
        return self._walk(x, left)[1]

    def _quantile(self, u):
        acc = np.zeros_like(u)
        start = np.zeros_like(u)
        for j in range(self.depth):
            half = 2.0 ** (-j - 1)
            go_right = u > acc + half
            acc = np.where(go_right, acc + half, acc)
            start = np.where(go_right, start + 2.0 * 3.0 ** (-j - 1), start)
        out = start + 0.5 * 3.0 ** (-self.depth)
        return np.where(u <= 0.0, 0.0, out)

    def _moment(self, j):
        return _cantor_moments(self.depth, j)[j]

    def mixing_level(self, n):
        """Tree level at which the composite rule switches to Gauss nodes."""
        level = math.ceil(math.log(10.0 * max(n, 1)) / math.log(3.0))
        return min(level, self.depth)

    def mixing_rule(self, n, level=None):
        """Composite Gauss rule: one small rule per level-``level`` Cantor piece.

        Each piece carries the affine image of the depth-``(depth - level)``
        measure; its width ``3**-level`` is at most ``1/(10 n)`` by default,
        so binomial kernels of order ``n`` are integrated to rounding error.
        """
        level = self.mixing_level(n) if level is None else min(int(level), self.depth)
        t, w = _cantor_gauss(self.depth - level, CANTOR_GAUSS_NODES)
        ends = _cantor_left_ends(level)
        nodes = (ends[:, None] + 3.0 ** (-level) * t[None, :]).ravel()
        weights = np.broadcast_to(2.0 ** (-level) * w[None, :], (ends.size, t.size)).ravel()
        return nodes, weights.copy()

    def atoms_array(self):
        """All atom locations; only sensible for small depths."""
        if self.depth > CANTOR_EXACT_DEPTH:
            raise ValueError("refusing to enumerate more than 2**20 atoms")
        return _cantor_left_ends(self.depth) + 0.5 * 3.0 ** (-self.depth)

    def to_dict(self):
        return {"kind": "cantor", "depth": self.depth}


_KINDS = {"beta": Beta, "poly": PolyDensity, "discrete": Discrete, "cantor": Cantor}


def prior_from_dict(spec):
    """Build a prior from ``{"kind": ..., ...}`` as produced by ``to_dict``."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError(f"prior spec must be a mapping with a 'kind' key, got {spec!r}")
    kind = spec["kind"]
    params = {k: v for k, v in spec.items() if k != "kind"}
    if kind == "beta":
        return Beta(params["a"], params["b"])
    if kind == "poly":
        return PolyDensity(tuple(params["coeffs"]))
    if kind == "discrete":
        return Discrete(tuple(tuple(p) for p in params["atoms"]))
    if kind == "cantor":
        return Cantor(params.get("depth", 30))
    raise ValueError(f"unknown prior kind {kind!r}; expected one of {sorted(_KINDS)}")
