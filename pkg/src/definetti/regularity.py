"""Regularity functionals of prior densities.

* ``decompose_polynomial`` splits a polynomial density into an affine
  density plus two densities vanishing at both endpoints.
* ``m_constant``, ``tail_bound_check`` and ``second_difference_sup`` make the
  weighted-regularity consequences of ``sup [t(1-t)]^g |f'(t)| < inf``
  checkable numerically.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial
from scipy.stats import qmc

from ._validation import check_unit_interval
from .exceptions import PreconditionError
from .priors import PolyDensity, _real_roots_in, poly_sup_abs, poly_weighted_sup

__all__ = [
    "PiecewisePolynomial",
    "Decomposition",
    "decompose_polynomial",
    "m_constant",
    "TailBoundReport",
    "tail_bound_check",
    "second_difference_sup",
]

FALLBACK_DENSITY = Polynomial([0.0, 6.0, -6.0])


class PiecewisePolynomial:
    """Continuous function on [0, 1] given by polynomial pieces between ``breaks``."""

    def __init__(self, breaks, pieces):
        self.breaks = np.asarray(breaks, dtype=float)
        self.pieces = [p if isinstance(p, Polynomial) else Polynomial(p) for p in pieces]
        if self.breaks.size != len(self.pieces) + 1:
            raise ValueError("need exactly one more break than pieces")
        if self.breaks[0] != 0.0 or self.breaks[-1] != 1.0 or np.any(np.diff(self.breaks) <= 0):
            raise ValueError("breaks must increase from 0 to 1")

    @classmethod
    def single(cls, poly):
        return cls([0.0, 1.0], [poly])

    def _piece_index(self, x):
        return np.clip(np.searchsorted(self.breaks, x, side="right") - 1, 0, len(self.pieces) - 1)

    def _eval(self, x, deriv):
        x = np.asarray(x, dtype=float)
        idx = self._piece_index(x)
        out = np.zeros(x.shape)
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if np.any(mask):
                out[mask] = (piece.deriv() if deriv else piece)(x[mask])
        return out if out.ndim else float(out)

    def __call__(self, x):
        return self._eval(x, deriv=False)

    def derivative(self, x):
        return self._eval(x, deriv=True)

    def integral(self):
        return math.fsum(float(p.integ()(hi) - p.integ()(lo))
                         for p, lo, hi in zip(self.pieces, self.breaks[:-1], self.breaks[1:]))

    def sup_norm(self):
        return max(poly_sup_abs(p, lo, hi)
                   for p, lo, hi in zip(self.pieces, self.breaks[:-1], self.breaks[1:]))

    def derivative_sup_norm(self):
        return max(poly_sup_abs(p.deriv(), lo, hi)
                   for p, lo, hi in zip(self.pieces, self.breaks[:-1], self.breaks[1:]))

    def weighted_seminorm(self, gamma):
        """Exact ``sup [t(1-t)]^gamma |f'(t)|`` taken piece by piece."""
        return max(poly_weighted_sup(p.deriv(), gamma, lo, hi)
                   for p, lo, hi in zip(self.pieces, self.breaks[:-1], self.breaks[1:]))

    def evaluation_error(self):
        """Worst-case rounding error of evaluating any piece on [0, 1] (Horner bound)."""
        eps = np.finfo(float).eps
        return max(4.0 * (p.degree() + 1) * eps * float(np.sum(np.abs(p.coef))) for p in self.pieces)

    def to_dict(self):
        return {"breaks": [float(b) for b in self.breaks],
                "pieces": [[float(c) for c in p.coef] for p in self.pieces]}


@dataclass(frozen=True)
class Decomposition:
    """``f = a_inf f_inf + a_plus f_plus - a_minus f_minus`` with densities ``f_*``."""

    source: PolyDensity
    a_inf: float
    a_plus: float
    a_minus: float
    f_inf: PiecewisePolynomial = field(repr=False)
    f_plus: PiecewisePolynomial = field(repr=False)
    f_minus: PiecewisePolynomial = field(repr=False)

    def reconstruct(self, theta):
        return (self.a_inf * self.f_inf(theta) + self.a_plus * self.f_plus(theta)
                - self.a_minus * self.f_minus(theta))

    def check(self, gammas=(0.25, 0.5, 0.75), grid_size=1001, slack=1e-8):
        """Evaluate every inequality the decomposition must satisfy.

        Returns a mapping ``name -> bool``; names are prefixed with the
        group they belong to (``i``, ``ii``, ``iii``, ``iv``).
        """
        f = self.source
        sup_f = f.sup_norm()
        theta = np.linspace(0.0, 1.0, grid_size)
        results = {
            "i:a_inf<=sup_f": self.a_inf <= sup_f + slack,
            "i:a_plus<=1+sup_f": self.a_plus <= 1.0 + sup_f + slack,
            "i:a_minus<=1+sup_f": self.a_minus <= 1.0 + sup_f + slack,
            "ii:a_inf*sup_f_inf<=sup_f": self.a_inf * self.f_inf.sup_norm() <= sup_f + slack,
            "ii:a_inf*sup_f_inf'<=2sup_f":
                self.a_inf * self.f_inf.derivative_sup_norm() <= 2.0 * sup_f + slack,
            "iii:boundary_zeros": all(abs(g(t)) <= max(1e-12, g.evaluation_error())
                                      for g in (self.f_plus, self.f_minus) for t in (0.0, 1.0)),
            "iii:a_plus*sup_f_plus<=2sup_f": self.a_plus * self.f_plus.sup_norm() <= 2.0 * sup_f + slack,
            "iii:a_minus*sup_f_minus<=2sup_f":
                self.a_minus * self.f_minus.sup_norm() <= 2.0 * sup_f + slack,
            "iv:reconstruction": bool(np.max(np.abs(self.reconstruct(theta) - f.density(theta))) <= 1e-10),
        }
        for name, g in (("f_inf", self.f_inf), ("f_plus", self.f_plus), ("f_minus", self.f_minus)):
            rounding = g.evaluation_error()
            results[f"density:{name}"] = (abs(g.integral() - 1.0) <= max(1e-10, rounding)
                                          and float(np.min(g(theta))) >= -max(1e-12, rounding))
        for gamma in gammas:
            rhs = 2.0 / 4.0 ** gamma * sup_f + f.weighted_seminorm(gamma) + slack
            results[f"iii:pm_plus@{gamma:g}"] = self.a_plus * self.f_plus.weighted_seminorm(gamma) <= rhs
            results[f"iii:pm_minus@{gamma:g}"] = self.a_minus * self.f_minus.weighted_seminorm(gamma) <= rhs
        return results

    def to_dict(self):
        return {
            "coeffs": list(self.source.coeffs),
            "a_inf": self.a_inf,
            "a_plus": self.a_plus,
            "a_minus": self.a_minus,
            "f_inf": self.f_inf.to_dict(),
            "f_plus": self.f_plus.to_dict(),
            "f_minus": self.f_minus.to_dict(),
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def _signed_part(h, breaks, sign):
    """Pieces of ``(sign * h)_+`` on the given breaks and their total mass."""
    pieces = []
    mass = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if sign * h(0.5 * (lo + hi)) > 0.0:
            piece = sign * h
            mass += float(piece.integ()(hi) - piece.integ()(lo))
        else:
            piece = Polynomial([0.0])
        pieces.append(piece)
    return pieces, mass


def decompose_polynomial(f: PolyDensity, mass_tol=1e-14) -> Decomposition:
    """Split a polynomial density around its affine interpolant of the endpoint values.

    ``a_inf = (f(0) + f(1)) / 2`` and ``f_inf`` is the normalized affine
    interpolant; ``f_plus``/``f_minus`` are the normalized positive and
    negative parts of the remainder, stored piecewise between its roots.
    A part with zero mass is replaced by ``6t(1-t)``. When ``f`` already
    vanishes at both ends the decomposition is ``f = 1 * f``.
    """
    poly = f.poly
    # densities may dip below zero by rounding (validation allows -1e-12)
    f0, f1 = max(float(poly(0.0)), 0.0), max(float(poly(1.0)), 0.0)
    fallback = PiecewisePolynomial.single(FALLBACK_DENSITY)
    if f0 == 0.0 and f1 == 0.0:
        return Decomposition(f, 0.0, 1.0, 0.0, PiecewisePolynomial.single(Polynomial([1.0])),
                             PiecewisePolynomial.single(poly), fallback)
    a_inf = 0.5 * (f0 + f1)
    affine = Polynomial([f0, f1 - f0])
    coef = np.zeros(max(poly.coef.size, 2))
    coef[:poly.coef.size] = poly.coef
    coef[:2] -= affine.coef
    coef[0] = 0.0
    remainder = Polynomial(coef)
    breaks = np.concatenate([[0.0], _real_roots_in(remainder, 0.0, 1.0), [1.0]])
    breaks = np.unique(breaks)
    parts = []
    for sign in (1.0, -1.0):
        pieces, mass = _signed_part(remainder, breaks, sign)
        if mass <= mass_tol:
            parts.append((0.0, fallback))
        else:
            parts.append((mass, PiecewisePolynomial(breaks, [p / mass for p in pieces])))
    (a_plus, f_plus), (a_minus, f_minus) = parts
    return Decomposition(f, a_inf, a_plus, a_minus,
                         PiecewisePolynomial.single(affine / a_inf), f_plus, f_minus)


def m_constant(f, gamma: float) -> float:
    """``M(f) = 2^g / (1 - g) |f|_{1,g} + 2^(1-g) ||f||_inf``; infinite if the seminorm is."""
    gamma = float(gamma)
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    semi = f.weighted_seminorm(gamma)
    if not math.isfinite(semi):
        return math.inf
    return 2.0 ** gamma / (1.0 - gamma) * semi + 2.0 ** (1.0 - gamma) * f.sup_norm()


@dataclass(frozen=True)
class TailBoundReport:
    gamma: float
    m: float
    density_left: bool
    density_right: bool
    cdf_left: bool
    cdf_right: bool

    @property
    def passed(self):
        return self.density_left and self.density_right and self.cdf_left and self.cdf_right

    def __bool__(self):
        return self.passed


def tail_bound_check(prior, gamma: float, grid=None, boundary_tol=1e-12) -> TailBoundReport:
    """Check the endpoint decay bounds implied by the weighted regularity.

    Verifies on ``grid`` that ``f(t) <= M t^(1-g)``, ``f(t) <= M (1-t)^(1-g)``,
    ``F(x) <= M x^(2-g) / (2-g)`` and ``1 - F(x) <= M (1-x)^(2-g) / (2-g)``.
    Requires ``f(0) = f(1) = 0``.
    """
    f0, f1 = float(prior.density(0.0)), float(prior.density(1.0))
    if abs(f0) > boundary_tol or abs(f1) > boundary_tol:
        raise PreconditionError(f"density must vanish at 0 and 1, got f(0)={f0}, f(1)={f1}")
    grid = np.linspace(0.0, 1.0, 100) if grid is None else check_unit_interval(grid, "grid")
    m = m_constant(prior, gamma)
    if not math.isfinite(m):
        raise PreconditionError("weighted seminorm is infinite for this gamma")
    dens = np.asarray(prior.density(grid))
    cdf = np.asarray(prior.cdf(grid))
    slack = 1e-14
    p = 2.0 - gamma
    return TailBoundReport(
        gamma=float(gamma),
        m=m,
        density_left=bool(np.all(dens <= m * grid ** (1.0 - gamma) + slack)),
        density_right=bool(np.all(dens <= m * (1.0 - grid) ** (1.0 - gamma) + slack)),
        cdf_left=bool(np.all(cdf <= m * grid ** p / p + slack)),
        cdf_right=bool(np.all(1.0 - cdf <= m * (1.0 - grid) ** p / p + slack)),
    )


def _second_difference(prior, x, w):
    if isinstance(prior, PolyDensity):
        # exact for polynomials: 2 * sum_j F^(2j)(x) w^(2j) / (2j)!
        cdf_poly = prior.poly.integ(lbnd=0.0)
        out = np.zeros_like(x)
        for order in range(2, cdf_poly.degree() + 1, 2):
            out += 2.0 * cdf_poly.deriv(order)(x) * w ** order / math.factorial(order)
        return out
    direct = prior.cdf(x + w) - 2.0 * prior.cdf(x) + prior.cdf(x - w)
    # tiny offsets: the difference quotient is swamped by rounding, use f'(x) w^2
    tiny = w <= 1e-3 * np.minimum(x, 1.0 - x)
    if np.any(tiny):
        direct = np.where(tiny, prior.derivative(np.where(tiny, x, 0.5)) * w ** 2, direct)
    return direct


def second_difference_sup(prior, gamma: float, samples: int = 10_000, seed: int = 0) -> float:
    """Empirical ``sup x(1-x) |F(x+w) - 2F(x) + F(x-w)| / w^2`` over ``0 < w < x(1-x)``.

    ``(x, w)`` come from a scrambled Halton sequence mapped onto the
    admissible region. ``gamma`` only documents which weighted seminorm the
    value is meant to be compared with.
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    u = qmc.Halton(d=2, scramble=True, seed=seed).random(int(samples))
    x = u[:, 0]
    w = u[:, 1] * x * (1.0 - x)
    keep = (x > 0.0) & (x < 1.0) & (w > 0.0)
    x, w = x[keep], w[keep]
    values = x * (1.0 - x) * np.abs(_second_difference(prior, x, w)) / w ** 2
    return float(np.max(values))
