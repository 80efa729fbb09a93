import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from definetti import (
    Beta,
    Cantor,
    Discrete,
    DistanceReport,
    PolyDensity,
    distance,
    kolmogorov,
    levy,
    sample_mean_law,
    wasserstein,
)
from definetti.mixture import complement_law


def dense_grid(n, per_cell=400):
    """Points hugging both sides of every cell boundary plus a uniform fill."""
    k = np.arange(n + 1) / n
    eps = np.array([0.0, 1e-13, -1e-13, 1e-9, -1e-9])
    fill = np.linspace(0.0, 1.0, per_cell * n + 1)
    return np.clip(np.unique(np.concatenate([(k[:, None] + eps).ravel(), fill])), 0.0, 1.0)


def oracle_kolmogorov(law, prior):
    xs = dense_grid(law.n)
    return float(np.max(np.abs(law.cdf(xs) - prior.cdf(xs))))


def oracle_wasserstein(law, prior, points=2_000_001):
    xs = np.linspace(0.0, 1.0, points)
    diff = np.abs(law.cdf(xs) - prior.cdf(xs))
    return float(np.trapezoid(diff, xs))


def oracle_levy(law, prior, xs=None):
    """Bisection with feasibility on a dense grid, independent of the cell structure."""
    xs = dense_grid(law.n, per_cell=200) if xs is None else xs
    fn = law.cdf(xs)

    def ok(eps):
        hi = prior.cdf_ext(xs + eps) + eps
        lo = prior.cdf_ext(xs - eps, left=True) - eps
        return np.all(fn <= hi + 1e-15) and np.all(lo <= fn + 1e-15)

    a, b = 0.0, 1.0
    for _ in range(50):
        mid = 0.5 * (a + b)
        a, b = (a, mid) if ok(mid) else (mid, b)
    return b


# -- Kolmogorov ------------------------------------------------------------------------

def test_kolmogorov_examples():
    prior = Beta(1, 1)
    assert kolmogorov(sample_mean_law(prior, 4), prior).value == pytest.approx(0.2, abs=1e-15)
    point = Discrete(((0.5, 1.0),))
    assert kolmogorov(sample_mean_law(point, 2), point).value == pytest.approx(0.25, abs=1e-15)


@pytest.mark.parametrize("n", range(1, 65))
def test_uniform_closed_form_against_dense_grid(n):
    prior = Beta(1, 1)
    law = sample_mean_law(prior, n)
    value = kolmogorov(law, prior).value
    assert abs(value - 1.0 / (n + 1)) <= 1e-12
    assert abs(oracle_kolmogorov(law, prior) - 1.0 / (n + 1)) <= 1e-8


@pytest.mark.parametrize("prior", [Beta(0.5, 0.5), Beta(2, 3), Beta(0.25, 1),
                                   PolyDensity((0.0, 0.0, 3.0)),
                                   Discrete(((0.0, 0.1), (0.33, 0.6), (0.8, 0.3))), Cantor(30)])
@pytest.mark.parametrize("n", [1, 3, 16, 50])
def test_kolmogorov_matches_dense_grid(prior, n):
    law = sample_mean_law(prior, n)
    exact = kolmogorov(law, prior).value
    approx = oracle_kolmogorov(law, prior)
    # the grid can only see less than the true supremum
    assert approx <= exact + 1e-12
    assert exact - approx <= 1e-6 if prior.absolutely_continuous else exact - approx <= 1e-12


def test_kolmogorov_sees_atoms_inside_cells():
    # an atom strictly inside a cell creates the largest gap on its left side
    prior = Discrete(((0.3, 0.5), (0.9, 0.5)))
    law = sample_mean_law(prior, 2)
    ref = max(abs(law.p[0] - 0.0), abs(law.p[0] - 0.5), abs(law.p[0] + law.p[1] - 0.5),
              abs(law.p[0] + law.p[1] - 1.0))
    assert kolmogorov(law, prior).value == pytest.approx(ref, abs=1e-15)


# -- Wasserstein -----------------------------------------------------------------------

def test_wasserstein_examples():
    prior = Beta(1, 1)
    rep = wasserstein(sample_mean_law(prior, 1), prior)
    assert rep.value == pytest.approx(0.25, abs=1e-15)
    assert rep.lower == pytest.approx(1.0 / 6.0)
    assert rep.upper == pytest.approx(math.sqrt(1.0 / 6.0))
    at_zero = Discrete(((0.0, 1.0),))
    assert wasserstein(sample_mean_law(at_zero, 9), at_zero).value == 0.0
    b23 = Beta(2, 3)
    rep = wasserstein(sample_mean_law(b23, 64), b23)
    assert 0.2 / 64 < rep.value < math.sqrt(0.2 / 64)


@pytest.mark.parametrize("prior", [Beta(0.5, 0.5), Beta(2, 3), PolyDensity((0.0, 6.0, -6.0)),
                                   Discrete(((0.1, 0.4), (0.55, 0.6))), Cantor(30)])
@pytest.mark.parametrize("n", [1, 4, 25])
def test_wasserstein_matches_trapezoid(prior, n):
    law = sample_mean_law(prior, n)
    assert wasserstein(law, prior).value == pytest.approx(oracle_wasserstein(law, prior), abs=2e-6)


# -- Levy ----------------------------------------------------------------------------

def test_levy_examples():
    point = Discrete(((0.5, 1.0),))
    law = sample_mean_law(point, 2)
    assert levy(law, point).value <= 0.25 + 1e-12
    uni = Beta(1, 1)
    assert levy(sample_mean_law(uni, 4), uni).value <= 0.2 + 1e-12


def test_levy_identical_laws_is_zero():
    law = sample_mean_law(Beta(2, 2), 5)
    prior = Discrete(tuple((k / 5, p) for k, p in enumerate(law.p)))
    assert levy(law, prior).value == 0.0


@pytest.mark.parametrize("prior", [Beta(1, 1), Beta(0.5, 0.5), Discrete(((0.5, 1.0),)),
                                   Discrete(((0.2, 0.3), (0.7, 0.7))), Cantor(30)])
@pytest.mark.parametrize("n", [1, 2, 7, 20])
def test_levy_matches_grid_bisection(prior, n):
    law = sample_mean_law(prior, n)
    assert levy(law, prior).value == pytest.approx(oracle_levy(law, prior), abs=1e-7)


# -- ordering, sandwich, symmetry -----------------------------------------------------

PANEL = [Beta(1, 1), Beta(2, 3), Beta(0.5, 0.5), Discrete(((0.5, 1.0),)), Cantor(30)]


@pytest.mark.parametrize("prior", PANEL, ids=str)
def test_ordering_and_sandwich(prior):
    for n in (1, 2, 3, 10, 64, 1000):
        law = sample_mean_law(prior, n)
        dk = kolmogorov(law, prior).value
        dw = wasserstein(law, prior)
        dl = levy(law, prior).value
        assert dw.value <= dk + 1e-9
        assert dl <= dk + 1e-9
        assert dw.within_envelope(1e-12)


@given(st.floats(0.2, 6.0), st.floats(0.2, 6.0), st.integers(1, 300))
@settings(max_examples=40, deadline=None)
def test_ordering_property(a, b, n):
    prior = Beta(a, b)
    law = sample_mean_law(prior, n)
    dk = kolmogorov(law, prior).value
    assert wasserstein(law, prior).value <= dk + 1e-9
    assert levy(law, prior, d_k=dk).value <= dk + 1e-9


@pytest.mark.parametrize("a,b", [(0.5, 2.0), (2.0, 3.0), (1.0, 4.5)])
def test_beta_reflection_symmetry(a, b):
    for n in (3, 40, 333):
        law = sample_mean_law(Beta(a, b), n)
        mirrored = complement_law(sample_mean_law(Beta(b, a), n))
        for metric in ("K", "W", "L"):
            assert distance(law, Beta(a, b), metric).value == pytest.approx(
                distance(sample_mean_law(Beta(b, a), n), Beta(b, a), metric).value, abs=1e-10)
        np.testing.assert_allclose(mirrored.p, law.p, atol=1e-12)


@pytest.mark.parametrize("prior", [Beta(2, 3), Beta(1, 1), PolyDensity((0.0, 6.0, -6.0))])
def test_kolmogorov_over_root_wasserstein_bounded(prior):
    # bounded densities: d_K <= C sqrt(d_W)
    ratios = []
    for n in (2 ** j for j in range(2, 12)):
        law = sample_mean_law(prior, n)
        ratios.append(kolmogorov(law, prior).value / math.sqrt(wasserstein(law, prior).value))
    assert max(ratios) <= 2.0 * ratios[0]


# -- reports ----------------------------------------------------------------------------

def test_report_json_and_envelope():
    rep = DistanceReport("W", 4, 0.1, 0.05, 0.2)
    data = json.loads(rep.to_json())
    assert data == {"metric": "W", "n": 4, "value": 0.1, "lower": 0.05, "upper": 0.2}
    assert rep.envelope == (0.05, 0.2)
    assert DistanceReport("K", 4, 0.3).envelope is None
    assert not DistanceReport("W", 4, 0.3, 0.05, 0.2).within_envelope()
    with pytest.raises(ValueError):
        DistanceReport("X", 1, 0.0)


def test_distance_dispatch():
    prior = Beta(1, 1)
    law = sample_mean_law(prior, 4)
    assert distance(law, prior, "K").metric == "K"
    with pytest.raises(ValueError):
        distance(law, prior, "TV")
