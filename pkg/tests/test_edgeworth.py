import csv
import io
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import ndtr

from definetti import (
    BernoulliMoments,
    PreconditionError,
    admissible_xi,
    cf_error_ratio,
    edgeworth_cf,
    edgeworth_sup_error,
    exact_cf,
    exact_standardized_cdf,
    lattice_cdf_g,
    sawtooth,
)
from definetti.edgeworth import evaluate_cf, sweep_to_csv


def oracle_cf(n, theta, xi):
    """Binomial sum sum_k C(n,k) t^k (1-t)^(n-k) exp(i xi (k - n t) / s) at 40 digits."""
    with mp.workdps(40):
        t = mp.mpf(theta)
        s = mp.sqrt(n * t * (1 - t))
        total = mp.mpc(0)
        for k in range(n + 1):
            total += mp.binomial(n, k) * t ** k * (1 - t) ** (n - k) * mp.expj(xi * (k - n * t) / s)
        return complex(total)


def oracle_sup_error(n, theta, points=200_001):
    """Dense grid plus points a hair on either side of every lattice jump."""
    s = math.sqrt(n * theta * (1 - theta))
    lo, hi = (-n * theta - 3) / s, (n * (1 - theta) + 3) / s
    jumps = (np.arange(-3, n + 4) - n * theta) / s
    near = (jumps[:, None] + np.array([-1e-10, 1e-10])).ravel()
    y = np.concatenate([np.linspace(lo, hi, points), near])
    return float(np.max(np.abs(exact_standardized_cdf(n, theta, y) - lattice_cdf_g(n, theta, y))))


# -- characteristic functions ----------------------------------------------------------

def test_single_trial_modulus():
    xi = np.linspace(-5, 5, 41)
    np.testing.assert_allclose(np.abs(exact_cf(1, 0.5, xi)), np.abs(np.cos(xi)), atol=1e-15)


@pytest.mark.parametrize("n,theta", [(1, 0.5), (7, 0.2), (40, 0.9), (200, 0.03)])
def test_exact_cf_matches_binomial_sum(n, theta):
    for xi in (0.1, 0.9, 2.5, 7.0):
        assert abs(exact_cf(n, theta, xi) - oracle_cf(n, theta, xi)) <= 1e-12


@given(st.integers(1, 500), st.floats(0.01, 0.99), st.floats(-20, 20))
@settings(max_examples=60, deadline=None)
def test_exact_cf_properties(n, theta, xi):
    value = exact_cf(n, theta, xi)
    assert abs(value) <= 1 + 1e-12
    assert exact_cf(n, theta, -xi) == pytest.approx(value.conjugate(), abs=1e-12)
    assert exact_cf(n, theta, 0.0) == 1


def test_symmetric_case_is_real():
    xi = np.linspace(0, 6, 25)
    assert np.max(np.abs(exact_cf(33, 0.5, xi).imag)) <= 1e-15
    assert np.all(edgeworth_cf(33, 0.5, xi).imag == 0.0)


def test_edgeworth_cf_example():
    n, theta, xi = 100, 0.3, 1.2
    mom = BernoulliMoments(theta)
    assert mom.alpha3 == pytest.approx(0.21 * 0.4)
    skew = mom.alpha3 / (6 * 10 * mom.sigma ** 3)
    expected = math.exp(-0.72) * complex(1, -skew * xi ** 3)
    assert edgeworth_cf(n, theta, xi) == pytest.approx(expected, abs=1e-15)
    assert abs(exact_cf(n, theta, xi) - expected) < 0.01


def test_abs_moment_by_definition():
    for theta in (0.1, 0.5, 0.77):
        for delta in (0.25, 0.5, 0.9):
            direct = (1 - theta) * theta ** (3 + delta) + theta * (1 - theta) ** (3 + delta)
            assert BernoulliMoments(theta).abs_moment(delta) == pytest.approx(direct, rel=1e-14)


def test_admissible_range():
    # at theta = 1/2 the moment ratio is exactly 1
    for n in (1, 16, 100, 10_000):
        assert admissible_xi(n, 0.5, 0.5) == pytest.approx(math.sqrt(n) / 4, rel=1e-14)
    assert admissible_xi(400, 0.2, 0.5) == pytest.approx(2 * admissible_xi(100, 0.2, 0.5), rel=1e-14)
    with pytest.raises(ValueError):
        admissible_xi(10, 0.5, 1.5)
    with pytest.raises(ValueError):
        admissible_xi(10, 1.0, 0.5)


def test_ratio_outside_range_raises():
    limit = admissible_xi(64, 0.5, 0.5)
    with pytest.raises(PreconditionError):
        cf_error_ratio(64, 0.5, limit * 1.01, 0.5)
    assert cf_error_ratio(64, 0.5, 0.0, 0.5) == 0.0


@pytest.mark.parametrize("theta", [0.1, 0.3, 0.5, 0.8])
@pytest.mark.parametrize("delta", [0.25, 0.75])
def test_error_ratio_is_bounded_across_n(theta, delta):
    sups = []
    for n in (64, 256, 1024):
        limit = admissible_xi(n, theta, delta)
        ratios = [cf_error_ratio(n, theta, xi, delta) for xi in np.linspace(limit / 20, limit, 20)]
        assert all(math.isfinite(r) and r >= 0 for r in ratios)
        sups.append(max(ratios))
    assert max(sups) / min(sups) < 4.0


def test_error_decreases_with_n():
    # at theta = 1/2 the skew term vanishes; the error falls by about n^-1
    e1 = evaluate_cf(256, 0.5, 1.0, 0.5).abs_error
    e2 = evaluate_cf(1024, 0.5, 1.0, 0.5).abs_error
    assert 3.0 <= e1 / e2 <= 6.0


# -- lattice expansion -----------------------------------------------------------------

def test_sawtooth_values():
    assert sawtooth(0.0) == 0.5
    assert sawtooth(0.25) == 0.25
    assert sawtooth(0.5) == 0.0
    assert sawtooth(0.999) == pytest.approx(-0.499)
    assert sawtooth(-0.25) == pytest.approx(-0.25)
    x = np.linspace(-3, 3, 61) + 0.123
    np.testing.assert_allclose(sawtooth(x + 1), sawtooth(x), atol=1e-14)


def test_lattice_cdf_examples():
    assert lattice_cdf_g(100, 0.5, 0.0) == pytest.approx(0.5 + 0.1 / math.sqrt(2 * math.pi), abs=1e-15)
    assert lattice_cdf_g(100, 0.5, 0.0) == pytest.approx(0.5399, abs=1e-4)
    assert lattice_cdf_g(100, 0.3, 10.0) == pytest.approx(1.0, abs=1e-8)
    assert lattice_cdf_g(100, 0.3, -10.0) == pytest.approx(0.0, abs=1e-8)


def test_exact_standardized_cdf_examples():
    assert exact_standardized_cdf(4, 0.5, 0.0) == pytest.approx(11 / 16)
    assert exact_standardized_cdf(1, 0.5, 0.0) == pytest.approx(0.5)
    assert exact_standardized_cdf(1, 0.5, -1.01) == 0.0


@pytest.mark.parametrize("n,theta", [(10, 0.5), (50, 0.2), (200, 0.07), (333, 0.61)])
def test_sup_error_matches_dense_grid(n, theta):
    exact = edgeworth_sup_error(n, theta)
    grid = oracle_sup_error(n, theta)
    # the lattice-point limits are what the grid approaches from either side
    assert grid <= exact + 1e-12
    assert exact - grid <= 1e-6 * exact + 1e-12


def test_sup_error_worse_near_boundary():
    assert edgeworth_sup_error(1024, 0.05) > edgeworth_sup_error(1024, 0.5)


def test_sup_error_scales_like_one_over_n_sigma2():
    scaled = []
    for n in (64, 256, 1024, 4096):
        for theta in (0.1, 0.3, 0.5, 0.7):
            scaled.append(n * theta * (1 - theta) * edgeworth_sup_error(n, theta))
    assert max(scaled) / min(scaled) < 8.0


def test_g_close_to_normal():
    y = np.linspace(-4, 4, 801)
    for n in (25, 100, 400):
        gap = np.max(np.abs(lattice_cdf_g(n, 0.3, y) - ndtr(y)))
        assert gap <= 1.0 / math.sqrt(n * 0.21)


def test_sweep_csv():
    evals = [evaluate_cf(64, 0.3, xi, 0.5) for xi in (0.5, 1.0)]
    rows = list(csv.reader(io.StringIO(sweep_to_csv(evals))))
    assert rows[0] == ["n", "theta", "point", "exact_re", "exact_im",
                       "approx_re", "approx_im", "abs_error", "bound_scale"]
    assert len(rows) == 3
    assert float(rows[2][2]) == 1.0
    assert float(rows[1][7]) == evals[0].abs_error
