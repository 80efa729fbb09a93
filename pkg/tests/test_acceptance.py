"""Acceptance criteria, each at its stated tolerance.

Every test logs exactly one PASS/FAIL line (printed in the terminal summary)
before asserting, so a failing criterion still reports its numbers.
"""

import math
import time

import numpy as np
import pytest

from definetti import (
    Beta,
    Cantor,
    Discrete,
    admissible_xi,
    beta_power_cdf,
    cf_error_ratio,
    decompose_polynomial,
    edgeworth_sup_error,
    kolmogorov,
    law_cdf,
    levy,
    polya_sample,
    prior_from_dict,
    sample_mean_law,
    smoothing_cdf,
    wasserstein,
    wendel_bounds,
)
from definetti.edgeworth import evaluate_cf
from definetti.rates import distance_table, fit_loglog
from definetti.suite import DEFAULT_N_GRID, DUAL_PATH_PRIORS, random_polynomial_density

GRID = list(DEFAULT_N_GRID)          # 2^4 .. 2^12
FIT_NS = [2 ** j for j in range(6, 13)]
PANEL = [Beta(1, 1), Beta(2, 3), Beta(0.5, 0.5), Discrete(((0.5, 1.0),)), Cantor(30)]


def _slope(prior):
    table = distance_table(prior, FIT_NS, ("K",), n_jobs=1)
    return fit_loglog([(r.n, r.value) for r in table["K"]]).slope


@pytest.fixture(scope="module")
def panel_tables():
    return [(p, distance_table(p, list(range(1, 16)) + GRID, ("K", "W", "L"), n_jobs=1)) for p in PANEL]


def test_criterion_01_beta_alpha_one_exponents(acceptance_log):
    start = time.perf_counter()
    cases = [(a, -a, 0.08) for a in (0.25, 0.5, 0.75)] + [(a, -1.0, 0.10) for a in (1.0, 1.5, 3.0)]
    parts, ok = [], True
    for a, expected, tol in cases:
        slope = _slope(Beta(a, 1.0))
        ok &= abs(slope - expected) <= tol
        parts.append(f"a={a:g}: {slope:.4f} (want {expected:g}±{tol})")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 120.0
    assert acceptance_log(1, "Beta(a,1) d_K slopes", ok, "; ".join(parts) + f"; {elapsed:.1f}s")


def _dense_sup(n):
    prior = Beta(1, 1)
    law = sample_mean_law(prior, n)
    k = np.arange(n + 1) / n
    xs = np.unique(np.clip(np.concatenate([
        (k[:, None] + np.array([0.0, -1e-13, 1e-13])).ravel(),
        np.linspace(0.0, 1.0, 200 * n + 1)]), 0.0, 1.0))
    return float(np.max(np.abs(law.cdf(xs) - xs)))


def test_criterion_02_uniform_closed_form(acceptance_log):
    errors = [abs(kolmogorov(sample_mean_law(Beta(1, 1), n), Beta(1, 1)).value - 1 / (n + 1))
              for n in range(1, 65)]
    oracle = max(abs(_dense_sup(n) - 1 / (n + 1)) for n in range(1, 65))
    ok = max(errors) <= 1e-12 and oracle <= 1e-9
    assert acceptance_log(2, "d_K(mu_n, U) = 1/(n+1), n=1..64", ok,
                          f"max error {max(errors):.2e} (tol 1e-12); dense-grid oracle gap {oracle:.2e}")


def test_criterion_03_wendel_envelopes(acceptance_log):
    xs = (np.arange(50) + 0.5) / 50
    ns = np.unique(np.rint(np.linspace(1, 256, 50)).astype(int))
    assert ns.size == 50
    violations, margin = 0, math.inf
    for alpha in (0.1, 0.5, 0.9):
        for n in ns:
            value = beta_power_cdf(alpha, int(n), xs)
            lower, upper = wendel_bounds(alpha, int(n), xs)
            violations += int(np.sum((value < lower) | (value > upper)))
            margin = min(margin, float(np.min(value - lower)), float(np.min(upper - value)))
    assert acceptance_log(3, "Wendel envelopes on 50x50 grid", violations == 0,
                          f"{violations} violations over {3 * 50 * 50} points; min margin {margin:.3e}")


def test_criterion_04_wasserstein_sandwich(acceptance_log, panel_tables):
    violations, total = [], 0
    for prior, table in panel_tables:
        for rep in table["W"]:
            total += 1
            if not rep.within_envelope(1e-12):
                violations.append((str(prior), rep.n))
    assert acceptance_log(4, "C1/n <= d_W <= sqrt(C1/n)", not violations,
                          f"{len(violations)} violations over {total} (prior, n) pairs {violations[:3]}")


def test_criterion_05_metric_ordering(acceptance_log, panel_tables):
    worst, total = -math.inf, 0
    for prior, table in panel_tables:
        for rk, rw, rl in zip(table["K"], table["W"], table["L"]):
            total += 1
            worst = max(worst, rw.value - rk.value, rl.value - rk.value)
    # a few extra pairs away from the panel
    for prior in (Beta(0.3, 4.0), Discrete(((0.1, 0.3), (0.8, 0.7)))):
        for n in (1, 5, 77, 500):
            law = sample_mean_law(prior, n)
            dk = kolmogorov(law, prior).value
            worst = max(worst, wasserstein(law, prior).value - dk, levy(law, prior).value - dk)
            total += 1
    assert acceptance_log(5, "d_W <= d_K and d_L <= d_K", worst <= 1e-9,
                          f"max excess {worst:.3e} over {total} pairs (tol 1e-9)")


def test_criterion_06_beta_threshold(acceptance_log):
    cases = [((1, 1), -1.0, 0.10), ((1.5, 2), -1.0, 0.10), ((2, 3), -1.0, 0.10),
             ((0.5, 2), -0.5, 0.08), ((0.75, 3), -0.75, 0.08)]
    parts, ok = [], True
    for (a, b), expected, tol in cases:
        slope = _slope(Beta(a, b))
        ok &= abs(slope - expected) <= tol
        parts.append(f"({a:g},{b:g}): {slope:.4f} (want {expected:g}±{tol})")
    assert acceptance_log(6, "Beta(a,b) rate threshold", ok, "; ".join(parts))


def test_criterion_07_cantor_holder_bound(acceptance_log):
    gamma = math.log(2) / math.log(3)
    prior = Cantor(30)
    table = distance_table(prior, GRID, ("K",), n_jobs=1)["K"]
    scaled = [r.n ** (gamma / 2) * r.value for r in table]
    ratio = max(scaled) / scaled[0]
    slope = fit_loglog([(r.n, r.value) for r in table][2:]).slope
    assert acceptance_log(7, "Cantor n^(gamma/2) d_K bounded", ratio <= 3.0,
                          f"max/first {ratio:.3f} (limit 3); observed slope {slope:.4f} vs -gamma/2 "
                          f"{-gamma / 2:.4f}")


def test_criterion_08_dual_path(acceptance_log):
    xs = (np.arange(50) + 0.5) / 50
    worst, count = 0.0, 0
    for spec in DUAL_PATH_PRIORS:
        prior = prior_from_dict(spec)
        for n in range(1, 65):
            direct = law_cdf(sample_mean_law(prior, n), xs)
            for x, d in zip(xs, direct):
                worst = max(worst, abs(d - smoothing_cdf(prior, n, float(x))))
                count += 1
    assert acceptance_log(8, "law_cdf vs smoothing_cdf", worst <= 1e-9,
                          f"max |diff| {worst:.2e} over {count} points, {len(DUAL_PATH_PRIORS)} priors")


def test_criterion_09_decomposition(acceptance_log):
    rng = np.random.default_rng(0)
    failed, degrees = [], []
    for i in range(20):
        f = random_polynomial_density(rng, max_degree=8)
        degrees.append(len(f.coeffs) - 1)
        results = decompose_polynomial(f).check(slack=1e-8)
        assert {k.split(":")[0] for k in results} >= {"i", "ii", "iii", "iv"}
        failed += [(i, k) for k, ok in results.items() if not ok]
    ok = not failed and max(degrees) <= 8
    assert acceptance_log(9, "polynomial decomposition inequalities", ok,
                          f"{len(failed)} failed inequalities on 20 densities, degrees {sorted(degrees)}")


def test_criterion_10_cf_expansion(acceptance_log):
    ns = [16 * 4 ** j for j in range(5)]
    thetas = [round(0.1 * i, 10) for i in range(1, 10)]
    cell_sups, pooled = [], []
    for n in ns:
        for theta in thetas:
            for delta in (0.25, 0.5, 0.75):
                limit = admissible_xi(n, theta, delta)
                ratios = [cf_error_ratio(n, theta, float(xi), delta)
                          for xi in np.linspace(limit / 20, limit, 20)]
                cell_sups.append(max(ratios))
                pooled += ratios
    spread = max(cell_sups) / float(np.median(cell_sups))
    pooled_spread = max(pooled) / float(np.median(pooled))
    factors = [evaluate_cf(n, 0.5, 1.0, 0.5).abs_error / evaluate_cf(4 * n, 0.5, 1.0, 0.5).abs_error
               for n in ns[:-1]]
    ok = spread <= 10.0 and all(2.2 <= f <= 6.0 for f in factors)
    assert acceptance_log(10, "CF expansion error ratio and n->4n scaling", ok,
                          f"sup-over-xi max/median {spread:.2f} (limit 10; pooled {pooled_spread:.1f}); "
                          f"reduction factors {', '.join(f'{f:.3f}' for f in factors)} "
                          f"(accept [2.2, 6]; all in [3, 6]: {all(3 <= f <= 6 for f in factors)})")


def test_criterion_11_lattice_correction(acceptance_log):
    scaled = [n * t * (1 - t) * edgeworth_sup_error(n, t)
              for n in (16 * 4 ** j for j in range(5)) for t in (round(0.1 * i, 10) for i in range(1, 10))]
    ratio = max(scaled) / min(scaled)
    assert acceptance_log(11, "n theta(1-theta) sup|B_n - G_n| spread", ratio <= 10.0,
                          f"max/min {ratio:.3f} (limit 10); range [{min(scaled):.4f}, {max(scaled):.4f}]")


def test_criterion_12_polya_monte_carlo(acceptance_log):
    draws, n = 1_000_000, 8
    counts = np.bincount(polya_sample(1.0, 1.0, n, seed=2024, size=draws).sum(axis=1), minlength=n + 1)
    p = sample_mean_law(Beta(1, 1), n).p
    z = np.abs(counts / draws - p) / np.sqrt(p * (1 - p) / draws)
    assert acceptance_log(12, "Polya urn vs sample-mean law", bool(np.all(z <= 4.0)),
                          f"max z {z.max():.3f} over {n + 1} atoms (limit 4)")
