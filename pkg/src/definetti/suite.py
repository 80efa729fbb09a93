"""Rate scans and property checks with JSON/CSV reports.

A suite is described by ``SuiteConfig`` (usually loaded from JSON). It runs
a list of registered property checks and a list of rate scans, writes
``summary.json`` plus one CSV table per scan, and condenses everything
into an exit status: 0 when every assertion holds, 1 otherwise.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial

from .edgeworth import admissible_xi, cf_error_ratio, edgeworth_sup_error, evaluate_cf
from .exceptions import ConfigError
from .metrics import METRICS, kolmogorov
from .mixture import (
    beta_power_cdf,
    law_cdf,
    polya_sample,
    sample_mean_law,
    smoothing_cdf,
    wendel_bounds,
)
from .priors import Beta, PolyDensity, Prior, prior_from_dict
from .rates import distance_table, fit_loglog
from .regularity import decompose_polynomial

__all__ = [
    "DEFAULT_N_GRID",
    "Tolerances",
    "ScanSpec",
    "SuiteConfig",
    "CheckResult",
    "ScanResult",
    "SuiteResult",
    "rate_scan",
    "run_suite",
    "load_config",
    "write_reports",
    "random_polynomial_density",
    "CHECKS",
]

DEFAULT_N_GRID = tuple(2 ** j for j in range(4, 13))

PANEL = (
    {"kind": "beta", "a": 1.0, "b": 1.0},
    {"kind": "beta", "a": 2.0, "b": 3.0},
    {"kind": "beta", "a": 0.5, "b": 0.5},
    {"kind": "discrete", "atoms": [[0.5, 1.0]]},
    {"kind": "cantor", "depth": 30},
)

DUAL_PATH_PRIORS = (
    {"kind": "beta", "a": 1.0, "b": 1.0},
    {"kind": "beta", "a": 2.0, "b": 3.0},
    {"kind": "beta", "a": 0.5, "b": 0.5},
    {"kind": "beta", "a": 0.5, "b": 1.0},
    {"kind": "poly", "coeffs": [0.0, 6.0, -6.0]},
    {"kind": "poly", "coeffs": [0.0, 0.0, 3.0]},
    {"kind": "discrete", "atoms": [[0.5, 1.0]]},
    {"kind": "discrete", "atoms": [[0.0, 0.25], [0.3, 0.5], [1.0, 0.25]]},
    {"kind": "cantor", "depth": 30},
)


def _scan(name, prior, slope=None, holder=None):
    return {"name": name, "prior": prior, "metrics": ["K"], "expected_slope": slope,
            "holder_exponent": holder}


DEFAULT_SCANS = (
    _scan("beta_0.25_1", {"kind": "beta", "a": 0.25, "b": 1.0}, -0.25),
    _scan("beta_0.5_1", {"kind": "beta", "a": 0.5, "b": 1.0}, -0.5),
    _scan("beta_0.75_1", {"kind": "beta", "a": 0.75, "b": 1.0}, -0.75),
    _scan("beta_1_1", {"kind": "beta", "a": 1.0, "b": 1.0}, -1.0),
    _scan("beta_1.5_1", {"kind": "beta", "a": 1.5, "b": 1.0}, -1.0),
    _scan("beta_3_1", {"kind": "beta", "a": 3.0, "b": 1.0}, -1.0),
    _scan("beta_1.5_2", {"kind": "beta", "a": 1.5, "b": 2.0}, -1.0),
    _scan("beta_2_3", {"kind": "beta", "a": 2.0, "b": 3.0}, -1.0),
    _scan("beta_0.5_2", {"kind": "beta", "a": 0.5, "b": 2.0}, -0.5),
    _scan("beta_0.75_3", {"kind": "beta", "a": 0.75, "b": 3.0}, -0.75),
    _scan("cantor", {"kind": "cantor", "depth": 30}, None, math.log(2.0) / math.log(3.0)),
)


def default_slope_tol(expected):
    # fractional exponents are cleaner than the 1/n ones, which carry boundary-layer terms
    return 0.10 if expected <= -1.0 + 1e-12 else 0.08


@dataclass(frozen=True)
class Tolerances:
    ordering: float = 1e-9
    sandwich: float = 1e-12
    dual_path: float = 1e-9
    closed_form: float = 1e-12
    decomposition: float = 1e-8
    cf_ratio_spread: float = 10.0
    cf_scaling: tuple = (2.2, 6.0)
    lattice_spread: float = 10.0
    polya_z: float = 4.0
    holder_factor: float = 3.0

    @classmethod
    def from_dict(cls, data):
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown tolerance keys: {sorted(unknown)}")
        data = dict(data)
        if "cf_scaling" in data:
            data["cf_scaling"] = tuple(data["cf_scaling"])
        return cls(**data)


@dataclass(frozen=True)
class ScanSpec:
    name: str
    prior: Prior
    metrics: tuple = ("K",)
    expected_slope: Optional[float] = None
    slope_tol: Optional[float] = None
    holder_exponent: Optional[float] = None

    @classmethod
    def from_dict(cls, data, index=0):
        if "prior" not in data:
            raise ConfigError(f"scan {index} has no 'prior'")
        try:
            prior = data["prior"] if isinstance(data["prior"], Prior) else prior_from_dict(data["prior"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"scan {index}: invalid prior spec ({exc})") from exc
        metrics = tuple(data.get("metrics", ("K",)))
        if not metrics:
            raise ConfigError(f"scan {index}: the metric set is empty")
        bad = [m for m in metrics if m not in METRICS]
        if bad:
            raise ConfigError(f"scan {index}: unknown metrics {bad}; expected a subset of {METRICS}")
        if len(set(metrics)) != len(metrics):
            raise ConfigError(f"scan {index}: duplicate metrics {list(metrics)}")
        slope = data.get("expected_slope")
        tol = data.get("slope_tol")
        if slope is not None and tol is None:
            tol = default_slope_tol(float(slope))
        holder = data.get("holder_exponent")
        return cls(str(data.get("name", f"scan{index}")), prior, metrics,
                   None if slope is None else float(slope),
                   None if tol is None else float(tol),
                   None if holder is None else float(holder))

    def to_dict(self):
        return {"name": self.name, "prior": self.prior.to_dict(), "metrics": list(self.metrics),
                "expected_slope": self.expected_slope, "slope_tol": self.slope_tol,
                "holder_exponent": self.holder_exponent}


@dataclass(frozen=True)
class SuiteConfig:
    """Everything a suite run needs.

    ``checks`` names the registered property checks to run (see ``CHECKS``).
    ``n_jobs=None`` means one worker per available core.
    """

    scans: tuple = ()
    n_grid: tuple = DEFAULT_N_GRID
    checks: tuple = ()
    output_dir: Optional[str] = None
    seed: int = 0
    n_jobs: Optional[int] = None
    n_skip: int = 2
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        grid = tuple(int(n) for n in self.n_grid)
        if len(grid) < 5:
            raise ConfigError(f"the n grid needs at least 5 points, got {len(grid)}")
        if any(n < 1 for n in grid):
            raise ConfigError("the n grid must contain positive integers")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("the n grid must be strictly increasing")
        if len(grid) - self.n_skip < 4:
            raise ConfigError(f"n_skip={self.n_skip} leaves fewer than 4 points for the fit")
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise ConfigError(f"unknown checks {unknown}; available: {sorted(CHECKS)}")
        names = [s.name for s in self.scans]
        if len(set(names)) != len(names):
            raise ConfigError(f"scan names must be unique, got {names}")
        if self.n_jobs is not None and int(self.n_jobs) < 1:
            raise ConfigError("n_jobs must be a positive integer or null")
        object.__setattr__(self, "n_grid", grid)
        object.__setattr__(self, "checks", tuple(self.checks))
        object.__setattr__(self, "scans", tuple(self.scans))

    @classmethod
    def default(cls, **overrides):
        scans = tuple(ScanSpec.from_dict(s, i) for i, s in enumerate(DEFAULT_SCANS))
        params = {"scans": scans, "checks": tuple(CHECKS)}
        params.update(overrides)
        return cls(**params)

    @classmethod
    def from_dict(cls, data):
        """Build from a JSON-style mapping.

        Either ``"scans": [...]`` or the single-scan shorthand with top-level
        ``"prior"``, ``"metrics"``, ``"expected_slope"`` and ``"slope_tol"``.
        Missing ``"checks"`` means all registered checks; missing scans and
        prior means the default scan list.
        """
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        data = dict(data)
        single_keys = ("prior", "metrics", "expected_slope", "slope_tol", "holder_exponent", "name")
        if "scans" in data and "prior" in data:
            raise ConfigError("give either 'scans' or a single 'prior', not both")
        if "prior" in data:
            single = {k: data.pop(k) for k in single_keys if k in data}
            single.setdefault("name", "scan")
            raw_scans = [single]
        elif "metrics" in data:
            raise ConfigError("'metrics' at top level requires a 'prior'")
        else:
            raw_scans = data.pop("scans", list(DEFAULT_SCANS))
        if not isinstance(raw_scans, list):
            raise ConfigError("'scans' must be a list")
        scans = tuple(ScanSpec.from_dict(s, i) for i, s in enumerate(raw_scans))
        known = {"n_grid", "checks", "output_dir", "seed", "n_jobs", "n_skip", "tolerances"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        params = {"scans": scans, "checks": tuple(data.get("checks", tuple(CHECKS)))}
        for key in ("n_grid", "output_dir", "seed", "n_jobs", "n_skip"):
            if key in data:
                params[key] = data[key]
        if "tolerances" in data:
            params["tolerances"] = Tolerances.from_dict(data["tolerances"])
        try:
            return cls(**params)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc


def load_config(path) -> SuiteConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return SuiteConfig.from_dict(data)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def to_dict(self):
        return {"name": self.name, "passed": bool(self.passed), "detail": self.detail,
                "failures": self.failures[:50], "n_failures": len(self.failures)}


@dataclass
class ScanResult:
    spec: ScanSpec
    ns: tuple
    reports: dict
    fits: dict
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_dict(self):
        return {"spec": self.spec.to_dict(), "ns": list(self.ns),
                "fits": {m: f.to_dict() for m, f in self.fits.items()},
                "checks": [c.to_dict() for c in self.checks], "passed": self.passed}

    def csv_rows(self, n_skip):
        rows = []
        for metric in self.spec.metrics:
            for i, rep in enumerate(self.reports[metric]):
                rows.append([metric, rep.n, repr(rep.value),
                             "" if rep.lower is None else repr(rep.lower),
                             "" if rep.upper is None else repr(rep.upper),
                             int(i >= n_skip)])
        return rows


@dataclass
class SuiteResult:
    checks: list
    scans: list
    output_dir: Optional[str] = None

    @property
    def failures(self):
        out = [c.name for c in self.checks if not c.passed]
        for scan in self.scans:
            out += [f"{scan.spec.name}:{c.name}" for c in scan.checks if not c.passed]
        return out

    @property
    def passed(self):
        return not self.failures

    @property
    def exit_code(self):
        return 0 if self.passed else 1

    def to_dict(self):
        return {"passed": self.passed, "failures": self.failures,
                "checks": [c.to_dict() for c in self.checks],
                "scans": [s.to_dict() for s in self.scans]}


# ---------------------------------------------------------------------------
# Rate scans
# ---------------------------------------------------------------------------

def _scan_one(spec: ScanSpec, grid, n_skip, n_jobs, tol: Tolerances) -> ScanResult:
    reports = distance_table(spec.prior, grid, spec.metrics, n_jobs)
    fits, checks = {}, []
    for metric in spec.metrics:
        values = [r.value for r in reports[metric]]
        fit = fit_loglog(list(zip(grid[n_skip:], values[n_skip:])))
        fits[metric] = fit
        if spec.expected_slope is not None:
            gap = abs(fit.slope - spec.expected_slope)
            checks.append(CheckResult(f"slope_{metric}", gap <= spec.slope_tol,
                                      {"slope": fit.slope, "expected": spec.expected_slope,
                                       "tolerance": spec.slope_tol, "r_squared": fit.r_squared}))
        # envelope bounds hold for every n, including the ones left out of the fit
        bad = [r.to_dict() for r in reports[metric] if not r.within_envelope(tol.sandwich)]
        if any(r.envelope is not None for r in reports[metric]):
            checks.append(CheckResult(f"envelope_{metric}", not bad, {"slack": tol.sandwich}, bad))
        if spec.holder_exponent is not None:
            scaled = [n ** (spec.holder_exponent / 2.0) * v for n, v in zip(grid, values)]
            ratio = max(scaled) / scaled[0]
            checks.append(CheckResult(f"holder_bound_{metric}", ratio <= tol.holder_factor,
                                      {"scaled": scaled, "max_over_first": ratio,
                                       "factor": tol.holder_factor, "observed_slope": fit.slope}))
    return ScanResult(spec, tuple(grid), reports, fits, checks)


def rate_scan(config: SuiteConfig):
    """Run every scan of ``config``; returns a list of ``ScanResult`` (fits in ``.fits``)."""
    return [_scan_one(spec, config.n_grid, config.n_skip, config.n_jobs, config.tolerances)
            for spec in config.scans]


# ---------------------------------------------------------------------------
# Property checks
# ---------------------------------------------------------------------------

def _panel_tables(config, cache):
    if "panel" not in cache:
        cache["panel"] = [(prior_from_dict(spec), distance_table(prior_from_dict(spec), config.n_grid,
                                                                 METRICS, config.n_jobs))
                          for spec in PANEL]
    return cache["panel"]


def check_metric_ordering(config, cache):
    tol = config.tolerances.ordering
    failures, worst = [], -math.inf
    for prior, table in _panel_tables(config, cache):
        for rk, rw, rl in zip(table["K"], table["W"], table["L"]):
            excess = max(rw.value - rk.value, rl.value - rk.value)
            worst = max(worst, excess)
            if excess > tol:
                failures.append({"prior": str(prior), "n": rk.n, "K": rk.value,
                                 "W": rw.value, "L": rl.value})
    return CheckResult("metric_ordering", not failures, {"max_excess": worst, "tolerance": tol}, failures)


def check_wasserstein_sandwich(config, cache):
    slack = config.tolerances.sandwich
    failures = []
    for prior, table in _panel_tables(config, cache):
        failures += [dict(r.to_dict(), prior=str(prior)) for r in table["W"]
                     if not r.within_envelope(slack)]
    return CheckResult("wasserstein_sandwich", not failures, {"slack": slack}, failures)


def check_closed_form(config, cache):
    tol = config.tolerances.closed_form
    prior = Beta(1.0, 1.0)
    ns = sorted(set(range(1, 65)) | set(config.n_grid))
    worst, failures = 0.0, []
    for n in ns:
        err = abs(kolmogorov(sample_mean_law(prior, n), prior).value - 1.0 / (n + 1.0))
        worst = max(worst, err)
        if err > tol:
            failures.append({"n": n, "error": err})
    return CheckResult("closed_form_uniform", not failures, {"max_error": worst, "tolerance": tol}, failures)


def check_wendel(config, cache):
    xs = (np.arange(50) + 0.5) / 50.0
    ns = np.unique(np.rint(np.linspace(1, 256, 50)).astype(int))
    failures = []
    for alpha in (0.1, 0.5, 0.9):
        for n in ns:
            value = beta_power_cdf(alpha, int(n), xs)
            lower, upper = wendel_bounds(alpha, int(n), xs)
            bad = (value < lower) | (value > upper)
            failures += [{"alpha": alpha, "n": int(n), "x": float(x)} for x in xs[bad]]
    return CheckResult("wendel", not failures, {"points": 3 * len(ns) * len(xs)}, failures)


def check_dual_path(config, cache):
    tol = config.tolerances.dual_path
    xs = (np.arange(50) + 0.5) / 50.0
    worst, failures = 0.0, []
    for spec in DUAL_PATH_PRIORS:
        prior = prior_from_dict(spec)
        for n in range(1, 65):
            law = sample_mean_law(prior, n)
            direct = law_cdf(law, xs)
            for x, d in zip(xs, direct):
                err = abs(d - smoothing_cdf(prior, n, float(x)))
                worst = max(worst, err)
                if err > tol:
                    failures.append({"prior": str(prior), "n": n, "x": float(x), "error": err})
    return CheckResult("dual_path", not failures, {"max_error": worst, "tolerance": tol}, failures)


def random_polynomial_density(rng, max_degree=8) -> PolyDensity:
    """Random density in the Bernstein basis with nonnegative weights, degree <= ``max_degree``."""
    degree = int(rng.integers(1, max_degree + 1))
    weights = rng.random(degree + 1)
    # randomly pin the endpoints to zero so both decomposition branches get exercised
    if rng.random() < 0.3:
        weights[0] = 0.0
    if rng.random() < 0.3 and weights[:-1].any():
        weights[-1] = 0.0
    weights /= weights.sum()
    poly = Polynomial([0.0])
    for j, w in enumerate(weights):
        # each basis element (d+1) C(d,j) t^j (1-t)^(d-j) integrates to 1
        basis = Polynomial([0.0] * j + [1.0]) * Polynomial([1.0, -1.0]) ** (degree - j)
        poly = poly + w * (degree + 1) * math.comb(degree, j) * basis
    coeffs = np.array(poly.coef)
    # pinned endpoints must stay exactly zero after the expansion
    if weights[0] == 0.0:
        coeffs[0] = 0.0
    if weights[-1] == 0.0:
        coeffs[-1] -= math.fsum(coeffs)
    total = math.fsum(c / (i + 1) for i, c in enumerate(coeffs))
    return PolyDensity(tuple(float(c / total) for c in coeffs))


def check_decomposition(config, cache):
    rng = np.random.default_rng(config.seed)
    failures = []
    for i in range(20):
        f = random_polynomial_density(rng)
        results = decompose_polynomial(f).check(slack=config.tolerances.decomposition)
        bad = sorted(name for name, ok in results.items() if not ok)
        if bad:
            failures.append({"index": i, "coeffs": list(f.coeffs), "failed": bad})
    return CheckResult("decomposition", not failures, {"densities": 20}, failures)


EDGEWORTH_NS = tuple(16 * 4 ** j for j in range(5))
EDGEWORTH_THETAS = tuple(round(0.1 * i, 10) for i in range(1, 10))
EDGEWORTH_DELTAS = (0.25, 0.5, 0.75)


def check_edgeworth_ratio(config, cache):
    """Bounded CF error ratio plus the ``n -> 4n`` error reduction at ``theta=0.5, xi=1``.

    The error bound controls ``sup_xi`` of the ratio for each ``(n, theta, delta)``;
    boundedness is judged on those per-cell suprema.
    """
    tol = config.tolerances
    cell_sups, pooled = [], []
    for n in EDGEWORTH_NS:
        for theta in EDGEWORTH_THETAS:
            for delta in EDGEWORTH_DELTAS:
                limit = admissible_xi(n, theta, delta)
                ratios = [cf_error_ratio(n, theta, float(xi), delta)
                          for xi in np.linspace(limit / 20.0, limit, 20)]
                cell_sups.append(max(ratios))
                pooled += ratios
    spread = max(cell_sups) / float(np.median(cell_sups))
    factors = []
    for n in EDGEWORTH_NS[:-1]:
        e1 = evaluate_cf(n, 0.5, 1.0, 0.5).abs_error
        e4 = evaluate_cf(4 * n, 0.5, 1.0, 0.5).abs_error
        factors.append(e1 / e4)
    lo, hi = tol.cf_scaling
    scaling_ok = all(lo <= f <= hi for f in factors)
    detail = {"max_cell_sup": max(cell_sups), "median_cell_sup": float(np.median(cell_sups)),
              "spread": spread, "limit": tol.cf_ratio_spread,
              "pooled_max_over_median": max(pooled) / float(np.median(pooled)),
              "reduction_factors": factors, "reduction_range": [lo, hi]}
    failures = []
    if spread > tol.cf_ratio_spread:
        failures.append({"spread": spread})
    if not scaling_ok:
        failures.append({"reduction_factors": factors})
    return CheckResult("edgeworth_ratio", not failures, detail, failures)


def check_edgeworth_lattice(config, cache):
    scaled = [n * theta * (1.0 - theta) * edgeworth_sup_error(n, theta)
              for n in EDGEWORTH_NS for theta in EDGEWORTH_THETAS]
    ratio = max(scaled) / min(scaled)
    limit = config.tolerances.lattice_spread
    return CheckResult("edgeworth_lattice", ratio <= limit,
                       {"max": max(scaled), "min": min(scaled), "ratio": ratio, "limit": limit})


def check_polya(config, cache, draws=1_000_000, n=8):
    counts = np.bincount(polya_sample(1.0, 1.0, n, seed=config.seed, size=draws).sum(axis=1),
                         minlength=n + 1)
    freq = counts / draws
    p = sample_mean_law(Beta(1.0, 1.0), n).p
    z = np.abs(freq - p) / np.sqrt(p * (1.0 - p) / draws)
    limit = config.tolerances.polya_z
    failures = [{"k": int(k), "z": float(z[k])} for k in np.flatnonzero(z > limit)]
    return CheckResult("polya", not failures, {"max_z": float(z.max()), "limit": limit}, failures)


CHECKS = {
    "metric_ordering": check_metric_ordering,
    "wasserstein_sandwich": check_wasserstein_sandwich,
    "closed_form_uniform": check_closed_form,
    "wendel": check_wendel,
    "dual_path": check_dual_path,
    "decomposition": check_decomposition,
    "edgeworth_ratio": check_edgeworth_ratio,
    "edgeworth_lattice": check_edgeworth_lattice,
    "polya": check_polya,
}


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------

def write_reports(result: SuiteResult, config: SuiteConfig, elapsed):
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    for scan in result.scans:
        with open(out / f"scan_{scan.spec.name}.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["metric", "n", "value", "lower", "upper", "in_fit"])
            writer.writerows(scan.csv_rows(config.n_skip))
    summary = result.to_dict()
    summary["config"] = {"n_grid": list(config.n_grid), "seed": config.seed,
                         "checks": list(config.checks), "n_skip": config.n_skip}
    summary["elapsed_seconds"] = elapsed
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, default=_json_default)
        fh.write("\n")


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def run_suite(config: SuiteConfig, progress=None) -> SuiteResult:
    """Run the configured checks and scans; write reports if ``output_dir`` is set.

    ``progress`` is an optional callable receiving one status line per item.
    """
    start = time.perf_counter()
    cache = {}
    checks = []
    for name in config.checks:
        result = CHECKS[name](config, cache)
        checks.append(result)
        if progress:
            progress(f"{'PASS' if result.passed else 'FAIL'} {name}")
    scans = []
    for spec in config.scans:
        scan = _scan_one(spec, config.n_grid, config.n_skip, config.n_jobs, config.tolerances)
        scans.append(scan)
        if progress:
            slopes = ", ".join(f"{m}={f.slope:.4f}" for m, f in scan.fits.items())
            progress(f"{'PASS' if scan.passed else 'FAIL'} scan {spec.name} ({slopes})")
    result = SuiteResult(checks, scans, config.output_dir)
    if config.output_dir is not None:
        write_reports(result, config, time.perf_counter() - start)
    return result
