"""Distances, rate scans and property checks for exchangeable Bernoulli sample means.

Exit codes: 0 when every assertion holds, 1 on an assertion failure,
2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .edgeworth import (
    admissible_xi,
    edgeworth_sup_error,
    evaluate_cf,
)
from .exceptions import ConfigError
from .metrics import METRICS, distance
from .mixture import beta_power_cdf, sample_mean_law, wendel_bounds
from .priors import PolyDensity, prior_from_dict
from .regularity import decompose_polynomial
from .suite import SuiteConfig, SuiteResult, load_config, rate_scan, run_suite, write_reports

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _emit(obj):
    print(json.dumps(obj, indent=2, default=_plain))


def _plain(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _parse_prior(text):
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--prior is not valid JSON: {exc}") from exc
    try:
        return prior_from_dict(spec)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"invalid prior: {exc}") from exc


def _parse_coeffs(text):
    text = text.strip()
    try:
        if text.startswith("["):
            values = json.loads(text)
        else:
            values = [float(v) for v in text.replace(",", " ").split()]
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot parse coefficients {text!r}") from exc
    if not values:
        raise UsageError("no coefficients given")
    return tuple(float(v) for v in values)


def cmd_distance(args):
    prior = _parse_prior(args.prior)
    try:
        law = sample_mean_law(prior, args.n)
    except (ValueError, OverflowError) as exc:
        raise UsageError(str(exc)) from exc
    _emit(distance(law, prior, args.metric).to_dict())
    return EXIT_OK


def _config_from_args(args):
    config = load_config(args.config) if args.config else SuiteConfig.default()
    overrides = {}
    if args.output_dir is not None:
        overrides["output_dir"] = args.output_dir
    if args.jobs is not None:
        overrides["n_jobs"] = args.jobs
    if overrides:
        params = {name: getattr(config, name) for name in config.__dataclass_fields__}
        params.update(overrides)
        config = SuiteConfig(**params)
    return config


def cmd_rate_scan(args):
    config = _config_from_args(args)
    if not config.scans:
        raise ConfigError("the config defines no scans")
    scans = rate_scan(config)
    if config.output_dir is not None:
        write_reports(SuiteResult([], scans, config.output_dir), config, None)
    _emit({"scans": [s.to_dict() for s in scans]})
    return EXIT_OK if all(s.passed for s in scans) else EXIT_FAIL


def cmd_wendel_check(args):
    alpha = args.alpha
    if not 0.0 < alpha < 1.0:
        raise UsageError(f"--alpha must lie in (0, 1), got {alpha}")
    if args.nmax < 1:
        raise UsageError("--nmax must be positive")
    xs = (np.arange(args.points) + 0.5) / args.points
    violations = []
    worst_gap = math.inf
    for n in range(1, args.nmax + 1):
        value = beta_power_cdf(alpha, n, xs)
        lower, upper = wendel_bounds(alpha, n, xs)
        worst_gap = min(worst_gap, float(np.min(value - lower)), float(np.min(upper - value)))
        for x in xs[(value < lower) | (value > upper)]:
            violations.append({"n": n, "x": float(x)})
    _emit({"alpha": alpha, "nmax": args.nmax, "points": args.nmax * args.points,
           "violations": len(violations), "min_margin": worst_gap, "examples": violations[:20]})
    return EXIT_OK if not violations else EXIT_FAIL


def cmd_edgeworth(args):
    try:
        limit = admissible_xi(args.n, args.theta, args.delta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    xis = np.linspace(0.0, limit, args.points + 1)[1:]
    evals = [evaluate_cf(args.n, args.theta, float(xi), args.delta) for xi in xis]
    _emit({
        "n": args.n, "theta": args.theta, "delta": args.delta, "admissible_xi": limit,
        "cf": [{"xi": ev.point, "abs_error": ev.abs_error, "bound_scale": ev.bound_scale,
                "ratio": ev.abs_error / ev.bound_scale} for ev in evals],
        "lattice_sup_error": edgeworth_sup_error(args.n, args.theta),
    })
    return EXIT_OK


def cmd_decompose(args):
    try:
        f = PolyDensity(_parse_coeffs(args.coeffs))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    dec = decompose_polynomial(f)
    checks = dec.check()
    out = dec.to_dict()
    out["checks"] = checks
    _emit(out)
    return EXIT_OK if all(checks.values()) else EXIT_FAIL


def cmd_suite(args):
    config = _config_from_args(args)
    progress = None if args.quiet else (lambda line: print(line, file=sys.stderr, flush=True))
    result = run_suite(config, progress=progress)
    _emit({"passed": result.passed, "failures": result.failures,
           "output_dir": config.output_dir})
    return result.exit_code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="definetti", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("distance", help="distance between mu_n and the prior")
    p.add_argument("--prior", required=True, help='JSON, e.g. \'{"kind": "beta", "a": 2, "b": 3}\'')
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--metric", choices=METRICS, default="K")
    p.set_defaults(func=cmd_distance)

    for name, func, text in (("rate-scan", cmd_rate_scan, "log-log rate scans from a config"),
                             ("suite", cmd_suite, "all property checks and rate scans")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="JSON config file (default: built-in suite)")
        p.add_argument("--output-dir", help="directory for summary.json and CSV tables")
        p.add_argument("--jobs", type=int, help="worker threads (default: all cores)")
        if name == "suite":
            p.add_argument("--quiet", action="store_true", help="no progress lines on stderr")
        p.set_defaults(func=func)

    p = sub.add_parser("wendel-check", help="Wendel envelopes for the Beta(alpha, 1) prior")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--points", type=int, default=50, help="x points per n")
    p.set_defaults(func=cmd_wendel_check)

    p = sub.add_parser("edgeworth", help="characteristic-function and lattice expansion errors")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--points", type=int, default=20, help="xi points in the admissible range")
    p.set_defaults(func=cmd_edgeworth)

    p = sub.add_parser("decompose", help="decompose a polynomial density")
    p.add_argument("--coeffs", required=True, help="monomial coefficients, e.g. '0,6,-6'")
    p.set_defaults(func=cmd_decompose)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
