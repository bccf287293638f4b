"""Command-line interface.

Subcommands: ``theory`` (closed-form constants and regime for a spec),
``simulate`` (Monte Carlo campaign with persistence), ``limitlaw``
(tabulate an edge law as CSV), ``combinat`` (count tables and weighted
series as CSV), ``moment`` (exact trace moment as JSON), and ``verify``
(run acceptance criteria).

Every option may come from a ``key = value`` config file passed with
``--config``; explicit flags win over the file.  Exit status is 0 on
success, 1 when a verification criterion fails, 2 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from .acceptance import CRITERIA, run_criterion
from .dyck import count_with_returns, narayana
from .ensembles import EnsembleSpec, EntryLaw
from .errors import SpikeLabError
from .genfun import coeffs_a
from .harness import ExperimentPlan, run_experiment
from .limitlaws import FredholmConfig, export_curve_csv, tabulate
from .momentlab import MomentRequest, exact_trace_moment
from .phase import classify, phase_quantities


def _read_config(path: str) -> dict[str, str]:
    """Parse a flat ``key = value`` file; '#' starts a comment."""
    out: dict[str, str] = {}
    with open(path, encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def _spikes_tuple(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(tok) for tok in text.split(","))


def _merged(args: argparse.Namespace, key: str, cast, default=None, required=False):
    """Flag value if given, else config value, else default."""
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    config = getattr(args, "_config", {})
    if key in config:
        return cast(config[key])
    if required:
        raise ValueError(f"missing required option --{key}")
    return default


def _build_spec(args: argparse.Namespace, need_seed: bool) -> EnsembleSpec:
    seed = _merged(args, "seed", int, default=None, required=need_seed)
    return EnsembleSpec(
        n=_merged(args, "n", int, required=True),
        p=_merged(args, "p", int, required=True),
        spikes=_merged(args, "spikes", _spikes_tuple, default=()),
        field=_merged(args, "field", str, default="complex"),
        entry_law=EntryLaw(
            kind=_merged(args, "law", str, default="gaussian"),
            sigma=_merged(args, "sigma", float, default=1.0),
        ),
        seed=0 if seed is None else seed,
    )


def _add_spec_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--n", type=int, help="number of rows")
    sub.add_argument("--p", type=int, help="number of columns (p >= n)")
    sub.add_argument("--spikes", type=_spikes_tuple,
                     help="comma-separated spike values, largest first")
    sub.add_argument("--field", choices=("real", "complex"))
    sub.add_argument("--law", dest="law",
                     choices=("gaussian", "three_point_match", "rademacher"))
    sub.add_argument("--sigma", type=float, help="entry scale (default 1)")
    sub.add_argument("--seed", type=int, help="base RNG seed")


def _cmd_theory(args: argparse.Namespace) -> int:
    spec = _build_spec(args, need_seed=False)
    q = phase_quantities(spec)
    report = classify(spec)
    payload = {
        "n": spec.n,
        "p": spec.p,
        "gamma_n": spec.gamma_n,
        "spikes": list(spec.spikes),
        "u_plus": q.u_plus,
        "u_minus": q.u_minus,
        "w_c": q.w_c,
        "tau": q.tau,
        "sigma_pi": q.sigma_pi,
        "rho_n": q.rho_n,
        "sigma_n": q.sigma_n,
        "regimes": list(report.regimes),
        "multiplicity": report.k,
        "leading_law": report.law,
    }
    print(json.dumps(payload, indent=2))
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    spec = _build_spec(args, need_seed=True)
    plan = ExperimentPlan(
        spec=spec,
        trials=_merged(args, "trials", int, required=True),
        k_top=_merged(args, "k_top", int, default=1),
        regime_override=_merged(args, "regime", str, default=None),
        output_path=_merged(args, "out", str, default=None),
        workers=_merged(args, "workers", int, default=1),
    )
    cdfs = run_experiment(plan)
    summary = {
        "trials": plan.trials,
        "regime": plan.regime_override or classify(spec).regime,
        "xi_mean": [float(np.mean(c.sorted_samples)) for c in cdfs],
        "xi_sd": [float(np.std(c.sorted_samples, ddof=1)) for c in cdfs],
        "output_path": plan.output_path,
    }
    print(json.dumps(summary, indent=2))
    return 0


def _cmd_limitlaw(args: argparse.Namespace) -> int:
    lo = _merged(args, "lo", float, default=-10.0)
    hi = _merged(args, "hi", float, default=6.0)
    points = _merged(args, "points", int, default=161)
    order = _merged(args, "quad_order", int, default=None)
    cfg = FredholmConfig(quad_order=order) if order else None
    curve = tabulate(args.lawname, np.linspace(lo, hi, points), cfg)
    out = _merged(args, "out", str, default=None)
    if out:
        export_curve_csv(curve, out)
    else:
        sys.stdout.write("x,cdf\n")
        for x, c in zip(curve.grid, curve.cdf):
            sys.stdout.write(f"{x:.10g},{c:.10g}\n")
    return 0


def _cmd_combinat(args: argparse.Namespace) -> int:
    write = sys.stdout.write
    if args.kind == "counts":
        n = _merged(args, "n", int, required=True)
        write("n,k,m,count\n")
        for k in range(1, n + 1):
            for m in range(1, n + 1):
                count = count_with_returns(n, k, m)
                if count:
                    write(f"{n},{k},{m},{count}\n")
        return 0
    if args.kind == "narayana":
        n = _merged(args, "n", int, required=True)
        write("n,k,count\n")
        for k in range(1, n + 1):
            write(f"{n},{k},{narayana(n, k)}\n")
        return 0
    pi1 = _merged(args, "pi1", Fraction, required=True)
    gamma = _merged(args, "gamma", Fraction, default=Fraction(1))
    sigma = _merged(args, "sigma", float, default=1.0)
    order = _merged(args, "order", int, required=True)
    coeffs = coeffs_a(pi1, gamma, sigma, order)
    write("n,a_numerator,a_denominator,a_prime,ratio\n")
    for n, value in enumerate(coeffs.a):
        prev = coeffs.a_prime[n - 1] if n else 0.0
        ratio = f"{coeffs.a_prime[n] / prev:.10g}" if prev else ""
        write(f"{n},{value.numerator},{value.denominator},"
              f"{coeffs.a_prime[n]:.10g},{ratio}\n")
    return 0


def _cmd_moment(args: argparse.Namespace) -> int:
    spec = _build_spec(args, need_seed=False)
    req = MomentRequest(
        spec=spec,
        power=_merged(args, "power", int, required=True),
        method=_merged(args, "method", str, default="exact_enumeration"),
    )
    report = exact_trace_moment(req)
    value = report.value
    payload = {
        "power": req.power,
        "method": req.method,
        "value": str(value) if isinstance(value, Fraction) else value,
        "value_float": float(value),
        "std_error": report.std_error,
        "path_terms": None
        if report.path_terms is None
        else {f"{ones},{cols}": str(term)
              for (ones, cols), term in sorted(report.path_terms.items())},
    }
    print(json.dumps(payload, indent=2))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.criterion == "all":
        selectors: list[int | str] = sorted(CRITERIA)
    else:
        selectors = [args.criterion]
    all_passed = True
    for selector in selectors:
        result = run_criterion(selector)
        all_passed &= result.passed
        print(result.summary())
        if args.verbose:
            for line in result.details:
                print("   ", line)
    return 0 if all_passed else 1


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spikelab",
        description="Spiked sample covariance laboratory: theory constants, "
        "Monte Carlo campaigns, edge laws, exact combinatorics.",
    )
    parser.add_argument("--config", help="key = value file with default options")
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("theory", help="print closed-form constants and regime")
    _add_spec_options(sub)
    sub.set_defaults(handler=_cmd_theory)

    sub = commands.add_parser("simulate", help="run a Monte Carlo campaign")
    _add_spec_options(sub)
    sub.add_argument("--trials", type=int)
    sub.add_argument("--k-top", dest="k_top", type=int)
    sub.add_argument("--regime", choices=("supercritical", "critical", "subcritical"))
    sub.add_argument("--workers", type=int)
    sub.add_argument("--out", help="directory for results.csv and manifest.json")
    sub.set_defaults(handler=_cmd_simulate)

    sub = commands.add_parser("limitlaw", help="tabulate an edge law as CSV")
    sub.add_argument("lawname",
                     choices=("tw_gue", "tw_goe", "painleve_f2", "bbp_f1"))
    sub.add_argument("--lo", type=float)
    sub.add_argument("--hi", type=float)
    sub.add_argument("--points", type=int)
    sub.add_argument("--quad-order", dest="quad_order", type=int)
    sub.add_argument("--out")
    sub.set_defaults(handler=_cmd_limitlaw)

    sub = commands.add_parser("combinat", help="emit count tables or weighted series")
    sub.add_argument("kind", choices=("counts", "narayana", "series"))
    sub.add_argument("--n", type=int, help="half-length for count tables")
    sub.add_argument("--pi1", type=Fraction, help="spike value, e.g. 3 or 3/2")
    sub.add_argument("--gamma", type=Fraction, help="aspect ratio p/n")
    sub.add_argument("--sigma", type=float)
    sub.add_argument("--order", type=int, help="highest series order")
    sub.set_defaults(handler=_cmd_combinat)

    sub = commands.add_parser("moment", help="exact trace moment as JSON")
    _add_spec_options(sub)
    sub.add_argument("--power", type=int)
    sub.add_argument("--method",
                     choices=("exact_enumeration", "symbolic_gaussian", "monte_carlo"))
    sub.set_defaults(handler=_cmd_moment)

    sub = commands.add_parser("verify", help="run acceptance criteria")
    sub.add_argument("criterion",
                     help="criterion number, name, or 'all'")
    sub.add_argument("--verbose", action="store_true", help="print detail lines")
    sub.set_defaults(handler=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        args._config = _read_config(args.config) if args.config else {}
        return args.handler(args)
    except (SpikeLabError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
