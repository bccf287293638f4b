"""Monte Carlo orchestration: experiment plans, empirical CDFs,
Kolmogorov-Smirnov statistics, variance diagnostics, and persistence.

Reproducibility contract: every trial's generator is keyed by
(spec.seed, trial index) only, and results are reduced keyed by trial
index, so outputs are byte-identical for any worker count.
"""

from __future__ import annotations

import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import kolmogorov

from . import __version__
from .errors import DomainError
from .ensembles import EnsembleSpec, build_matrix, trial_rng
from .limitlaws import DistributionCurve, curve_value
from .momentlab import moment_power, moment_scale
from .phase import REGIMES, classify, phase_quantities
from .spectra import eigenvalues, rescale


@dataclass(frozen=True)
class ExperimentPlan:
    """One Monte Carlo campaign over a fixed ensemble."""

    spec: EnsembleSpec
    trials: int
    k_top: int = 1
    regime_override: str | None = None
    output_path: str | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        if self.trials < 100:
            raise DomainError("need at least 100 trials")
        if not 1 <= self.k_top <= min(8, self.spec.n):
            raise DomainError("k_top must be in 1..min(8, n)")
        if self.regime_override is not None and self.regime_override not in REGIMES:
            raise DomainError(f"unknown regime {self.regime_override!r}")
        if self.workers < 1:
            raise DomainError("workers must be positive")


@dataclass(frozen=True)
class EmpiricalCDF:
    """Right-continuous empirical distribution of one statistic."""

    sorted_samples: tuple[float, ...]

    def value(self, x) -> np.ndarray:
        """(# samples <= x) / n, vectorized over x."""
        arr = np.asarray(self.sorted_samples)
        return np.searchsorted(arr, np.asarray(x, dtype=float), side="right") / arr.size


@dataclass(frozen=True)
class KsResult:
    distance: float
    n_samples: int
    p_value: float


def _trial_row(spec: EnsembleSpec, regime: str, k_top: int, trial: int):
    draw = build_matrix(spec, trial_rng(spec.seed, trial))
    sample = eigenvalues(draw)
    xi = rescale(sample, spec, regime, k_top).xi
    return trial, sample.lambdas[:k_top], xi


def run_experiment(plan: ExperimentPlan) -> list[EmpiricalCDF]:
    """Execute the campaign; one empirical CDF per top eigenvalue index.

    Rows are persisted (CSV plus JSON manifest) when the plan carries an
    output path; whatever completed is flushed even on interrupt.
    """
    spec = plan.spec
    regime = plan.regime_override or classify(spec).regime
    rows: dict[int, tuple[tuple[float, ...], tuple[float, ...]]] = {}
    try:
        if plan.workers == 1:
            for t in range(plan.trials):
                t_idx, lams, xi = _trial_row(spec, regime, plan.k_top, t)
                rows[t_idx] = (lams, xi)
        else:
            with ThreadPoolExecutor(max_workers=plan.workers) as pool:
                futures = [
                    pool.submit(_trial_row, spec, regime, plan.k_top, t)
                    for t in range(plan.trials)
                ]
                for fut in futures:
                    t_idx, lams, xi = fut.result()
                    rows[t_idx] = (lams, xi)
    finally:
        if plan.output_path is not None:
            save_results(plan, regime, rows)
    cdfs = []
    for i in range(plan.k_top):
        xs = sorted(rows[t][1][i] for t in rows)
        cdfs.append(EmpiricalCDF(sorted_samples=tuple(xs)))
    return cdfs


def _plan_manifest(plan: ExperimentPlan, regime: str) -> dict:
    spec = plan.spec
    q = phase_quantities(spec)
    return {
        "plan": {
            "n": spec.n,
            "p": spec.p,
            "spikes": list(spec.spikes),
            "field": spec.field,
            "entry_law": {"kind": spec.entry_law.kind, "sigma": spec.entry_law.sigma},
            "seed": spec.seed,
            "trials": plan.trials,
            "k_top": plan.k_top,
            "regime": regime,
        },
        "phase": {
            "u_plus": q.u_plus,
            "u_minus": q.u_minus,
            "w_c": q.w_c,
            "tau": q.tau,
            "sigma_pi": q.sigma_pi,
            "rho_n": q.rho_n,
            "sigma_n": q.sigma_n,
        },
        "versions": {
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "spikelab": __version__,
        },
    }


def save_results(plan: ExperimentPlan, regime: str, rows: dict) -> None:
    """Write results.csv and manifest.json under the plan's output path."""
    os.makedirs(plan.output_path, exist_ok=True)
    k = plan.k_top
    header = (
        ["trial"]
        + [f"lambda_{i + 1}" for i in range(k)]
        + [f"xi_{i + 1}" for i in range(k)]
    )
    with open(os.path.join(plan.output_path, "results.csv"), "w", encoding="ascii") as fh:
        fh.write(",".join(header) + "\n")
        for t in sorted(rows):
            lams, xi = rows[t]
            cells = [str(t)] + [repr(v) for v in lams] + [repr(v) for v in xi]
            fh.write(",".join(cells) + "\n")
    manifest = _plan_manifest(plan, regime)
    with open(os.path.join(plan.output_path, "manifest.json"), "w", encoding="ascii") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_results(path: str) -> tuple[dict, np.ndarray]:
    """Read back a persisted campaign: (manifest, row array)."""
    with open(os.path.join(path, "manifest.json"), encoding="ascii") as fh:
        manifest = json.load(fh)
    data = np.loadtxt(os.path.join(path, "results.csv"), delimiter=",", skiprows=1, ndmin=2)
    return manifest, data


def ks_distance(emp: EmpiricalCDF, law) -> KsResult:
    """Exact sup-distance between an empirical CDF and a reference law.

    The law is a DistributionCurve or a callable CDF.  Both one-sided
    gaps are taken at every jump; the p-value uses the asymptotic
    Kolmogorov distribution.
    """
    xs = np.asarray(emp.sorted_samples)
    n = xs.size
    if n < 100:
        raise DomainError("need at least 100 samples")
    if isinstance(law, DistributionCurve):
        f = curve_value(law, xs)
    else:
        f = np.asarray([float(law(x)) for x in xs])
    hi = np.arange(1, n + 1) / n
    lo = np.arange(0, n) / n
    dist = float(max(np.max(hi - f), np.max(f - lo)))
    return KsResult(
        distance=dist,
        n_samples=n,
        p_value=float(kolmogorov(math.sqrt(n) * dist)),
    )


def ks_two_sample(a: EmpiricalCDF, b: EmpiricalCDF) -> KsResult:
    """Two-sample sup-distance with the asymptotic p-value."""
    xa = np.asarray(a.sorted_samples)
    xb = np.asarray(b.sorted_samples)
    if xa.size < 100 or xb.size < 100:
        raise DomainError("need at least 100 samples on both sides")
    grid = np.concatenate([xa, xb])
    fa = np.searchsorted(xa, grid, side="right") / xa.size
    fb = np.searchsorted(xb, grid, side="right") / xb.size
    dist = float(np.max(np.abs(fa - fb)))
    n_eff = xa.size * xb.size / (xa.size + xb.size)
    return KsResult(
        distance=dist,
        n_samples=int(min(xa.size, xb.size)),
        p_value=float(kolmogorov(math.sqrt(n_eff) * dist)),
    )


def _variance_with_error(vals: np.ndarray) -> tuple[float, float]:
    """Sample variance and its standard error via the fourth moment."""
    n = vals.size
    var = float(vals.var(ddof=1))
    m4 = float(np.mean((vals - vals.mean()) ** 4))
    se2 = (m4 - var**2 * (n - 3) / (n - 1)) / n
    return var, math.sqrt(max(se2, 0.0))


@dataclass(frozen=True)
class VarianceRow:
    n: int
    power: int
    var_gaussian: float
    se_gaussian: float
    var_matched: float
    se_matched: float
    z_gap: float


@dataclass(frozen=True)
class VarianceReport:
    """Variance of Tr(V/scale)^(s_N) across sizes and entry laws."""

    rows: tuple[VarianceRow, ...]
    trend_z: float


def _trace_power_values(spec: EnsembleSpec, power: int, scale: float, trials: int) -> np.ndarray:
    vals = np.empty(trials)
    for t in range(trials):
        draw = build_matrix(spec, trial_rng(spec.seed, t))
        lams = np.array(eigenvalues(draw).lambdas)
        vals[t] = np.sum((lams / scale) ** power)
    return vals


def variance_check(plan: ExperimentPlan, c: float) -> VarianceReport:
    """Compare Var Tr(V/scale)^(s_N) over n in {50, 100, 200} and between
    the gaussian and the fourth-moment-matched discrete law."""
    base = plan.spec
    gamma = base.p / base.n
    rows = []
    for n in (50, 100, 200):
        p = round(n * gamma)
        spec_g = EnsembleSpec(
            n=n, p=p, spikes=base.spikes, field=base.field,
            entry_law=type(base.entry_law)("gaussian", base.entry_law.sigma),
            seed=base.seed,
        )
        spec_m = EnsembleSpec(
            n=n, p=p, spikes=base.spikes, field=base.field,
            entry_law=type(base.entry_law)("three_point_match", base.entry_law.sigma),
            seed=base.seed + 1,
        )
        power = moment_power(spec_g, c)
        scale = moment_scale(spec_g)
        vg, sg = _variance_with_error(_trace_power_values(spec_g, power, scale, plan.trials))
        vm, sm = _variance_with_error(_trace_power_values(spec_m, power, scale, plan.trials))
        z = abs(vg - vm) / math.sqrt(sg**2 + sm**2)
        rows.append(VarianceRow(n, power, vg, sg, vm, sm, z))
    trend_z = (rows[-1].var_gaussian - rows[0].var_gaussian) / math.sqrt(
        rows[-1].se_gaussian ** 2 + rows[0].se_gaussian ** 2
    )
    return VarianceReport(rows=tuple(rows), trend_z=trend_z)
