"""Tests for the Monte Carlo harness: KS statistics, campaigns, persistence."""

import math

import numpy as np
import pytest
from scipy.special import ndtr

from spikelab.ensembles import EnsembleSpec, EntryLaw
from spikelab.errors import DomainError
from spikelab.harness import (
    EmpiricalCDF,
    ExperimentPlan,
    ks_distance,
    ks_two_sample,
    load_results,
    run_experiment,
    variance_check,
)


def white_spec(n, seed):
    return EnsembleSpec(
        n=n, p=n, spikes=(), field="complex", entry_law=EntryLaw("gaussian"), seed=seed
    )


def test_empirical_cdf_is_right_continuous():
    emp = EmpiricalCDF(sorted_samples=(0.0, 0.0, 1.0))
    assert float(emp.value(-1.0)) == 0.0
    assert float(emp.value(0.0)) == pytest.approx(2.0 / 3.0)
    assert float(emp.value(0.5)) == pytest.approx(2.0 / 3.0)
    assert float(emp.value(1.0)) == 1.0
    np.testing.assert_allclose(emp.value([0.0, 1.0]), [2.0 / 3.0, 1.0])


def test_ks_distance_point_mass_vs_normal():
    emp = EmpiricalCDF(sorted_samples=(0.0,) * 128)
    result = ks_distance(emp, ndtr)
    assert result.distance == pytest.approx(0.5, abs=1e-12)
    assert result.n_samples == 128


def test_ks_distance_against_own_interpolant():
    rng = np.random.default_rng(8201)
    xs = tuple(sorted(rng.standard_normal(200)))
    emp = EmpiricalCDF(sorted_samples=xs)
    result = ks_distance(emp, lambda x: emp.value(x))
    assert result.distance <= 1.0 / 200 + 1e-12


def test_ks_distance_normal_sample_sanity():
    rng = np.random.default_rng(8202)
    emp = EmpiricalCDF(sorted_samples=tuple(sorted(rng.standard_normal(1000))))
    result = ks_distance(emp, ndtr)
    assert result.distance < 0.06
    assert 0.01 < result.p_value <= 1.0


def test_ks_distance_needs_hundred_samples():
    with pytest.raises(DomainError):
        ks_distance(EmpiricalCDF(sorted_samples=(0.0,) * 99), ndtr)


def test_ks_two_sample_disjoint_supports():
    a = EmpiricalCDF(sorted_samples=(0.0,) * 100)
    b = EmpiricalCDF(sorted_samples=(1.0,) * 100)
    result = ks_two_sample(a, b)
    assert result.distance == 1.0
    assert result.p_value < 1e-10


def test_ks_two_sample_identical_samples():
    rng = np.random.default_rng(8203)
    xs = tuple(sorted(rng.standard_normal(150)))
    result = ks_two_sample(EmpiricalCDF(xs), EmpiricalCDF(xs))
    assert result.distance == 0.0
    assert result.p_value == pytest.approx(1.0)


def test_ks_two_sample_needs_hundred_samples():
    a = EmpiricalCDF(sorted_samples=(0.0,) * 99)
    b = EmpiricalCDF(sorted_samples=(0.0,) * 100)
    with pytest.raises(DomainError):
        ks_two_sample(a, b)


def test_plan_validation():
    spec = white_spec(4, 1)
    with pytest.raises(DomainError):
        ExperimentPlan(spec=spec, trials=99)
    with pytest.raises(DomainError):
        ExperimentPlan(spec=spec, trials=100, k_top=0)
    with pytest.raises(DomainError):
        ExperimentPlan(spec=spec, trials=100, k_top=5)
    with pytest.raises(DomainError):
        ExperimentPlan(spec=spec, trials=100, regime_override="sideways")
    with pytest.raises(DomainError):
        ExperimentPlan(spec=spec, trials=100, workers=0)


def test_degenerate_campaign_completes_and_round_trips(tmp_path):
    # Minimal trial count on a 4 x 4 ensemble still produces a coherent
    # persisted campaign.
    out = tmp_path / "runs"
    plan = ExperimentPlan(spec=white_spec(4, 77), trials=100, k_top=2, output_path=str(out))
    cdfs = run_experiment(plan)
    assert len(cdfs) == 2
    assert all(len(c.sorted_samples) == 100 for c in cdfs)

    manifest, data = load_results(str(out))
    assert manifest["plan"]["n"] == 4
    assert manifest["plan"]["trials"] == 100
    assert manifest["plan"]["regime"] == "subcritical"
    assert data.shape == (100, 5)
    assert np.all(data[:, 1] >= data[:, 2])
    np.testing.assert_allclose(sorted(data[:, 3]), cdfs[0].sorted_samples, rtol=0, atol=0)
    np.testing.assert_allclose(sorted(data[:, 4]), cdfs[1].sorted_samples, rtol=0, atol=0)


def test_workers_do_not_change_results(tmp_path):
    spec = white_spec(4, 78)
    paths = []
    for workers in (1, 4):
        out = tmp_path / f"w{workers}"
        plan = ExperimentPlan(
            spec=spec, trials=120, k_top=1, output_path=str(out), workers=workers
        )
        run_experiment(plan)
        paths.append(out)
    assert (paths[0] / "results.csv").read_bytes() == (paths[1] / "results.csv").read_bytes()
    assert (paths[0] / "manifest.json").read_bytes() == (paths[1] / "manifest.json").read_bytes()


@pytest.fixture(scope="module")
def variance_pair():
    spec = white_spec(100, 31)
    small = variance_check(ExperimentPlan(spec=spec, trials=200), 1.0)
    large = variance_check(ExperimentPlan(spec=spec, trials=400), 1.0)
    return small, large


def test_variance_check_white_is_flat(variance_pair):
    report, _ = variance_pair
    assert tuple(row.n for row in report.rows) == (50, 100, 200)
    assert tuple(row.power for row in report.rows) == (14, 22, 34)
    for row in report.rows:
        assert row.var_gaussian > 0 and row.var_matched > 0
        assert row.z_gap < 4.0
    assert abs(report.trend_z) < 4.0


def test_variance_check_errors_shrink_with_trials(variance_pair):
    # Doubling the campaign should shrink each standard error roughly by
    # sqrt(2); individual rows are noisy, so test the geometric mean.
    small, large = variance_pair
    ratios = [
        s.se_gaussian / l.se_gaussian for s, l in zip(small.rows, large.rows)
    ]
    geomean = math.exp(sum(math.log(r) for r in ratios) / len(ratios))
    assert all(0.7 < r < 2.8 for r in ratios)
    assert 1.1 < geomean < 1.8
