"""Entry laws, matrix assembly, determinism, and positive semidefiniteness."""

import math

import numpy as np
import pytest

from spikelab.ensembles import (
    EnsembleSpec,
    EntryLaw,
    build_matrix,
    sample_entry,
    trial_rng,
)
from spikelab.errors import DimensionError, DomainError


def white(n, p, kind="gaussian", field="complex", seed=0, sigma=1.0):
    return EnsembleSpec(n=n, p=p, field=field,
                        entry_law=EntryLaw(kind, sigma), seed=seed)


# ---------------------------------------------------------------------------
# entry laws
# ---------------------------------------------------------------------------


def entry_pool(kind, field, sigma=1.0, n=640, p=640, seed=5):
    spec = EnsembleSpec(n=n, p=p, field=field,
                        entry_law=EntryLaw(kind, sigma), seed=seed)
    return build_matrix(spec, trial_rng(seed, 0)).x.ravel()


def test_three_point_real_support_and_moments():
    xs = entry_pool("three_point_match", "real")
    support = set(np.round(np.unique(xs), 12))
    root3 = round(math.sqrt(3.0), 12)
    assert support <= {-root3, 0.0, root3}
    m2 = np.mean(xs**2)
    m4 = np.mean(xs**4)
    se2 = np.std(xs**2, ddof=1) / math.sqrt(xs.size)
    se4 = np.std(xs**4, ddof=1) / math.sqrt(xs.size)
    assert abs(m2 - 1.0) < 5 * se2
    assert abs(m4 - 3.0) < 5 * se4


def test_rademacher_real_is_sign_variable():
    xs = entry_pool("rademacher", "real")
    assert set(np.unique(xs)) == {-1.0, 1.0}
    assert np.mean(xs**4) == 1.0


def test_gaussian_complex_part_variances():
    xs = entry_pool("gaussian", "complex")
    for part in (xs.real, xs.imag):
        se = np.std(part**2, ddof=1) / math.sqrt(part.size)
        assert abs(np.mean(part**2) - 0.5) < 5 * se


@pytest.mark.parametrize("kind", ["gaussian", "three_point_match", "rademacher"])
@pytest.mark.parametrize("field", ["real", "complex"])
def test_second_and_fourth_moments(kind, field):
    xs = entry_pool(kind, field)
    sq = np.abs(xs) ** 2
    se2 = np.std(sq, ddof=1) / math.sqrt(sq.size)
    assert abs(np.mean(sq) - 1.0) < max(5 * se2, 1e-12)
    if kind != "rademacher" and field == "real":
        se4 = np.std(sq**2, ddof=1) / math.sqrt(sq.size)
        assert abs(np.mean(sq**2) - 3.0) < 5 * se4


def test_sample_entry_matches_matrix_entries():
    # scalar sampler and bulk assembly draw from the same law
    rng = trial_rng(9, 0)
    values = [sample_entry(EntryLaw("rademacher"), "real", rng) for _ in range(50)]
    assert set(np.unique(values)) <= {-1.0, 1.0}
    value = sample_entry(EntryLaw("three_point_match"), "complex", trial_rng(9, 1))
    parts = {round(abs(value.real), 12), round(abs(value.imag), 12)}
    assert parts <= {0.0, round(math.sqrt(1.5), 12)}


# ---------------------------------------------------------------------------
# matrix assembly
# ---------------------------------------------------------------------------


def test_one_by_one_rademacher_is_deterministic():
    spec = white(1, 1, "rademacher", "real")
    draw = build_matrix(spec, trial_rng(0, 0))
    assert draw.v.shape == (1, 1)
    assert draw.v[0, 0] == pytest.approx(1.0, abs=0.0)


def test_matrix_is_self_adjoint_and_psd():
    for field in ("real", "complex"):
        spec = EnsembleSpec(n=6, p=9, spikes=(2.5, 1.5), field=field,
                            entry_law=EntryLaw("gaussian"), seed=3)
        draw = build_matrix(spec, trial_rng(3, 0))
        assert np.array_equal(draw.v, draw.v.conj().T)
        eigs = np.linalg.eigvalsh(draw.v)
        assert eigs.min() >= -1e-10 * eigs.max()


def test_trace_equals_eigenvalue_sum():
    spec = EnsembleSpec(n=8, p=12, spikes=(3.0,), field="complex",
                        entry_law=EntryLaw("three_point_match"), seed=4)
    draw = build_matrix(spec, trial_rng(4, 2))
    trace = float(np.trace(draw.v).real)
    assert trace == pytest.approx(np.linalg.eigvalsh(draw.v).sum(), rel=1e-8)


def test_expected_trace_with_spike():
    # E trace V = sigma^2 (pi_1 + n - 1) = 4 at n=3, p=4, pi_1=2
    spec = EnsembleSpec(n=3, p=4, spikes=(2.0,), field="complex",
                        entry_law=EntryLaw("gaussian"), seed=6)
    trials = 4000
    traces = np.empty(trials)
    for t in range(trials):
        traces[t] = np.trace(build_matrix(spec, trial_rng(6, t)).v).real
    se = traces.std(ddof=1) / math.sqrt(trials)
    assert abs(traces.mean() - 4.0) < 3 * se


def test_spike_scales_leading_row():
    spec_plain = white(4, 6, seed=8)
    spec_spiked = EnsembleSpec(n=4, p=6, spikes=(4.0,), field="complex",
                               entry_law=EntryLaw("gaussian"), seed=8)
    draw_plain = build_matrix(spec_plain, trial_rng(8, 0))
    draw_spiked = build_matrix(spec_spiked, trial_rng(8, 0))
    # same X; the spike multiplies row/column 0 of v by sqrt(pi_1) each
    assert np.array_equal(draw_plain.x, draw_spiked.x)
    assert draw_spiked.v[0, 0] == pytest.approx(4.0 * draw_plain.v[0, 0], rel=1e-12)
    assert draw_spiked.v[0, 1] == pytest.approx(2.0 * draw_plain.v[0, 1], rel=1e-12)
    assert draw_spiked.v[2, 3] == pytest.approx(draw_plain.v[2, 3], rel=1e-12)


# ---------------------------------------------------------------------------
# determinism and dimension checks
# ---------------------------------------------------------------------------


def test_identical_seed_gives_bitwise_identical_draw():
    spec = EnsembleSpec(n=5, p=7, spikes=(2.0,), field="complex",
                        entry_law=EntryLaw("three_point_match"), seed=11)
    a = build_matrix(spec, trial_rng(11, 3))
    b = build_matrix(spec, trial_rng(11, 3))
    assert np.array_equal(a.x, b.x)
    assert np.array_equal(a.v, b.v)


def test_distinct_trials_give_distinct_draws():
    spec = white(5, 7, seed=11)
    a = build_matrix(spec, trial_rng(11, 0))
    b = build_matrix(spec, trial_rng(11, 1))
    assert not np.array_equal(a.x, b.x)


def test_psd_across_laws_and_fields():
    count = 0
    for kind in ("gaussian", "three_point_match", "rademacher"):
        for field in ("real", "complex"):
            spec = EnsembleSpec(n=8, p=12, spikes=(2.0,), field=field,
                                entry_law=EntryLaw(kind), seed=12)
            for t in range(170):
                eigs = np.linalg.eigvalsh(build_matrix(spec, trial_rng(12, t)).v)
                assert eigs.min() >= -1e-10 * eigs.max()
                count += 1
    assert count >= 1000


def test_spec_validation():
    with pytest.raises(DimensionError):
        EnsembleSpec(n=5, p=4)
    with pytest.raises(DomainError):
        EnsembleSpec(n=5, p=5, spikes=(1.0,))
    with pytest.raises(DomainError):
        EnsembleSpec(n=5, p=5, spikes=(1.5, 2.0))
    with pytest.raises(DomainError):
        EnsembleSpec(n=5, p=5, field="quaternion")
    with pytest.raises(DomainError):
        EntryLaw("cauchy")


def test_trial_rng_streams_are_stable():
    # same key, same stream; different trial, different stream
    a = trial_rng(100, 0).standard_normal(4)
    b = trial_rng(100, 0).standard_normal(4)
    c = trial_rng(100, 1).standard_normal(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
