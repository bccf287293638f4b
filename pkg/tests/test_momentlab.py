"""Tests for exact tiny-instance trace moments and the bounded-power probes."""

from fractions import Fraction

import pytest

from spikelab.ensembles import EnsembleSpec, EntryLaw
from spikelab.errors import DimensionError, DomainError, RegimeError, SupportError
from spikelab.momentlab import (
    MomentRequest,
    bounded_moment_check,
    entry_assignment_moment,
    exact_trace_moment,
    moment_power,
    moment_scale,
    universality_gap,
)


def make_spec(n, p, spikes, kind="gaussian", seed=1, field="complex"):
    return EnsembleSpec(
        n=n, p=p, spikes=spikes, field=field, entry_law=EntryLaw(kind), seed=seed
    )


def test_one_by_one_rademacher_trace_is_one():
    # |x|^2 = 1 almost surely, so every power of the 1 x 1 matrix is 1.
    spec = make_spec(1, 1, (), kind="rademacher")
    for s in (1, 2, 3, 4):
        report = exact_trace_moment(MomentRequest(spec, s, "exact_enumeration"))
        assert report.value == 1


def test_symbolic_first_moment_is_spike_trace():
    # E Tr V = sum of population eigenvalues: 2 + 1 + 1.
    spec = make_spec(3, 4, (2.0,))
    report = exact_trace_moment(MomentRequest(spec, 1, "symbolic_gaussian"))
    assert report.value == 4


@pytest.mark.parametrize(
    "kind,field,n,p,spikes,s",
    [
        ("rademacher", "real", 2, 2, (), 2),
        ("rademacher", "real", 2, 3, (2.0,), 3),
        ("rademacher", "complex", 2, 3, (2.0,), 2),
        ("rademacher", "complex", 2, 2, (), 3),
        ("three_point_match", "real", 2, 3, (2.0,), 2),
        ("three_point_match", "real", 2, 2, (), 3),
        ("three_point_match", "complex", 2, 2, (2.0,), 2),
        ("three_point_match", "complex", 1, 2, (), 3),
    ],
)
def test_path_expansion_agrees_with_assignment_enumeration(kind, field, n, p, spikes, s):
    spec = make_spec(n, p, spikes, kind=kind, field=field)
    req = MomentRequest(spec, s, "exact_enumeration")
    assert exact_trace_moment(req).value == entry_assignment_moment(req)


def test_fourth_moment_matching_visible_at_power_two():
    # At power 1 only variances enter; at power 2 the fourth moment does,
    # which separates the two-point law from the matched three-point law.
    gauss = make_spec(2, 2, ())
    matched = make_spec(2, 2, (), kind="three_point_match")
    two_point = make_spec(2, 2, (), kind="rademacher")
    v_gauss = [
        exact_trace_moment(MomentRequest(gauss, s, "symbolic_gaussian")).value
        for s in (1, 2)
    ]
    v_matched = [
        exact_trace_moment(MomentRequest(matched, s, "exact_enumeration")).value
        for s in (1, 2)
    ]
    v_two = [
        exact_trace_moment(MomentRequest(two_point, s, "exact_enumeration")).value
        for s in (1, 2)
    ]
    assert v_gauss[0] == v_matched[0] == v_two[0]
    assert v_gauss[1] == v_matched[1]
    assert v_gauss[1] != v_two[1]


def test_path_terms_sum_to_value():
    spec = make_spec(2, 3, (2.0,))
    report = exact_trace_moment(MomentRequest(spec, 2, "symbolic_gaussian"))
    assert sum(report.path_terms.values(), Fraction(0)) == report.value


def test_path_terms_scale_with_spike_weight():
    # Each visit of the walk to row 0 contributes one spike factor, so
    # raising the spike from 2 to 3 rescales a term by (3/2)^ones.
    terms2 = exact_trace_moment(
        MomentRequest(make_spec(2, 2, (2.0,)), 2, "symbolic_gaussian")
    ).path_terms
    terms3 = exact_trace_moment(
        MomentRequest(make_spec(2, 2, (3.0,)), 2, "symbolic_gaussian")
    ).path_terms
    assert set(terms2) == set(terms3)
    for (ones, cols), value in terms2.items():
        assert terms3[(ones, cols)] == value * Fraction(3, 2) ** ones


def test_monte_carlo_matches_exact_route():
    spec = make_spec(3, 4, (2.0,), seed=9)
    mc = exact_trace_moment(MomentRequest(spec, 1, "monte_carlo"))
    assert abs(mc.value - 4.0) < 4 * mc.std_error


def test_request_validation():
    spec = make_spec(2, 2, ())
    with pytest.raises(DomainError):
        MomentRequest(spec, 5, "symbolic_gaussian")
    with pytest.raises(DomainError):
        MomentRequest(spec, 0, "symbolic_gaussian")
    with pytest.raises(DomainError):
        MomentRequest(spec, 2, "closed_form")
    with pytest.raises(DimensionError):
        MomentRequest(make_spec(4, 4, ()), 2, "symbolic_gaussian")
    with pytest.raises(SupportError):
        MomentRequest(spec, 2, "exact_enumeration")
    with pytest.raises(SupportError):
        MomentRequest(make_spec(2, 2, (), kind="rademacher"), 2, "symbolic_gaussian")


def test_assignment_enumeration_validation():
    with pytest.raises(SupportError):
        entry_assignment_moment(MomentRequest(make_spec(2, 2, ()), 2, "symbolic_gaussian"))
    req = MomentRequest(make_spec(2, 2, (2.5,), kind="rademacher"), 2, "exact_enumeration")
    with pytest.raises(DomainError):
        entry_assignment_moment(req)


def test_moment_power_frozen_values():
    sup = make_spec(100, 200, (3.0,))
    assert moment_power(sup, 1.0) == 10
    assert moment_power(sup, 1.5) == 15
    assert moment_power(make_spec(100, 400, (1.2,)), 1.0) == 22
    assert moment_power(make_spec(100, 100, ()), 1.0) == 22
    assert moment_power(make_spec(400, 400, ()), 1.0) == 54


def test_moment_scale_frozen_values():
    assert moment_scale(make_spec(100, 200, (3.0,))) == pytest.approx(3.75, abs=1e-12)
    assert moment_scale(make_spec(100, 200, ())) == pytest.approx(
        2.914213562373095, abs=1e-12
    )
    assert moment_scale(make_spec(100, 100, ())) == pytest.approx(4.0, abs=1e-12)


def test_bounded_moment_check_white():
    report = bounded_moment_check(make_spec(100, 100, (), seed=5), 1.0, 100)
    assert report.power == 22
    assert report.scale == pytest.approx(4.0, abs=1e-12)
    assert report.estimate > 0
    assert 0 < report.std_error < report.estimate
    again = bounded_moment_check(make_spec(100, 100, (), seed=5), 1.0, 100)
    assert again.estimate == report.estimate


def test_universality_gap_same_law_is_noise():
    a = make_spec(100, 200, (3.0,), seed=51)
    b = make_spec(100, 200, (3.0,), seed=52)
    assert abs(universality_gap(a, b, 10, 400)) < 4.0


def test_universality_gap_supercritical_matched_law():
    a = make_spec(100, 200, (3.0,), seed=43)
    b = make_spec(100, 200, (3.0,), kind="three_point_match", seed=44)
    assert abs(universality_gap(a, b, 10, 2000)) < 4.0


def test_universality_gap_subcritical_two_point_law():
    # Below the transition the fourth moment is not constrained and the
    # two-point law is admissible.  Its finite-size edge bias is real but
    # only resolvable with heavy averaging; at the minimal campaign size
    # of 100 trials the gap statistic stays inside ordinary noise.
    a = make_spec(100, 400, (1.2,), seed=41)
    b = make_spec(100, 400, (1.2,), kind="rademacher", seed=42)
    assert abs(universality_gap(a, b, 22, 100)) < 4.0


def test_universality_gap_rejects_supercritical_two_point_law():
    a = make_spec(100, 200, (3.0,), seed=43)
    b = make_spec(100, 200, (3.0,), kind="rademacher", seed=45)
    with pytest.raises(RegimeError):
        universality_gap(a, b, 10, 100)
