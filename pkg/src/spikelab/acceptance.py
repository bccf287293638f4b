"""End-to-end verification suite: fifteen numbered criteria.

Each criterion is one callable returning a CriterionResult with a PASS or
FAIL verdict and a handful of detail lines.  Exact criteria compare two
independently coded routes (enumeration against closed forms, path sums
against entry sums); stochastic criteria run fixed-seed Monte Carlo
campaigns against the limit laws with pre-agreed decision thresholds.
Thresholds are decision rules at desk scale, not mathematical constants.

Seeds follow one rule throughout: criterion k draws from 100*k,
100*k + 1, ... in order of first use, so no campaign shares a stream.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator

import numpy as np
from scipy.special import ndtr

from .dyck import (
    EdgePath,
    count_with_returns,
    glue,
    narayana,
    preimage_bound,
)
from .ensembles import EnsembleSpec, EntryLaw, build_matrix, trial_rng
from .errors import DomainError, RegimeError
from .genfun import coeffs_a, corrected_tail, growth_rate, series_F, series_G, series_G_tilde
from .harness import (
    EmpiricalCDF,
    ExperimentPlan,
    ks_distance,
    ks_two_sample,
    run_experiment,
    variance_check,
)
from .limitlaws import (
    FredholmConfig,
    gk_reference_sample,
    painleve_f2_cdf,
    tabulate,
    tw_gue_cdf,
)
from .momentlab import (
    MomentRequest,
    bounded_moment_check,
    entry_assignment_moment,
    exact_trace_moment,
    moment_power,
    universality_gap,
)
from .phase import critical_pi1, phase_quantities
from .spectra import eigenvalues


@dataclass(frozen=True)
class CriterionResult:
    """Verdict of one acceptance criterion."""

    number: int
    name: str
    passed: bool
    details: tuple[str, ...]
    elapsed: float

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:02d} {self.name}: {verdict} ({self.elapsed:.1f}s)"


def _result(number: int, name: str, passed: bool, details: list[str], t0: float) -> CriterionResult:
    return CriterionResult(number, name, bool(passed), tuple(details), time.time() - t0)


# ---------------------------------------------------------------------------
# 1: refined Dyck-path counts against Catalan recurrence and enumeration
# ---------------------------------------------------------------------------


def _catalan_numbers(n_max: int) -> list[int]:
    """Independent oracle: the convolution recurrence, no binomials."""
    cat = [1]
    for m in range(n_max):
        cat.append(sum(cat[i] * cat[m - i] for i in range(m + 1)))
    return cat


def _enumerate_dyck_steps(n: int) -> Iterator[tuple[int, ...]]:
    """All Dyck step sequences of half-length n, by backtracking."""

    def rec(prefix: list[int], height: int):
        if len(prefix) == 2 * n:
            yield tuple(prefix)
            return
        room = 2 * n - len(prefix)
        if height + 1 <= room - 1:
            prefix.append(1)
            yield from rec(prefix, height + 1)
            prefix.pop()
        if height > 0:
            prefix.append(-1)
            yield from rec(prefix, height - 1)
            prefix.pop()

    yield from rec([], 0)


def criterion_1() -> CriterionResult:
    t0 = time.time()
    details: list[str] = []
    ok = True
    cat = _catalan_numbers(12)
    for n in range(1, 13):
        row_sum = sum(narayana(n, k) for k in range(1, n + 1))
        table_sum = sum(
            count_with_returns(n, k, m)
            for k in range(1, n + 1)
            for m in range(1, n + 1)
        )
        marginals = all(
            sum(count_with_returns(n, k, m) for m in range(1, n + 1)) == narayana(n, k)
            for k in range(1, n + 1)
        )
        if not (row_sum == cat[n] == table_sum and marginals):
            ok = False
            details.append(f"n={n}: closed-form sums disagree with Catalan {cat[n]}")
    details.append("orders 1..12: marked-count and return-count sums equal Catalan numbers")

    for n in range(1, 9):
        by_k: dict[int, int] = {}
        by_km: dict[tuple[int, int], int] = {}
        for steps in _enumerate_dyck_steps(n):
            height = odd = total_returns = 0
            for t, step in enumerate(steps, start=1):
                height += step
                if step == 1 and t % 2:
                    odd += 1
                elif step == -1 and height == 0:
                    total_returns += 1
            by_k[odd] = by_k.get(odd, 0) + 1
            by_km[(odd, total_returns)] = by_km.get((odd, total_returns), 0) + 1
        if any(by_k.get(k, 0) != narayana(n, k) for k in range(1, n + 1)):
            ok = False
            details.append(f"n={n}: enumeration disagrees with the marked-count formula")
        if any(count_with_returns(n, k, m) != by_km.get((k, m), 0)
               for k in range(1, n + 1) for m in range(1, n + 1)):
            ok = False
            details.append(f"n={n}: enumeration disagrees with the return-refined table")
    details.append("orders 1..8: exhaustive path enumeration matches both count tables")
    return _result(1, "exact-counts", ok, details, t0)


# ---------------------------------------------------------------------------
# 2: functional equations of the weighted series, and the algebraic relation
# ---------------------------------------------------------------------------


def criterion_2() -> CriterionResult:
    t0 = time.time()
    details: list[str] = []
    ok = True
    for gamma in (1, 2, 4):
        g = series_G(gamma, 200)
        gt = series_G_tilde(gamma, 200)
        one = g.constant_like(1)
        r_gt = gt - one - (g * gt).times_z()
        r_g = g - one - (gt * g).times_z().scale(Fraction(1, gamma))
        f = series_F(3, gamma, 200)
        r_f = f - f.constant_like(3) - (g * f).times_z().scale(3)
        bad = [c for r in (r_gt, r_g, r_f) for c in r.coeffs if c]
        if bad:
            ok = False
            details.append(f"gamma={gamma}: nonzero residual coefficient {bad[0]}")
    details.append("three functional-equation residuals vanish exactly through order 200")

    for gamma in (1, 2, 4):
        g = series_G(gamma, 30)
        one = g.constant_like(1)
        u = g.times_z()
        c = Fraction(1) - Fraction(1, gamma)
        # z * (1 - c U) - U + U^2 == 0, the algebraic relation satisfied by U = zG
        resid = (one - u.scale(c)).times_z() - u + u * u
        if any(resid.coeffs):
            ok = False
            details.append(f"gamma={gamma}: algebraic relation fails for U = zG")
    details.append("algebraic relation of U = zG holds through order 30 for gamma in {1,2,4}")
    return _result(2, "series-identities", ok, details, t0)


# ---------------------------------------------------------------------------
# 3: weighted coefficient sums, product route against direct quadruple sum
# ---------------------------------------------------------------------------


def _direct_weighted_sum(n: int, pi1: Fraction, gamma: Fraction) -> Fraction:
    """a_n summed head by head: first-excursion counts times weighted tails.

    Heads of half-length s1 carry s1 * narayana(s1-1, s1-k1) origin/mark
    choices; an empty tail contributes pi1 * gamma^(k1-n), a tail of
    half-length j >= 1 sums return-refined counts with weight
    pi1^(returns+1) * gamma^(marks+k1-n).
    """
    total = Fraction(0)
    for s1 in range(1, n + 1):
        j = n - s1
        for k1 in range(1, max(s1, 2)):
            head = s1 if s1 == 1 else s1 * narayana(s1 - 1, s1 - k1)
            if not head:
                continue
            if j == 0:
                tail = pi1 * gamma ** (k1 - n)
            else:
                tail = Fraction(0)
                for s in range(2, j + 2):
                    for o in range(1, j + 1):
                        cnt = count_with_returns(j, o, s - 1)
                        if cnt:
                            tail += cnt * pi1**s * gamma ** (k1 + o - n)
            total += head * tail
    return total


def criterion_3() -> CriterionResult:
    t0 = time.time()
    details: list[str] = []
    ok = True
    for pi1, gamma in product((Fraction(2), Fraction(3), Fraction(3, 2)), (1, 2, 4)):
        a = coeffs_a(pi1, gamma, 1.0, 8).a
        for n in range(9):
            direct = _direct_weighted_sum(n, pi1, Fraction(gamma))
            if a[n] != direct:
                ok = False
                details.append(
                    f"pi1={pi1}, gamma={gamma}, n={n}: product {a[n]} != direct {direct}"
                )
    details.append(
        "product-of-series route equals the direct quadruple sum exactly, "
        "n <= 8, pi1 in {2, 3, 3/2}, gamma in {1, 2, 4}"
    )
    return _result(3, "weighted-sum-double-route", ok, details, t0)


# ---------------------------------------------------------------------------
# 4: growth rate of the rescaled coefficients in each regime
# ---------------------------------------------------------------------------


def criterion_4() -> CriterionResult:
    t0 = time.time()
    details: list[str] = []
    ok = True
    for pi1, target in ((Fraction(3), 4.5), (Fraction(2), 4.0)):
        coeffs = coeffs_a(pi1, 1, 1.0, 301)
        ratio = growth_rate(coeffs, 1)
        rel = abs(ratio / target - 1.0)
        line = f"pi1={pi1}: a'_301/a'_300 = {ratio:.6f}, target {target}, rel dev {rel:.2e}"
        details.append(line)
        if rel >= 0.02:
            ok = False

    coeffs = coeffs_a(Fraction(3, 2), 1, 1.0, 300)
    tail = corrected_tail(coeffs, 4.0, 101)
    spread = (max(tail) - min(tail)) / tail[-1]
    details.append(
        f"pi1=3/2: sqrt(n)-corrected tail over n in [200, 300] spreads {spread:.2%}"
    )
    if spread >= 0.05:
        ok = False
    return _result(4, "growth-rates", ok, details, t0)


# ---------------------------------------------------------------------------
# 5: exact trace moments, path expansion against entry enumeration
# ---------------------------------------------------------------------------


def criterion_5() -> CriterionResult:
    t0 = time.time()
    details: list[str] = []
    ok = True
    matrix = [
        # (n, p, spikes, field, law kind, power)
        (2, 2, (2.0,), "complex", "three_point_match", 2),
        (2, 2, (2.0,), "real", "three_point_match", 2),
        (2, 2, (3.0,), "real", "rademacher", 3),
        (2, 3, (2.0,), "complex", "rademacher", 3),
        (2, 3, (2.0,), "complex", "three_point_match", 3),
        (2, 3, (2.0,), "real", "three_point_match", 3),
        (3, 3, (2.0,), "real", "rademacher", 2),
        (3, 3, (3.0,), "real", "three_point_match", 2),
    ]
    for n, p, spikes, field, kind, power in matrix:
        spec = EnsembleSpec(n=n, p=p, spikes=spikes, field=field, entry_law=EntryLaw(kind))
        req = MomentRequest(spec=spec, power=power)
        path_value = exact_trace_moment(req).value
        entry_value = entry_assignment_moment(req)
        if path_value != entry_value:
            ok = False
            details.append(
                f"{kind}/{field} n={n} p={p} power={power}: {path_value} != {entry_value}"
            )
    details.append(f"{len(matrix)} tiny instances: both exact routes agree rational-for-rational")

    for kind in ("gaussian", "three_point_match", "rademacher"):
        for field in ("complex", "real"):
            method = "symbolic_gaussian" if kind == "gaussian" else "exact_enumeration"
            spec = EnsembleSpec(
                n=3, p=4, spikes=(2.0,), field=field, entry_law=EntryLaw(kind)
            )
            value = exact_trace_moment(MomentRequest(spec=spec, power=1, method=method)).value
            if value != Fraction(4):
                ok = False
                details.append(f"{kind}/{field}: E Tr V = {value}, expected 4")
    details.append("E Tr V = sigma^2 (pi_1 + n - 1) = 4 across all six law/field pairs")
    return _result(5, "moment-double-route", ok, details, t0)


# ---------------------------------------------------------------------------
# 6: edge-law engine consistency and induced moments
# ---------------------------------------------------------------------------


def criterion_6() -> CriterionResult:
    t0 = time.time()
    details: list[str] = []
    ok = True

    grid = np.linspace(-8.0, 4.0, 49)
    gap = max(abs(tw_gue_cdf(float(x)) - painleve_f2_cdf(float(x))) for x in grid)
    details.append(f"determinant vs differential route: max gap {gap:.2e} on [-8, 4]")
    if gap >= 1e-5:
        ok = False

    xs_neg = np.linspace(-10.0, 0.0, 2001)
    xs_pos = np.linspace(0.0, 6.0, 1201)
    cdf_neg = np.array([painleve_f2_cdf(float(x)) for x in xs_neg])
    cdf_pos = np.array([painleve_f2_cdf(float(x)) for x in xs_pos])
    mean = np.trapezoid(1.0 - cdf_pos, xs_pos) - np.trapezoid(cdf_neg, xs_neg)
    second = 2.0 * (
        np.trapezoid(xs_pos * (1.0 - cdf_pos), xs_pos)
        + np.trapezoid(-xs_neg * cdf_neg, xs_neg)
    )
    sd = math.sqrt(second - mean**2)
    details.append(f"induced mean {mean:.6f} (target -1.7711), sd {sd:.6f} (target 0.9018)")
    if abs(mean - (-1.7711)) >= 1e-3 or abs(sd - 0.9018) >= 1e-3:
        ok = False

    coarse = FredholmConfig(quad_order=48)
    fine = FredholmConfig(quad_order=96)
    drift = max(
        abs(tw_gue_cdf(float(x), coarse) - tw_gue_cdf(float(x), fine))
        for x in np.linspace(-8.0, 4.0, 13)
    )
    details.append(f"quadrature-order doubling drift {drift:.2e}")
    if drift >= 1e-6:
        ok = False
    return _result(6, "tw-engine", ok, details, t0)


# ---------------------------------------------------------------------------
# 7-10, 15: fixed-seed Monte Carlo campaigns against the limit laws
# ---------------------------------------------------------------------------


def _edge_curve(law: str):
    return tabulate(law, np.linspace(-10.0, 6.0, 321))


def _campaign(spec: EnsembleSpec, trials: int, k_top: int = 1,
              regime_override: str | None = None) -> list[EmpiricalCDF]:
    plan = ExperimentPlan(spec=spec, trials=trials, k_top=k_top,
                          regime_override=regime_override)
    return run_experiment(plan)


def criterion_7() -> CriterionResult:
    t0 = time.time()
    details: list[str] = []
    ok = True
    for field, seed, law in (("complex", 700, "painleve_f2"), ("real", 701, "tw_goe")):
        spec = EnsembleSpec(n=200, p=400, field=field,
                            entry_law=EntryLaw("gaussian"), seed=seed)
        cdf = _campaign(spec, 2000)[0]
        ks = ks_distance(cdf, _edge_curve(law))
        details.append(
            f"{field} white edge vs {law}: KS {ks.distance:.4f} (threshold 0.08)"
        )
        if ks.distance >= 0.08:
            ok = False
    return _result(7, "white-edge-law", ok, details, t0)


def criterion_8() -> CriterionResult:
    t0 = time.time()
    details: list[str] = []
    ok = True
    for field, seed in (("complex", 800), ("real", 801)):
        spec = EnsembleSpec(n=400, p=400, spikes=(3.0,), field=field,
                            entry_law=EntryLaw("gaussian"), seed=seed)
        cdf = _campaign(spec, 2000)[0]
        ks = ks_distance(cdf, ndtr)
        details.append(
            f"{field} rescaled spike vs standard normal: KS {ks.distance:.4f} (threshold 0.06)"
        )
        if ks.distance >= 0.06:
            ok = False
    return _result(8, "spike-gaussian-fluctuations", ok, details, t0)


def criterion_9() -> CriterionResult:
    t0 = time.time()
    details: list[str] = []
    ok = True

    def law_spec(n: int, p: int, pi1: float, kind: str, seed: int) -> EnsembleSpec:
        return EnsembleSpec(n=n, p=p, spikes=(pi1,), field="complex",
                            entry_law=EntryLaw(kind), seed=seed)

    above_g = _campaign(law_spec(400, 400, 3.0, "gaussian", 900), 2000)[0]
    above_m = _campaign(law_spec(400, 400, 3.0, "three_point_match", 901), 2000)[0]
    ks = ks_two_sample(above_g, above_m)
    details.append(f"above transition, gaussian vs matched: KS {ks.distance:.4f} (threshold 0.05)")
    ok &= ks.distance < 0.05

    below = {
        kind: _campaign(law_spec(200, 200, 1.2, kind, seed), 2000)[0]
        for kind, seed in (("gaussian", 902), ("three_point_match", 903), ("rademacher", 904))
    }
    ks = ks_two_sample(below["gaussian"], below["three_point_match"])
    details.append(
        f"below transition, gaussian vs three_point_match: KS {ks.distance:.4f} (threshold 0.05)"
    )
    ok &= ks.distance < 0.05

    # Below the transition the fourth-moment matching condition is waived:
    # the rademacher law must be admitted (its campaign completes) while
    # staying rejected above the transition.  Its KS distance to the
    # gaussian run is reported without a bound, because a fourth-moment
    # deficit shifts the finite-n edge at order n^(-1/3), beyond what a
    # two-sample comparison can absorb at tractable n.
    rad = below["rademacher"]
    if len(rad.sorted_samples) != 2000:
        ok = False
    ks = ks_two_sample(below["gaussian"], rad)
    details.append(
        f"below transition, rademacher admitted, 2000 trials completed; "
        f"KS vs gaussian {ks.distance:.4f} (reported, no bound)"
    )
    try:
        universality_gap(law_spec(400, 400, 3.0, "gaussian", 900),
                         law_spec(400, 400, 3.0, "rademacher", 904), 20, 100)
    except RegimeError:
        details.append("above transition, rademacher rejected (fourth-moment rule): yes")
    else:
        details.append("above transition, rademacher rejected (fourth-moment rule): NO")
        ok = False
    return _result(9, "edge-universality", ok, details, t0)


def criterion_10() -> CriterionResult:
    t0 = time.time()
    details: list[str] = []
    ok = True
    pi1 = critical_pi1(200, 800)
    spec_g = EnsembleSpec(n=200, p=800, spikes=(pi1,), field="complex",
                          entry_law=EntryLaw("gaussian"), seed=1000)
    spec_m = EnsembleSpec(n=200, p=800, spikes=(pi1,), field="complex",
                          entry_law=EntryLaw("three_point_match"), seed=1001)
    cdf_g = _campaign(spec_g, 2000)[0]
    cdf_m = _campaign(spec_m, 2000)[0]

    curve = tabulate("bbp_f1", np.linspace(-10.0, 6.0, 161))
    ks = ks_distance(cdf_g, curve)
    details.append(f"critical spike vs deformed edge law: KS {ks.distance:.4f} (threshold 0.10)")
    ok &= ks.distance < 0.10

    ks2 = ks_two_sample(cdf_g, cdf_m)
    details.append(f"critical, gaussian vs matched: KS {ks2.distance:.4f} (threshold 0.05)")
    ok &= ks2.distance < 0.05
    return _result(10, "critical-deformed-law", ok, details, t0)


# ---------------------------------------------------------------------------
# 11: almost-sure limits via trend extrapolation over n
# ---------------------------------------------------------------------------


def _mean_trend(pi1: float, seeds: tuple[int, int, int], exponent: float):
    """Weighted fit mean(n) = a + b n^exponent over n in {100, 200, 400}."""
    rows = []
    for (n, trials), seed in zip(((100, 1600), (200, 800), (400, 400)), seeds):
        spec = EnsembleSpec(n=n, p=n, spikes=(pi1,), field="complex",
                            entry_law=EntryLaw("gaussian"), seed=seed)
        lam1 = np.empty(trials)
        for t in range(trials):
            lam1[t] = eigenvalues(build_matrix(spec, trial_rng(seed, t))).lambdas[0]
        rows.append((n, lam1.mean(), lam1.std(ddof=1) / math.sqrt(trials),
                     lam1.std(ddof=1)))
    ns = np.array([r[0] for r in rows], dtype=float)
    y = np.array([r[1] for r in rows])
    se = np.array([r[2] for r in rows])
    design = np.column_stack([np.ones_like(ns), ns**exponent])
    weights = np.diag(1.0 / se**2)
    cov = np.linalg.inv(design.T @ weights @ design)
    beta = cov @ design.T @ weights @ y
    return rows, float(beta[0]), math.sqrt(cov[0, 0])


def criterion_11() -> CriterionResult:
    t0 = time.time()
    details: list[str] = []
    ok = True
    cases = (
        (3.0, (1100, 1101, 1102), -1.0, "above"),
        (1.5, (1110, 1111, 1112), -2.0 / 3.0, "below"),
    )
    for pi1, seeds, exponent, label in cases:
        spec = EnsembleSpec(n=400, p=400, spikes=(pi1,), field="complex")
        q = phase_quantities(spec)
        target = q.tau if label == "above" else q.u_plus
        rows, a, se_a = _mean_trend(pi1, seeds, exponent)
        z = abs(a - target) / se_a
        sds = [r[3] for r in rows]
        shrinking = sds[0] > sds[1] > sds[2]
        details.append(
            f"{label} transition: extrapolated limit {a:.5f} +- {se_a:.5f}, "
            f"target {target}, |z| = {z:.2f} (threshold 3)"
        )
        details.append(
            f"{label} transition: dispersion {sds[0]:.4f} > {sds[1]:.4f} > {sds[2]:.4f}: "
            f"{'yes' if shrinking else 'no'}"
        )
        ok &= z < 3.0 and shrinking
    return _result(11, "almost-sure-limits", ok, details, t0)


# ---------------------------------------------------------------------------
# 12: growth of the rescaled trace moment at the spiked scale
# ---------------------------------------------------------------------------


def criterion_12() -> CriterionResult:
    t0 = time.time()
    details: list[str] = []
    ok = True
    for field, seed in (("complex", 1200), ("real", 1201)):
        spec = EnsembleSpec(n=400, p=400, spikes=(3.0,), field=field,
                            entry_law=EntryLaw("gaussian"), seed=seed)
        q = phase_quantities(spec)
        s_n = moment_power(spec, 1.0)
        mult = 2.0 if field == "real" else 1.0
        predicted = math.exp(s_n**2 / (2 * spec.n) * mult * (q.sigma_pi / q.tau) ** 2)
        report = bounded_moment_check(spec, 1.0, 5000)
        rel = abs(report.estimate / predicted - 1.0)
        details.append(
            f"{field}: measured {report.estimate:.4f} +- {report.std_error:.4f}, "
            f"predicted {predicted:.4f}, rel dev {rel:.2%} (threshold 10%)"
        )
        if rel >= 0.10:
            ok = False
    if not ok:
        details.append(
            "note: at n=400 the bulk spectrum still adds ~0.21 to the trace "
            "power, outside the prediction's vanishing correction term"
        )
    return _result(12, "moment-asymptotics", ok, details, t0)


# ---------------------------------------------------------------------------
# 13: exhaustive preimage counts for the gluing procedure
# ---------------------------------------------------------------------------


def _first_return_half_time(path: EdgePath) -> int:
    heights = path.trajectory().heights()
    for t in range(1, len(heights)):
        if heights[t] == 0:
            return t // 2
    raise DomainError("trajectory never returns")  # unreachable for valid paths


def criterion_13() -> CriterionResult:
    t0 = time.time()
    details: list[str] = []
    ok = True
    s_n = 3
    paths = [
        EdgePath(bottoms, tops)
        for bottoms in product((1, 2), repeat=s_n)
        for tops in product((1, 2), repeat=s_n)
    ]
    spiked = [p for p in paths if p.is_even() and 1 in p.bottoms]
    groups: dict[tuple, list[EdgePath]] = {}
    for p in spiked:
        res = glue(p)
        key = (res.glued.bottoms, res.glued.tops, res.s, res.l)
        groups.setdefault(key, []).append(p)
    details.append(
        f"{len(paths)} walks of half-length {s_n}: {len(spiked)} even with spike "
        f"visits, {len(groups)} distinct glued walks"
    )

    worst = 0.0
    for (bottoms, tops, s, l), members in groups.items():
        glued = EdgePath(bottoms, tops)
        bound = preimage_bound(s, l, _first_return_half_time(glued), s_n)
        worst = max(worst, len(members) / bound)
        if len(members) > bound:
            ok = False
            details.append(f"glued walk {bottoms}/{tops}: {len(members)} preimages > bound {bound}")
    details.append(f"preimage counts within bound everywhere; worst fill ratio {worst:.2f}")

    # Reconstruction: re-derive each group by searching the whole walk space
    # and demand that gluing maps every candidate, and in particular every
    # original, back onto the same glued walk.
    recovered = True
    for key, members in groups.items():
        candidates = []
        for q in spiked:
            res = glue(q)
            if (res.glued.bottoms, res.glued.tops, res.s, res.l) == key:
                candidates.append(q)
        if set(candidates) != set(members):
            recovered = False
    details.append(
        "reconstruction search recovers every original walk: "
        + ("yes" if recovered else "no")
    )
    ok &= recovered
    return _result(13, "glue-preimages", ok, details, t0)


# ---------------------------------------------------------------------------
# 14: variance of the rescaled trace power, boundedness and universality
# ---------------------------------------------------------------------------


def criterion_14() -> CriterionResult:
    t0 = time.time()
    details: list[str] = []
    spec = EnsembleSpec(n=200, p=200, spikes=(3.0,), field="complex",
                        entry_law=EntryLaw("gaussian"), seed=1400)
    report = variance_check(ExperimentPlan(spec=spec, trials=800), 1.0)
    ok = True
    for row in report.rows:
        details.append(
            f"n={row.n}: var {row.var_gaussian:.4f} +- {row.se_gaussian:.4f} (gaussian) "
            f"vs {row.var_matched:.4f} +- {row.se_matched:.4f} (matched), "
            f"z = {row.z_gap:.2f} (threshold 4)"
        )
        ok &= row.z_gap < 4.0
    details.append(f"growth trend z across n = 50 -> 200: {report.trend_z:.2f} (threshold 4)")
    ok &= report.trend_z < 4.0
    return _result(14, "variance-bound", ok, details, t0)


# ---------------------------------------------------------------------------
# 15: two equal spikes against the small-matrix reference; weak second spike
# ---------------------------------------------------------------------------


def criterion_15() -> CriterionResult:
    t0 = time.time()
    details: list[str] = []
    ok = True

    spec = EnsembleSpec(n=400, p=400, spikes=(3.0, 3.0), field="complex",
                        entry_law=EntryLaw("gaussian"), seed=1500)
    cdfs = _campaign(spec, 1000, k_top=2)
    reference = gk_reference_sample(2, 4000, trial_rng(1501, 0))
    for rank in (0, 1):
        ref_cdf = EmpiricalCDF(sorted_samples=tuple(np.sort(reference[:, rank])))
        ks = ks_two_sample(cdfs[rank], ref_cdf)
        details.append(
            f"equal spikes, rank {rank + 1} marginal vs 2x2 reference: "
            f"KS {ks.distance:.4f} (threshold 0.06)"
        )
        ok &= ks.distance < 0.06

    spec2 = EnsembleSpec(n=400, p=400, spikes=(3.0, 1.2), field="complex",
                         entry_law=EntryLaw("gaussian"), seed=1502)
    cdfs2 = _campaign(spec2, 2000, k_top=2, regime_override="subcritical")
    ks = ks_distance(cdfs2[1], _edge_curve("painleve_f2"))
    details.append(
        f"weak second spike, second eigenvalue vs soft-edge law: "
        f"KS {ks.distance:.4f} (threshold 0.10)"
    )
    if ks.distance >= 0.10:
        ok = False
        details.append(
            "note: with the detached leading spike the finite-n bulk edge "
            "sits near 3.9824 instead of 4.0, shifting xi_2 by about -0.38 "
            "under the white-edge centering; that shift alone predicts "
            "KS 0.16 at n=400"
        )
    return _result(15, "multi-spike", ok, details, t0)


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


CRITERIA: dict[int, tuple[str, Callable[[], CriterionResult]]] = {
    1: ("exact-counts", criterion_1),
    2: ("series-identities", criterion_2),
    3: ("weighted-sum-double-route", criterion_3),
    4: ("growth-rates", criterion_4),
    5: ("moment-double-route", criterion_5),
    6: ("tw-engine", criterion_6),
    7: ("white-edge-law", criterion_7),
    8: ("spike-gaussian-fluctuations", criterion_8),
    9: ("edge-universality", criterion_9),
    10: ("critical-deformed-law", criterion_10),
    11: ("almost-sure-limits", criterion_11),
    12: ("moment-asymptotics", criterion_12),
    13: ("glue-preimages", criterion_13),
    14: ("variance-bound", criterion_14),
    15: ("multi-spike", criterion_15),
}


def run_criterion(selector: int | str) -> CriterionResult:
    """Run one criterion by number or by name."""
    if isinstance(selector, str) and not selector.isdigit():
        matches = [num for num, (name, _) in CRITERIA.items() if name == selector]
        if not matches:
            raise DomainError(f"unknown criterion {selector!r}")
        number = matches[0]
    else:
        number = int(selector)
        if number not in CRITERIA:
            raise DomainError(f"criterion number must be in 1..15, got {number}")
    return CRITERIA[number][1]()


def run_all() -> list[CriterionResult]:
    return [fn() for _, fn in CRITERIA.values()]
