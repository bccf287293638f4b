"""Exact trace-moment oracles and Monte Carlo moment comparisons.

Two independent exact routes compute E[Tr V^s] for tiny ensembles:

* the path expansion: sum over all closed index chains
  (i_1..i_s, j_1..j_s) of the factorized entry expectation times the
  spike weight prod_q pi_(i_q), divided by p^s;
* the entry-assignment enumeration: walk the full finite support of the
  matrix X, evaluate Tr V^s exactly for every assignment, and average
  with the assignment probabilities.

Both run in exact rational arithmetic.  Irrational support points (the
three-point law lives on multiples of sigma sqrt(3)) are handled by
scaling: every monomial of Tr V^s has even total degree in the entry
parts, so working with integer part values and multiplying by the even
power of the scale keeps everything rational.

The Monte Carlo side rescales Tr(V/scale)^(s_N) with scale tau(pi_1)
above the transition and u_+ at or below it, and s_N growing like
sqrt(N) or N^(2/3) respectively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb

import numpy as np

from .errors import DimensionError, DomainError, RegimeError, SupportError
from .ensembles import EnsembleSpec, build_matrix, trial_rng
from .phase import classify, phase_quantities
from .spectra import eigenvalues

_METHODS = ("exact_enumeration", "symbolic_gaussian", "monte_carlo")
_FINITE_KINDS = ("three_point_match", "rademacher")


@dataclass(frozen=True)
class MomentRequest:
    """A tiny-instance trace-moment computation."""

    spec: EnsembleSpec
    power: int
    method: str = "exact_enumeration"

    def __post_init__(self) -> None:
        if self.method not in _METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        if not 1 <= self.power <= 4:
            raise DomainError("power must be in 1..4")
        if self.spec.n > 3 or self.spec.p > 4:
            raise DimensionError("exact moments are restricted to n <= 3, p <= 4")
        if self.method == "exact_enumeration" and self.spec.entry_law.kind not in _FINITE_KINDS:
            raise SupportError("exact enumeration needs a finitely supported entry law")
        if self.method == "symbolic_gaussian" and self.spec.entry_law.kind != "gaussian":
            raise SupportError("symbolic route applies to the gaussian law")


@dataclass(frozen=True)
class MomentReport:
    """Exact rational value, or a Monte Carlo estimate with its error.

    path_terms maps (number of bottom-vertex-1 occurrences, number of
    distinct column indices) to that group's exact contribution; the
    second entry counts the odd marked instants of the contributing
    paths, since every used column is discovered at an odd instant.
    """

    value: Fraction | float
    std_error: float | None = None
    path_terms: dict[tuple[int, int], Fraction] | None = None


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def _part_moment(kind: str, k: int, part_var: Fraction) -> Fraction:
    """E[U^k] for one real part with variance part_var, exact."""
    if k % 2:
        return Fraction(0)
    h = k // 2
    if h == 0:
        return Fraction(1)
    if kind == "gaussian":
        return _double_factorial(k - 1) * part_var**h
    if kind == "rademacher":
        return part_var**h
    return Fraction(3) ** (h - 1) * part_var**h  # three_point_match


def _mixed_moment(kind: str, a: int, b: int, sigma2: Fraction, field: str) -> Fraction:
    """E[X^a conj(X)^b]; real for every symmetric law considered here."""
    if (a + b) % 2:
        return Fraction(0)
    if field == "real":
        return _part_moment(kind, a + b, sigma2)
    part_var = sigma2 / 2
    total = Fraction(0)
    for r in range(a + 1):
        mr = comb(a, r)
        for t in range(b + 1):
            ue = a - r + b - t
            ve = r + t
            if ue % 2 or ve % 2:
                continue
            sign = (-1) ** t * (-1) ** ((r + t) // 2)
            total += (
                mr
                * comb(b, t)
                * sign
                * _part_moment(kind, ue, part_var)
                * _part_moment(kind, ve, part_var)
            )
    return total


def _exact_sigma2(spec: EnsembleSpec) -> Fraction:
    return Fraction(spec.entry_law.sigma) ** 2


def _spike_weights(spec: EnsembleSpec) -> list[Fraction]:
    pis = [Fraction(1)] * spec.n
    for i, pi in enumerate(spec.spikes):
        pis[i] = Fraction(pi)
    return pis


def _path_expansion(
    spec: EnsembleSpec, s: int, kind: str
) -> tuple[Fraction, dict[tuple[int, int], Fraction]]:
    sigma2 = _exact_sigma2(spec)
    pis = _spike_weights(spec)
    terms: dict[tuple[int, int], Fraction] = {}
    cache: dict[tuple[int, int], Fraction] = {}

    def moment(a: int, b: int) -> Fraction:
        key = (a, b)
        if key not in cache:
            cache[key] = _mixed_moment(kind, a, b, sigma2, spec.field)
        return cache[key]

    scale = Fraction(1, spec.p**s)
    for rows in product(range(spec.n), repeat=s):
        pi_weight = Fraction(1)
        for i in rows:
            pi_weight *= pis[i]
        ones = sum(1 for i in rows if i == 0)
        for cols in product(range(spec.p), repeat=s):
            counts: dict[tuple[int, int], list[int]] = {}
            for q in range(s):
                counts.setdefault((rows[q], cols[q]), [0, 0])[0] += 1
                counts.setdefault((rows[(q + 1) % s], cols[q]), [0, 0])[1] += 1
            term = pi_weight
            for a, b in counts.values():
                m = moment(a, b)
                if m == 0:
                    term = Fraction(0)
                    break
                term *= m
            if term:
                key = (ones, len(set(cols)))
                terms[key] = terms.get(key, Fraction(0)) + term * scale
    return sum(terms.values(), Fraction(0)), terms


def exact_trace_moment(req: MomentRequest) -> MomentReport:
    """E[Tr V^power] by the requested route.

    The two exact methods sum the path expansion with the appropriate
    moment table; monte_carlo averages over draws of the ensemble.
    """
    spec = req.spec
    if req.method == "monte_carlo":
        trials = 2000
        vals = np.empty(trials)
        for t in range(trials):
            draw = build_matrix(spec, trial_rng(spec.seed, t))
            lams = np.array(eigenvalues(draw).lambdas)
            vals[t] = np.sum(lams**req.power)
        return MomentReport(
            value=float(vals.mean()),
            std_error=float(vals.std(ddof=1) / math.sqrt(trials)),
        )
    value, terms = _path_expansion(spec, req.power, spec.entry_law.kind)
    return MomentReport(value=value, path_terms=terms)


_PART_SUPPORT = {
    # integer part values with weight numerators; denominators below
    "three_point_match": (((-1, 1), (0, 4), (1, 1)), 6),
    "rademacher": (((-1, 1), (1, 1)), 2),
}


def _scale_squared(kind: str, field: str, sigma2: Fraction) -> Fraction:
    """c^2 where the entry parts are c times the integer support."""
    part_var = sigma2 if field == "real" else sigma2 / 2
    return 3 * part_var if kind == "three_point_match" else part_var


def entry_assignment_moment(req: MomentRequest) -> Fraction:
    """Independent oracle: enumerate the full support of X.

    Tr((D Z Z*)^s) is evaluated in integer arithmetic for every integer
    part assignment Z, then rescaled by the even power of the support
    scale.  Requires integer spikes so the diagonal D stays integral.
    """
    spec = req.spec
    kind = spec.entry_law.kind
    if kind not in _PART_SUPPORT:
        raise SupportError("entry enumeration needs a finitely supported law")
    if any(pi != int(pi) for pi in spec.spikes):
        raise DomainError("entry enumeration expects integer spikes")
    support, denom = _PART_SUPPORT[kind]
    n, p, s = spec.n, spec.p, req.power
    diag = [int(pi) for pi in spec.spikes] + [1] * (n - len(spec.spikes))
    if spec.field == "complex":
        entry_support = tuple(
            ((zu, zv), wu * wv) for zu, wu in support for zv, wv in support
        )
    else:
        entry_support = tuple(((z, 0), w) for z, w in support)
    cells = n * p
    acc_re = 0
    acc_im = 0
    total_weight = 0
    for assignment in product(entry_support, repeat=cells):
        weight = 1
        for _, w in assignment:
            weight *= w
        total_weight += weight
        # A = Z Z^*, then W = diag * A; integer complex arithmetic
        zre = [[assignment[r * p + c][0][0] for c in range(p)] for r in range(n)]
        zim = [[assignment[r * p + c][0][1] for c in range(p)] for r in range(n)]
        are = [[0] * n for _ in range(n)]
        aim = [[0] * n for _ in range(n)]
        for r in range(n):
            for c in range(n):
                sre = sim = 0
                for j in range(p):
                    sre += zre[r][j] * zre[c][j] + zim[r][j] * zim[c][j]
                    sim += zim[r][j] * zre[c][j] - zre[r][j] * zim[c][j]
                are[r][c] = diag[r] * sre
                aim[r][c] = diag[r] * sim
        wre, wim = are, aim
        for _ in range(s - 1):
            nre = [[0] * n for _ in range(n)]
            nim = [[0] * n for _ in range(n)]
            for r in range(n):
                for c in range(n):
                    sre = sim = 0
                    for m in range(n):
                        sre += wre[r][m] * are[m][c] - wim[r][m] * aim[m][c]
                        sim += wre[r][m] * aim[m][c] + wim[r][m] * are[m][c]
                    nre[r][c] = sre
                    nim[r][c] = sim
            wre, wim = nre, nim
        acc_re += weight * sum(wre[r][r] for r in range(n))
        acc_im += weight * sum(wim[r][r] for r in range(n))
    if acc_im:
        raise DomainError("imaginary parts failed to cancel in the trace sum")
    if total_weight != denom ** (cells * (2 if spec.field == "complex" else 1)):
        raise DomainError("support weights failed to sum to one")
    c2 = _scale_squared(kind, spec.field, _exact_sigma2(spec))
    return c2**s * Fraction(acc_re, total_weight) / Fraction(spec.p) ** s


def moment_power(spec: EnsembleSpec, c: float) -> int:
    """s_N: round(c sqrt(N)) above the transition, round(c N^(2/3)) else."""
    if not c > 0:
        raise DomainError("c must be positive")
    if classify(spec).regime == "supercritical":
        return max(1, round(c * math.sqrt(spec.n)))
    return max(1, round(c * spec.n ** (2 / 3)))


def moment_scale(spec: EnsembleSpec) -> float:
    """tau(pi_1) above the transition, u_+ at or below it."""
    q = phase_quantities(spec)
    if classify(spec).regime == "supercritical":
        assert q.tau is not None
        return q.tau
    return q.u_plus


def _trace_power_samples(spec: EnsembleSpec, power: int, scale: float, trials: int) -> np.ndarray:
    vals = np.empty(trials)
    for t in range(trials):
        draw = build_matrix(spec, trial_rng(spec.seed, t))
        lams = np.array(eigenvalues(draw).lambdas)
        vals[t] = np.sum((lams / scale) ** power)
    return vals


@dataclass(frozen=True)
class BoundedMomentReport:
    """Monte Carlo estimate of E Tr(V/scale)^power with its error."""

    estimate: float
    std_error: float
    power: int
    scale: float


def bounded_moment_check(spec: EnsembleSpec, c: float, trials: int) -> BoundedMomentReport:
    """Estimate E Tr(V/scale)^(s_N) for the spec's own regime."""
    power = moment_power(spec, c)
    scale = moment_scale(spec)
    vals = _trace_power_samples(spec, power, scale, trials)
    return BoundedMomentReport(
        estimate=float(vals.mean()),
        std_error=float(vals.std(ddof=1) / math.sqrt(trials)),
        power=power,
        scale=scale,
    )


def _require_fourth_moment(spec: EnsembleSpec) -> None:
    if classify(spec).regime in ("supercritical", "critical"):
        if not spec.entry_law.matches_fourth_moment:
            raise RegimeError(
                "fourth-moment matching is required at or above the transition"
            )


def universality_gap(
    spec_a: EnsembleSpec, spec_b: EnsembleSpec, power: int, trials: int
) -> float:
    """z-distance between E Tr(V/scale)^power under two entry laws."""
    same_shape = (
        spec_a.n == spec_b.n
        and spec_a.p == spec_b.p
        and spec_a.spikes == spec_b.spikes
        and spec_a.field == spec_b.field
    )
    if not same_shape:
        raise DomainError("specs must differ only in their entry law")
    _require_fourth_moment(spec_a)
    _require_fourth_moment(spec_b)
    scale = moment_scale(spec_a)
    va = _trace_power_samples(spec_a, power, scale, trials)
    vb = _trace_power_samples(spec_b, power, scale, trials)
    se = math.sqrt(va.var(ddof=1) / trials + vb.var(ddof=1) / trials)
    return abs(float(va.mean() - vb.mean())) / se
