"""Exact generating functions for weighted Dyck-path counts.

Weights: each odd marked instant of a path carries 1/gamma in G, each even
marked instant carries 1/gamma in G_tilde, and F additionally weights
returns to zero by pi1 (with one global pi1 prefactor).  The series obey

    G_tilde = 1 + z * G * G_tilde
    G       = 1 + (1/gamma) * z * G_tilde * G
    F       = pi1 + pi1 * z * G * F

and K = z * d/dz (z * G) counts rooted first excursions.  The product
H = F * K generates the weighted path sums a_n whose growth rate switches
at the spike phase transition.  All coefficients are exact rationals;
floats appear only in a_prime and growth diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DomainError

_MAX_ORDER = 400


@dataclass(frozen=True)
class Series:
    """Truncated power series in z with exact rational coefficients.

    Arithmetic truncates to the shorter operand; parameters record the
    (pi1, gamma) evaluation point and are carried from the left operand.
    """

    coeffs: tuple[Fraction, ...]
    gamma: Fraction = field(default=Fraction(1))
    pi1: Fraction | None = None

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, n: int) -> Fraction:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else Fraction(0)

    def _wrap(self, coeffs: Sequence[Fraction]) -> "Series":
        return Series(tuple(coeffs), self.gamma, self.pi1)

    def __add__(self, other: "Series") -> "Series":
        k = min(len(self.coeffs), len(other.coeffs))
        return self._wrap([self.coeffs[i] + other.coeffs[i] for i in range(k)])

    def __sub__(self, other: "Series") -> "Series":
        k = min(len(self.coeffs), len(other.coeffs))
        return self._wrap([self.coeffs[i] - other.coeffs[i] for i in range(k)])

    def __mul__(self, other: "Series") -> "Series":
        k = min(len(self.coeffs), len(other.coeffs))
        out = [Fraction(0)] * k
        for i, ci in enumerate(self.coeffs[:k]):
            if not ci:
                continue
            for j in range(k - i):
                cj = other.coeffs[j]
                if cj:
                    out[i + j] += ci * cj
        return self._wrap(out)

    def scale(self, c: Fraction | int) -> "Series":
        c = Fraction(c)
        return self._wrap([c * x for x in self.coeffs])

    def times_z(self) -> "Series":
        """Multiply by z, keeping the truncation order."""
        return self._wrap((Fraction(0),) + self.coeffs[:-1])

    def differentiate(self) -> "Series":
        return self._wrap(
            [Fraction(n) * self.coeffs[n] for n in range(1, len(self.coeffs))]
        )

    def divide_by_unit(self, other: "Series") -> "Series":
        """Exact long division; the divisor needs a nonzero constant term."""
        if not other.coeffs[0]:
            raise DomainError("division requires a unit (nonzero constant term)")
        k = min(len(self.coeffs), len(other.coeffs))
        out: list[Fraction] = []
        inv0 = Fraction(1) / other.coeffs[0]
        for n in range(k):
            acc = self.coeffs[n]
            for j in range(1, n + 1):
                acc -= other.coeffs[j] * out[n - j]
            out.append(acc * inv0)
        return self._wrap(out)

    def constant_like(self, value: Fraction | int) -> "Series":
        coeffs = [Fraction(0)] * len(self.coeffs)
        coeffs[0] = Fraction(value)
        return self._wrap(coeffs)


@dataclass(frozen=True)
class SeriesCoeffs:
    """Coefficients a_n of H = F * K and their sigma-rescaled companions.

    a_prime[n] = sigma^(2n) * a[n] as floats, the sequence whose growth
    rate distinguishes the spike regimes.
    """

    a: tuple[Fraction, ...]
    a_prime: tuple[float, ...]
    pi1: Fraction
    gamma: Fraction
    sigma: float


def _check_order(n_max: int) -> None:
    if not 0 <= n_max <= _MAX_ORDER:
        raise DomainError(f"series order must lie in [0, {_MAX_ORDER}]")


def _g_pair(gamma: Fraction, n_max: int) -> tuple[list[Fraction], list[Fraction]]:
    """Coefficients of G and G_tilde by the coupled fixed-point recurrences."""
    ginv = Fraction(1) / Fraction(gamma)
    g = [Fraction(1)]
    gt = [Fraction(1)]
    for n in range(1, n_max + 1):
        gt.append(sum((g[a] * gt[n - 1 - a] for a in range(n)), Fraction(0)))
        g.append(ginv * sum((gt[a] * g[n - 1 - a] for a in range(n)), Fraction(0)))
    return g, gt


def series_G(gamma: Fraction | int, n_max: int) -> Series:
    """Odd-marked-weighted path series; gamma=1 gives the Catalan numbers."""
    _check_order(n_max)
    gamma = Fraction(gamma)
    g, _ = _g_pair(gamma, n_max)
    return Series(tuple(g), gamma)


def series_G_tilde(gamma: Fraction | int, n_max: int) -> Series:
    """Even-marked-weighted path series."""
    _check_order(n_max)
    gamma = Fraction(gamma)
    _, gt = _g_pair(gamma, n_max)
    return Series(tuple(gt), gamma)


def series_F(pi1: Fraction | int, gamma: Fraction | int, n_max: int) -> Series:
    """Return-weighted path series with global prefactor pi1."""
    _check_order(n_max)
    pi1, gamma = Fraction(pi1), Fraction(gamma)
    g, _ = _g_pair(gamma, n_max)
    f = [pi1]
    for n in range(1, n_max + 1):
        f.append(pi1 * sum((g[a] * f[n - 1 - a] for a in range(n)), Fraction(0)))
    return Series(tuple(f), gamma, pi1)


def series_K(gamma: Fraction | int, n_max: int) -> Series:
    """K = z * d/dz (z * G): rooted excursions with origin multiplicity."""
    _check_order(n_max)
    gamma = Fraction(gamma)
    g, _ = _g_pair(gamma, n_max - 1 if n_max else 0)
    k = [Fraction(0)] + [Fraction(n) * g[n - 1] for n in range(1, n_max + 1)]
    return Series(tuple(k), gamma)


def coeffs_a(
    pi1: Fraction | int,
    gamma: Fraction | int,
    sigma: float,
    n_max: int,
) -> SeriesCoeffs:
    """Coefficients of H = F * K and the rescaled sequence a'_n."""
    _check_order(n_max)
    pi1, gamma = Fraction(pi1), Fraction(gamma)
    h = series_F(pi1, gamma, n_max) * series_K(gamma, n_max)
    a = h.coeffs
    a_prime = tuple(float(sigma) ** (2 * n) * float(a[n]) for n in range(len(a)))
    return SeriesCoeffs(a, a_prime, pi1, gamma, float(sigma))


def growth_rate(coeffs: SeriesCoeffs, window: int) -> float:
    """Averaged ratio a'_{n+1} / a'_n over the trailing window."""
    n_max = len(coeffs.a_prime) - 1
    if window < 1 or n_max < 2 * window:
        raise DomainError("need 1 <= window and n_max >= 2 * window")
    ratios = [
        coeffs.a_prime[n + 1] / coeffs.a_prime[n]
        for n in range(n_max - window, n_max)
    ]
    return sum(ratios) / window


def corrected_tail(coeffs: SeriesCoeffs, u_plus: float, count: int) -> list[float]:
    """Trailing values of sqrt(n) * a'_n / u_plus^n.

    In the regime where a'_n grows like u_plus^n / sqrt(n) this sequence
    stabilizes at a positive constant; its stability is the diagnostic,
    the constant itself is not pinned down.
    """
    n_max = len(coeffs.a_prime) - 1
    if count < 1 or count > n_max:
        raise DomainError("count must lie in [1, n_max]")
    out = []
    for n in range(n_max - count + 1, n_max + 1):
        out.append(n**0.5 * coeffs.a_prime[n] / u_plus**n)
    return out
