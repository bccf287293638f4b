"""Phase-transition constants, the Marchenko-Pastur law, and regime tests.

All quantities derive from the aspect ratio gamma_N = p / n >= 1 and the
entry variance sigma^2:

* bulk edges        u_pm  = sigma^2 (1 +- gamma^(-1/2))^2
* critical spike    w_c   = 1 + gamma^(-1/2)
* spike location    tau(pi_1)   = sigma^2 pi_1 (1 + gamma^(-1) / (pi_1 - 1))
* spike scale       sigma(pi_1) = sigma^2 pi_1 sqrt(1 - gamma^(-1) / (pi_1 - 1)^2)
* edge centering    rho_N = sigma^2 (1 + gamma_N^(-1/2))^2
* edge scale        sigma_N = gamma_N^(-1/2) sigma^2 (1 + gamma_N^(-1/2))^(4/3)

A spike pi_1 > w_c detaches from the bulk (its top eigenvalue fluctuates
on scale N^(-1/2) around tau(pi_1)); pi_1 = w_c is critical and
pi_1 < w_c leaves the largest eigenvalue at the bulk edge u_plus with
N^(-2/3) fluctuations.  All finite-N formulas use gamma_N, never a
limiting ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

from .errors import DomainError
from .ensembles import EnsembleSpec

REGIMES = ("supercritical", "critical", "subcritical")
LAWS = ("gaussian_gk", "bbp_fk", "tracy_widom")


@dataclass(frozen=True)
class PhaseQuantities:
    """Closed-form constants of one ensemble; tau and sigma_pi are None
    when there is no spike (and sigma_pi also when pi_1 < w_c, where the
    formula leaves the real axis)."""

    u_plus: float
    u_minus: float
    w_c: float
    tau: float | None
    sigma_pi: float | None
    rho_n: float
    sigma_n: float


@dataclass(frozen=True)
class RegimeReport:
    """Per-spike regimes plus the prediction for the leading eigenvalue."""

    regimes: tuple[str, ...]
    k: int
    law: str

    @property
    def regime(self) -> str:
        """Regime of the leading spike; white ensembles read subcritical."""
        return self.regimes[0] if self.regimes else "subcritical"


def phase_quantities(spec: EnsembleSpec) -> PhaseQuantities:
    """All phase constants of the ensemble, from gamma_N = p/n."""
    sigma2 = spec.entry_law.sigma**2
    inv_sqrt = math.sqrt(spec.n / spec.p)
    u_plus = sigma2 * (1 + inv_sqrt) ** 2
    u_minus = sigma2 * (1 - inv_sqrt) ** 2
    w_c = 1 + inv_sqrt
    rho_n = sigma2 * (1 + inv_sqrt) ** 2
    sigma_n = inv_sqrt * sigma2 * (1 + inv_sqrt) ** (4 / 3)
    tau = None
    sigma_pi = None
    if spec.spikes:
        pi1 = spec.spikes[0]
        inv_gamma = spec.n / spec.p
        tau = sigma2 * pi1 * (1 + inv_gamma / (pi1 - 1))
        disc = 1 - inv_gamma / (pi1 - 1) ** 2
        if disc >= 0:
            sigma_pi = sigma2 * pi1 * math.sqrt(disc)
    return PhaseQuantities(
        u_plus=u_plus,
        u_minus=u_minus,
        w_c=w_c,
        tau=tau,
        sigma_pi=sigma_pi,
        rho_n=rho_n,
        sigma_n=sigma_n,
    )


def mp_density(x: float, sigma: float, gamma: float) -> float:
    """Marchenko-Pastur density at x (zero off the support)."""
    sigma2 = sigma**2
    inv_sqrt = math.sqrt(1 / gamma)
    lo = sigma2 * (1 - inv_sqrt) ** 2
    hi = sigma2 * (1 + inv_sqrt) ** 2
    if x <= lo or x >= hi:
        return 0.0
    return gamma / (2 * math.pi * x * sigma2) * math.sqrt((hi - x) * (x - lo))


def mp_cdf(x: float, sigma: float, gamma: float) -> float:
    """CDF of the Marchenko-Pastur law by adaptive quadrature."""
    if gamma < 1:
        raise DomainError("need gamma >= 1")
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    sigma2 = sigma**2
    inv_sqrt = math.sqrt(1 / gamma)
    lo = sigma2 * (1 - inv_sqrt) ** 2
    hi = sigma2 * (1 + inv_sqrt) ** 2
    if x <= lo:
        return 0.0
    if x >= hi:
        return 1.0
    mass, _ = integrate.quad(mp_density, lo, x, args=(sigma, gamma), limit=200)
    return min(1.0, max(0.0, mass))


def classify(spec: EnsembleSpec, tol: float = 1e-12) -> RegimeReport:
    """Regime of every spike and the predicted law of the top eigenvalue.

    Ties against w_c are decided with relative tolerance tol; pass tol=0
    for exact comparison of exactly representable inputs.
    """
    w_c = 1 + math.sqrt(spec.n / spec.p)
    band = tol * max(1.0, w_c)
    regimes = []
    for pi in spec.spikes:
        if pi > w_c + band:
            regimes.append("supercritical")
        elif pi < w_c - band:
            regimes.append("subcritical")
        else:
            regimes.append("critical")
    if not regimes:
        return RegimeReport(regimes=(), k=0, law="tracy_widom")
    pi1 = spec.spikes[0]
    k = sum(1 for pi in spec.spikes if abs(pi - pi1) <= tol * max(1.0, pi1))
    law = {
        "supercritical": "gaussian_gk",
        "critical": "bbp_fk",
        "subcritical": "tracy_widom",
    }[regimes[0]]
    return RegimeReport(regimes=tuple(regimes), k=k, law=law)


def as_limit(spec: EnsembleSpec) -> float:
    """Almost-sure limit of the largest eigenvalue."""
    q = phase_quantities(spec)
    if spec.spikes and spec.spikes[0] > q.w_c:
        assert q.tau is not None
        return q.tau
    return q.u_plus


def critical_pi1(n: int, p: int) -> float:
    """The exactly critical spike 1 + sqrt(n/p) for integer shapes.

    Only shapes whose ratio has an exactly representable square root are
    accepted, so that criticality is an exact float identity rather than
    an approximation.
    """
    if n < 1 or p < n:
        raise DomainError("need p >= n >= 1")
    ratio = n / p
    root = math.sqrt(ratio)
    if root * root != ratio:
        raise DomainError(f"sqrt({n}/{p}) is not exactly representable")
    return 1 + root
