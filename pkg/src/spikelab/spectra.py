"""Eigenvalue extraction and regime-specific recentering of the spectrum.

The top eigenvalues are compared to their limit laws through one of two
affine maps, both built from finite-N quantities (gamma_N = p/n):

* supercritical: xi = sqrt(N) (lambda - tau(pi_1)) / sigma(pi_1), with an
  extra sqrt(2) in the denominator over the reals;
* critical and subcritical: xi = N^(2/3) (lambda - rho_N) / sigma_N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionError, DomainError, RegimeError
from .ensembles import EnsembleSpec, MatrixDraw
from .phase import REGIMES, phase_quantities


@dataclass(frozen=True)
class EigenSample:
    """All eigenvalues of one draw, sorted descending."""

    lambdas: tuple[float, ...]


@dataclass(frozen=True)
class RescaledSample:
    """Top eigenvalues after the regime-specific affine map."""

    regime: str
    xi: tuple[float, ...]


def eigenvalues(draw: MatrixDraw, via_real_embedding: bool = False) -> EigenSample:
    """Full spectrum of the self-adjoint matrix v, descending.

    With via_real_embedding a complex Hermitian v is diagonalized as the
    real-symmetric matrix [[Re v, -Im v], [Im v, Re v]] of doubled
    dimension; each eigenvalue then appears twice and the adjacent pairs
    are collapsed by averaging.
    """
    v = draw.v
    try:
        if via_real_embedding and np.iscomplexobj(v):
            doubled = np.block(
                [[v.real, -v.imag], [v.imag, v.real]]
            )
            spectrum = np.linalg.eigvalsh(doubled)[::-1]
            top = max(abs(spectrum[0]), abs(spectrum[-1]), 1.0)
            pairs = spectrum.reshape(-1, 2)
            gaps = np.abs(pairs[:, 0] - pairs[:, 1])
            if np.any(gaps >= 1e-6 * top):
                raise ConvergenceError("doubled eigenvalues failed to pair up")
            spectrum = pairs.mean(axis=1)
        else:
            spectrum = np.linalg.eigvalsh(v)[::-1]
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver failed: {exc}") from exc
    return EigenSample(lambdas=tuple(float(x) for x in spectrum))


def companion_matrix(draw: MatrixDraw, spec: EnsembleSpec) -> np.ndarray:
    """The p x p companion (1/p) X* S X sharing v's nonzero spectrum."""
    y = draw.x.copy()
    for i, pi in enumerate(spec.spikes):
        y[i] *= math.sqrt(pi)
    return y.conj().T @ y / spec.p


def rescale(
    sample: EigenSample, spec: EnsembleSpec, regime: str, k_top: int
) -> RescaledSample:
    """Map the top k_top eigenvalues onto the regime's fluctuation scale."""
    if regime not in REGIMES:
        raise DomainError(f"unknown regime {regime!r}")
    if not 1 <= k_top <= spec.n:
        raise DimensionError(f"need 1 <= k_top <= n, got {k_top}")
    q = phase_quantities(spec)
    top = sample.lambdas[:k_top]
    if regime == "supercritical":
        if q.tau is None or q.sigma_pi is None:
            raise RegimeError("supercritical scaling needs a spike with real sigma(pi_1)")
        if q.sigma_pi == 0:
            raise RegimeError("sigma(pi_1) vanishes at exact criticality")
        denom = q.sigma_pi * (math.sqrt(2.0) if spec.field == "real" else 1.0)
        xi = tuple(math.sqrt(spec.n) * (lam - q.tau) / denom for lam in top)
    else:
        xi = tuple(spec.n ** (2 / 3) * (lam - q.rho_n) / q.sigma_n for lam in top)
    return RescaledSample(regime=regime, xi=xi)
