"""Entry-law samplers and assembly of spiked sample covariance matrices.

A draw consists of an n x p matrix X with i.i.d. entries (mean zero,
E|X|^2 = sigma^2, all odd moments vanishing) and the self-adjoint matrix
v = (1/p) S^(1/2) X X* S^(1/2), where S = diag(pi_1, ..., pi_r, 1, ..., 1)
holds the spikes.  Three entry laws are provided:

* gaussian          - the reference law;
* three_point_match - values {-a, 0, +a} with weights {1/6, 2/3, 1/6} per
  real part, where a = s*sqrt(3) and s^2 is the per-part variance; this
  matches the Gaussian moments through order 4;
* rademacher        - signs +-s; deliberately violates the fourth-moment
  matching condition (fourth moment s^4 instead of 3 s^4).

For the complex field the real and imaginary parts are drawn
independently with per-part variance sigma^2 / 2.

Randomness uses the counter-based Philox generator keyed by
(seed, trial_index): every trial owns an independent stream and fills its
matrix in a fixed order (real part first, then the imaginary part,
row-major), so results do not depend on worker scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .errors import DimensionError, DomainError

_LAW_KINDS = ("gaussian", "three_point_match", "rademacher")
_FIELDS = ("real", "complex")


@dataclass(frozen=True)
class EntryLaw:
    """Entry distribution: kind plus the standard-deviation parameter sigma."""

    kind: str
    sigma: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in _LAW_KINDS:
            raise DomainError(f"unknown entry law {self.kind!r}")
        if not self.sigma > 0:
            raise DomainError("sigma must be positive")

    @property
    def matches_fourth_moment(self) -> bool:
        """True for laws whose fourth moment matches the Gaussian one."""
        return self.kind in ("gaussian", "three_point_match")


@dataclass(frozen=True)
class EnsembleSpec:
    """Full description of one random-matrix experiment."""

    n: int
    p: int
    spikes: tuple[float, ...] = ()
    field: str = "complex"
    entry_law: EntryLaw = dataclass_field(default_factory=lambda: EntryLaw("gaussian"))
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1 or self.p < 1:
            raise DimensionError("n and p must be positive")
        if self.p < self.n:
            raise DimensionError(f"need p >= n, got n={self.n}, p={self.p}")
        object.__setattr__(self, "spikes", tuple(float(s) for s in self.spikes))
        if len(self.spikes) > self.n:
            raise DimensionError("more spikes than rows")
        if any(s <= 1 for s in self.spikes):
            raise DomainError("spikes must be strictly greater than 1")
        if list(self.spikes) != sorted(self.spikes, reverse=True):
            raise DomainError("spikes must be sorted in decreasing order")
        if self.field not in _FIELDS:
            raise DomainError(f"unknown field {self.field!r}")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must fit in 64 unsigned bits")

    @property
    def gamma_n(self) -> float:
        return self.p / self.n

    @property
    def is_white(self) -> bool:
        return not self.spikes


@dataclass(frozen=True)
class MatrixDraw:
    """One sampled matrix pair (X, v); arrays are frozen after assembly."""

    x: np.ndarray
    v: np.ndarray


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent counter-based stream for one Monte Carlo trial."""
    return np.random.Generator(np.random.Philox(key=np.array([seed, trial], dtype=np.uint64)))


def _part_sample(kind: str, s: float, rng: np.random.Generator, shape) -> np.ndarray:
    """One real part with standard deviation s, in a fixed draw order."""
    if kind == "gaussian":
        return s * rng.standard_normal(shape)
    u = rng.random(shape)
    if kind == "three_point_match":
        a = s * math.sqrt(3.0)
        return np.where(u < 1 / 6, -a, np.where(u < 5 / 6, 0.0, a))
    return np.where(u < 0.5, -s, s)  # rademacher


def sample_entry(law: EntryLaw, field: str, rng_state: np.random.Generator):
    """Draw a single matrix entry; complex parts are independent."""
    if field not in _FIELDS:
        raise DomainError(f"unknown field {field!r}")
    if field == "real":
        return float(_part_sample(law.kind, law.sigma, rng_state, ()))
    s = law.sigma / math.sqrt(2.0)
    re = float(_part_sample(law.kind, s, rng_state, ()))
    im = float(_part_sample(law.kind, s, rng_state, ()))
    return complex(re, im)


def build_matrix(spec: EnsembleSpec, rng_state: np.random.Generator) -> MatrixDraw:
    """Assemble X and v = (1/p) S^(1/2) X X* S^(1/2) for one draw.

    The spike scaling is a row scaling since S is diagonal; v is
    symmetrized after assembly so it is exactly self-adjoint.
    """
    if spec.p < spec.n:
        raise DimensionError(f"need p >= n, got n={spec.n}, p={spec.p}")
    law = spec.entry_law
    shape = (spec.n, spec.p)
    if spec.field == "real":
        x = _part_sample(law.kind, law.sigma, rng_state, shape)
    else:
        s = law.sigma / math.sqrt(2.0)
        re = _part_sample(law.kind, s, rng_state, shape)
        im = _part_sample(law.kind, s, rng_state, shape)
        x = re + 1j * im
    y = x.copy()
    for i, pi in enumerate(spec.spikes):
        y[i] *= math.sqrt(pi)
    v = y @ y.conj().T / spec.p
    v = (v + v.conj().T) / 2
    x.setflags(write=False)
    v.setflags(write=False)
    return MatrixDraw(x=x, v=v)
