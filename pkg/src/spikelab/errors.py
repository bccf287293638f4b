"""Exception hierarchy shared by all spikelab modules."""

from __future__ import annotations


class SpikeLabError(Exception):
    """Base class for all errors raised by spikelab."""


class DimensionError(SpikeLabError):
    """Matrix dimensions violate a contract (e.g. fewer columns than rows)."""


class ConvergenceError(SpikeLabError):
    """An iterative eigensolver failed to converge."""


class RegimeError(SpikeLabError):
    """A rescaling or classification was requested outside its regime."""


class DomainError(SpikeLabError):
    """An argument lies outside the supported numerical domain."""


class QuadratureError(SpikeLabError):
    """A quadrature result failed its internal convergence check."""


class ODEError(SpikeLabError):
    """The Painleve II integrator failed."""


class StructureError(SpikeLabError):
    """A path or walk violates a structural precondition (parity, closure)."""


class SupportError(SpikeLabError):
    """A discrete law was evaluated outside its support."""
