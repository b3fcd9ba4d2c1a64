# utils/exceptions.py
"""
Exception hierarchy shared by every app.

``ModelValidityError`` and its subclasses mean the noise model is outside the
regime where the construction applies; the CLI maps them to exit status 2.
"""


class ResilienceError(Exception):
    """Base class for all project errors."""


class ModelValidityError(ResilienceError):
    """The model cannot be treated perturbatively."""


class PerturbativeRegimeError(ModelValidityError):
    """An error probability (or their total) reached 1."""


class DivergedFlowError(ModelValidityError):
    """An RG flow crossed the blow-up bound before reaching its target scale."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class GridScaleError(ModelValidityError):
    """The QEC grid scale is not below the bath cutoff (Λ v Δ ≤ 1)."""


class QuadratureError(ModelValidityError):
    """Adaptive quadrature did not reach the requested tolerance."""


class NonFiniteFlowError(ModelValidityError):
    """An RG integration produced NaN."""


class RelevantFlowError(ModelValidityError):
    """At least one channel flows to strong coupling; resilience is not provable."""


class BudgetExceededError(ResilienceError, ValueError):
    """An enumeration or direct lattice sum is larger than its budget."""
