# rg/models.py
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class Verdict(Enum):
    RELEVANT = 'Relevant'
    IRRELEVANT = 'Irrelevant'
    MARGINAL = 'Marginal'


class KTPhase(Enum):
    BOUND = 'Bound'
    UNBOUND = 'Unbound'
    UNDETERMINED = 'Undetermined'


@dataclass(frozen=True)
class Classification:
    exponent: float
    verdict: Verdict

    def __str__(self):
        return f"{self.verdict.value}, exponent = {self.exponent:g}"


@dataclass(eq=False)
class FlowTrajectory:
    """Sampled RG flow: ``ell`` has shape (k,), ``couplings`` shape (k, channels)."""
    ell: np.ndarray
    couplings: np.ndarray
    diverged: bool = False
    labels: tuple = ('x', 'y', 'z')

    @property
    def samples(self):
        return list(zip(self.ell.tolist(), self.couplings))

    @property
    def terminal(self):
        return self.couplings[-1]

    def rows(self):
        return [[ell, *values] for ell, values in zip(self.ell.tolist(), self.couplings.tolist())]

    def header(self):
        return ['ell', *(f"lambda_{label}" for label in self.labels)]


@dataclass(eq=False)
class KTTrajectory:
    ell: np.ndarray
    x: np.ndarray
    y: np.ndarray
    phase: KTPhase = KTPhase.UNDETERMINED
    extras: dict = field(default_factory=dict)

    @property
    def invariant(self):
        """x² − y², constant along the exact flow."""
        return self.x**2 - self.y**2

    def rows(self):
        return [[ell, x, y] for ell, x, y in zip(self.ell.tolist(), self.x.tolist(), self.y.tolist())]

    def header(self):
        return ['ell', 'x', 'y']
