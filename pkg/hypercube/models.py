# hypercube/models.py
"""
Coarse-grained space-time grid, pulse schedules and per-cell error rates.

``delta_t`` is the QEC cycle time as written in the config. ``cell_time`` and
``spacing`` are the cell extents in cutoff units, filled in by
``GridSpec.with_bath``; with v = Λ = 1 they are Δ and Δ^{1/z}.
"""
import math
from dataclasses import dataclass, field, replace

import numpy as np

from bath.models import CHANNELS
from utils.exceptions import PerturbativeRegimeError


@dataclass(frozen=True)
class GridSpec:
    delta_t: float
    n_cycles: int = 1
    n_qubits: int = 1
    comp_dim: int = 1
    spacing: float = None
    cell_time: float = None

    def __post_init__(self):
        if not (math.isfinite(self.delta_t) and self.delta_t > 0):
            raise ValueError(f"delta_t must be > 0, got {self.delta_t}")
        for name in ('n_cycles', 'n_qubits', 'comp_dim'):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value}")
        if self.spacing is not None and not self.spacing > 0:
            raise ValueError(f"spacing must be > 0, got {self.spacing}")
        if self.cell_time is None:
            object.__setattr__(self, 'cell_time', float(self.delta_t))

    @property
    def side(self):
        """Linear qubit count per lattice direction."""
        return round(self.n_qubits ** (1.0 / self.comp_dim))

    @property
    def is_cubic(self):
        """R = side^D, the layout a lattice sum needs."""
        return self.side ** self.comp_dim == self.n_qubits

    @property
    def n_cells(self):
        """Total hypercube count N·R."""
        return self.n_cycles * self.n_qubits

    @property
    def cell_spacing(self):
        # z = 0 has no intrinsic length; use unit lattice spacing
        return 1.0 if self.spacing is None else self.spacing

    def with_bath(self, bath):
        scale = bath.cutoff * bath.v * self.delta_t
        spacing = None if bath.instantaneous else scale ** (1.0 / bath.z)
        _, cell_time = bath.to_cutoff_units(t=self.delta_t)
        return replace(self, spacing=spacing, cell_time=float(cell_time))


@dataclass(frozen=True)
class PulseSequence:
    n_pulses: int = 0
    schedule: tuple = None

    def __post_init__(self):
        if int(self.n_pulses) != self.n_pulses or self.n_pulses < 0:
            raise ValueError(f"n_pulses must be a non-negative integer, got {self.n_pulses}")
        if self.schedule is not None:
            object.__setattr__(self, 'schedule', tuple(float(t) for t in self.schedule))
            if len(self.schedule) != self.n_pulses:
                raise ValueError(f"schedule has {len(self.schedule)} flip times for n_pulses = {self.n_pulses}")
            if any(later <= earlier for earlier, later in zip(self.schedule, self.schedule[1:])):
                raise ValueError("flip times must be strictly increasing")

    def flip_times(self, delta_t):
        """Flip times inside (0, Δ); equally spaced when no schedule is given."""
        if self.schedule is None:
            return np.arange(1, self.n_pulses + 1) * delta_t / (self.n_pulses + 1)
        self.check_cycle(delta_t)
        return np.asarray(self.schedule, dtype=float)

    def check_cycle(self, delta_t):
        if self.schedule and (self.schedule[0] <= 0 or self.schedule[-1] >= delta_t):
            raise ValueError(f"flip times must lie strictly inside (0, {delta_t:g})")

    def in_cutoff_units(self, bath):
        """Same sequence with the schedule converted to cutoff time units."""
        if self.schedule is None:
            return self
        _, times = bath.to_cutoff_units(t=self.schedule)
        return replace(self, schedule=tuple(times.tolist()))


@dataclass(frozen=True)
class ErrorRates:
    eps: dict
    lambda_star: dict = field(default_factory=dict)

    def __post_init__(self):
        for channel, value in self.eps.items():
            if channel not in CHANNELS:
                raise ValueError(f"unknown channel '{channel}'")
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"eps.{channel} must be >= 0, got {value}")
            if value >= 1:
                raise PerturbativeRegimeError(f"eps.{channel} = {value:g} is not a small parameter")
        if self.total >= 1:
            raise PerturbativeRegimeError(f"total error probability {self.total:g} reached 1")

    @property
    def total(self):
        return math.fsum(self.eps.values())

    @property
    def no_error(self):
        return 1.0 - self.total

    def get(self, channel):
        return self.eps.get(channel, 0.0)

    def vector(self):
        """(ε_x, ε_y, ε_z)."""
        return np.array([self.get(channel) for channel in CHANNELS])

    def as_dict(self):
        return {
            'eps': dict(self.eps),
            'lambda_star': dict(self.lambda_star),
            'total': self.total,
        }

    @classmethod
    def depolarizing(cls, p):
        return cls(eps={channel: p / 3.0 for channel in CHANNELS})
