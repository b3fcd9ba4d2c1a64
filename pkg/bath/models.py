# bath/models.py
"""
Domain models for the environment. Plain dataclasses, nothing is stored in
the database.

Lengths and times are given in config units; ``BathSpec.to_cutoff_units``
rescales them by the cutoff Λ and velocity v. With the defaults v = Λ = 1 the
two coincide.
"""
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.interpolate import RegularGridInterpolator

CHANNELS = ('x', 'y', 'z')


def _check_finite(name, value):
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")


@dataclass(frozen=True)
class BathSpec:
    z: float
    v: float = 1.0
    cutoff: float = 1.0
    delta: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ('z', 'v', 'cutoff'):
            _check_finite(name, getattr(self, name))
        if self.z < 0:
            raise ValueError(f"z must be >= 0, got {self.z}")
        if self.v <= 0:
            raise ValueError(f"v must be > 0, got {self.v}")
        if self.cutoff <= 0:
            raise ValueError(f"cutoff must be > 0, got {self.cutoff}")
        for channel, value in self.delta.items():
            if channel not in CHANNELS:
                raise ValueError(f"unknown channel '{channel}' in delta")
            _check_finite(f"delta.{channel}", value)
            if value < 0:
                raise ValueError(f"delta.{channel} must be >= 0, got {value}")

    @property
    def instantaneous(self):
        """z = 0: correlators carry no time dependence."""
        return self.z == 0

    @property
    def channels(self):
        return tuple(channel for channel in CHANNELS if channel in self.delta)

    def to_cutoff_units(self, x=0.0, t=0.0):
        """Return (x·Λ/v, t·Λ)."""
        return np.asarray(x, dtype=float) * self.cutoff / self.v, np.asarray(t, dtype=float) * self.cutoff


def _coefficient_matrix(name, table):
    matrix = np.zeros((len(CHANNELS), len(CHANNELS)))
    for row, columns in (table or {}).items():
        if row not in CHANNELS:
            raise ValueError(f"unknown channel '{row}' in {name}")
        for column, value in columns.items():
            if column not in CHANNELS:
                raise ValueError(f"unknown channel '{column}' in {name}.{row}")
            _check_finite(f"{name}.{row}.{column}", value)
            matrix[CHANNELS.index(row), CHANNELS.index(column)] = value
    return matrix


@dataclass(frozen=True)
class NoiseModel:
    bath: BathSpec
    couplings: dict = field(default_factory=dict)
    beta_g: dict = field(default_factory=dict)
    beta_h: dict = field(default_factory=dict)

    def __post_init__(self):
        for channel, value in self.couplings.items():
            if channel not in self.bath.delta:
                raise ValueError(f"lambda.{channel} given for a channel without a scaling dimension")
            _check_finite(f"lambda.{channel}", value)
            if value < 0:
                raise ValueError(f"lambda.{channel} must be >= 0, got {value}")
        # validates the tables
        self.g_matrix()
        self.h_matrix()

    @property
    def channels(self):
        return self.bath.channels

    def coupling_vector(self):
        """Bare couplings in (x, y, z) order; undeclared channels are 0."""
        return np.array([self.couplings.get(channel, 0.0) for channel in CHANNELS])

    def g_matrix(self):
        return _coefficient_matrix('beta_g', self.beta_g)

    def h_matrix(self):
        return _coefficient_matrix('beta_h', self.beta_h)


class CorrelatorKind(Enum):
    POWER_LAW = 'PowerLaw'
    CONSTANT = 'Constant'
    USER_TABLE = 'UserTable'


class CorrelatorTable:
    """
    User-sampled C(|x|, |t|) on a rectangular grid, linearly interpolated.
    Zero outside the grid. ``times=None`` gives an equal-time table (z = 0).
    """

    def __init__(self, radii, values, times=None):
        self.radii = np.asarray(radii, dtype=float)
        self.values = np.asarray(values, dtype=float)
        self.times = None if times is None else np.asarray(times, dtype=float)
        if self.radii.ndim != 1 or np.any(np.diff(self.radii) <= 0) or self.radii[0] != 0:
            raise ValueError("radii must start at 0 and increase strictly")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("table values must be finite")
        if self.times is None:
            if self.values.shape != self.radii.shape:
                raise ValueError("values must match radii for an equal-time table")
            self._interpolator = None
        else:
            if self.times.ndim != 1 or np.any(np.diff(self.times) <= 0) or self.times[0] != 0:
                raise ValueError("times must start at 0 and increase strictly")
            if self.values.shape != (self.radii.size, self.times.size):
                raise ValueError("values must have shape (len(radii), len(times))")
            self._interpolator = RegularGridInterpolator(
                (self.radii, self.times), self.values, bounds_error=False, fill_value=0.0,
            )

    def __call__(self, r, t):
        r = np.asarray(r, dtype=float)
        if self._interpolator is None:
            return np.interp(r, self.radii, self.values, right=0.0)
        r, t = np.broadcast_arrays(r, np.abs(np.asarray(t, dtype=float)))
        points = np.stack([r, t], axis=-1)
        return self._interpolator(points)


@dataclass(frozen=True, eq=False)
class Correlator:
    delta: float
    z: float
    kind: CorrelatorKind = CorrelatorKind.POWER_LAW
    table: CorrelatorTable = None

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")
        if self.z < 0:
            raise ValueError(f"z must be >= 0, got {self.z}")
        if self.kind is CorrelatorKind.USER_TABLE and self.table is None:
            raise ValueError("a UserTable correlator needs a table")

    @property
    def instantaneous(self):
        return self.z == 0

    @classmethod
    def power_law(cls, delta, z=1.0):
        return cls(delta=delta, z=z)

    @classmethod
    def constant(cls, z=1.0):
        return cls(delta=0.0, z=z, kind=CorrelatorKind.CONSTANT)

    @classmethod
    def user_table(cls, radii, values, times=None, z=1.0, delta=0.0):
        if times is None and z != 0:
            raise ValueError("an equal-time table is only valid for z = 0")
        return cls(delta=delta, z=z, kind=CorrelatorKind.USER_TABLE, table=CorrelatorTable(radii, values, times))

    @classmethod
    def for_channel(cls, bath, channel):
        if channel not in bath.delta:
            raise ValueError(f"channel '{channel}' has no scaling dimension")
        return cls.power_law(bath.delta[channel], bath.z)
