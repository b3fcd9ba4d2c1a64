# stabilizer/models.py
"""
Pauli operators in the binary symplectic picture (phases dropped) and the
result types of the threshold Monte Carlo.
"""
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

PAULI_LABELS = 'IXYZ'
_LABEL_OF_BITS = {(0, 0): 'I', (1, 0): 'X', (1, 1): 'Y', (0, 1): 'Z'}


class LogicalVerdict(Enum):
    NO_ERROR = 'NoError'
    LOGICAL_X = 'LogicalX'
    LOGICAL_Z = 'LogicalZ'
    LOGICAL_Y = 'LogicalY'


# Index of each verdict in the integer arrays returned by the batch decoder
VERDICT_CODES = (
    LogicalVerdict.NO_ERROR, LogicalVerdict.LOGICAL_X,
    LogicalVerdict.LOGICAL_Z, LogicalVerdict.LOGICAL_Y,
)


@dataclass(frozen=True, eq=False)
class PauliOp:
    x: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.uint8) % 2
        z = np.asarray(self.z, dtype=np.uint8) % 2
        if x.shape != z.shape or x.ndim != 1:
            raise ValueError("x and z bit vectors must be 1-D and of equal length")
        object.__setattr__(self, 'x', x)
        object.__setattr__(self, 'z', z)

    @classmethod
    def identity(cls, n):
        return cls(np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    @classmethod
    def from_label(cls, label):
        """'XIZY...' → PauliOp."""
        label = label.upper()
        if any(ch not in PAULI_LABELS for ch in label):
            raise ValueError(f"Pauli label may only contain I, X, Y, Z, got '{label}'")
        return cls([ch in 'XY' for ch in label], [ch in 'YZ' for ch in label])

    @classmethod
    def single(cls, n, qubit, kind):
        label = ['I'] * n
        label[qubit] = kind
        return cls.from_label(''.join(label))

    @property
    def n(self):
        return self.x.size

    @property
    def weight(self):
        return int(np.count_nonzero(self.x | self.z))

    @property
    def label(self):
        return ''.join(_LABEL_OF_BITS[(x, z)] for x, z in zip(self.x.tolist(), self.z.tolist()))

    @property
    def bits(self):
        """Symplectic row (x | z)."""
        return np.concatenate([self.x, self.z])

    def commutes_with(self, other):
        return int(np.sum(self.x & other.z) + np.sum(self.z & other.x)) % 2 == 0

    def __mul__(self, other):
        return PauliOp(self.x ^ other.x, self.z ^ other.z)

    def __eq__(self, other):
        if not isinstance(other, PauliOp):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z)

    def __hash__(self):
        return hash((self.x.tobytes(), self.z.tobytes()))

    def __repr__(self):
        return f"PauliOp('{self.label}')"


@dataclass(frozen=True)
class RateEstimate:
    rate: float
    stderr: float
    samples: int
    failures: int
    seed: int = None
    p: float = None

    def as_dict(self):
        return {key: value for key, value in asdict(self).items() if value is not None}


@dataclass(frozen=True)
class ThresholdSweep:
    """Per-p estimates with the fitted p_L ≈ c·p² coefficient."""
    estimates: list
    c: float
    c_stderr: float
    slope: float = None

    @property
    def pseudo_threshold(self):
        return 1.0 / self.c

    def rows(self):
        return [[e.p, e.rate, e.stderr] for e in self.estimates]

    def header(self):
        return ['p', 'logical_rate', 'stderr']

    def summary(self):
        return {
            'c': self.c,
            'c_stderr': self.c_stderr,
            'pseudo_threshold': self.pseudo_threshold,
            'slope': self.slope,
            'seed': self.estimates[0].seed if self.estimates else None,
        }


@dataclass(frozen=True)
class Concatenation:
    rates: list = field(default_factory=list)
    c: float = 1.0

    @property
    def threshold(self):
        return 1.0 / self.c

    @property
    def verdict(self):
        p = self.rates[0]
        if p < self.threshold:
            return 'below threshold'
        if p > self.threshold:
            return 'above threshold'
        return 'at threshold'

    def as_dict(self):
        return {'rates': list(self.rates), 'threshold': self.threshold, 'verdict': self.verdict}
