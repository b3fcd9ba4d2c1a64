# probability/models.py
from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class PmBreakdown:
    m: int
    stochastic: float
    pair_correction: float
    ratio: float

    @property
    def total(self):
        return self.stochastic + self.pair_correction

    def as_dict(self):
        return {**asdict(self), 'total': self.total}


@dataclass(frozen=True)
class ScanRow:
    """One lattice size of a scaling scan: pair sum, its ratio to the stochastic term, and the excess."""
    L: int
    n_cells: int
    sum: float
    ratio: float
    excess: float

    @property
    def per_cell(self):
        return self.sum / self.n_cells


@dataclass(frozen=True)
class ScalingFit:
    slope: float
    stderr: float
    intercept: float
    n_points: int
    verdict: str = ''

    def as_dict(self):
        return asdict(self)
