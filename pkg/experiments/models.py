# experiments/models.py
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ExperimentConfig:
    """
    A validated config document. Domain sections hold built objects
    (NoiseModel, GridSpec, PulseSequence, LatticeSpec); the run-control
    sections stay plain dicts with their defaults filled in.
    """
    noise: object = None
    grid: object = None
    pulses: object = None
    lattice: object = None
    rg: dict = field(default_factory=dict)
    kt: dict = None
    scan: dict = field(default_factory=dict)
    coulomb: dict = None
    threshold: dict = field(default_factory=dict)
    mc: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    @property
    def comp_dim(self):
        return self.grid.comp_dim if self.grid is not None else 1


@dataclass
class Report:
    """
    What a subcommand produced: a table (CSV rows), a summary (JSON) and the
    human-readable lines printed when no format is requested.
    """
    header: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    lines: list = field(default_factory=list)

    def as_dict(self):
        payload = dict(self.summary)
        if self.header:
            payload['rows'] = [dict(zip(self.header, row)) for row in self.rows]
        return payload
