# coulombgas/models.py
from dataclasses import asdict, dataclass, field
from enum import Enum

MIN_SIDE, MAX_SIDE = 2, 64


@dataclass(frozen=True)
class LatticeSpec:
    side: int
    coupling: float
    fugacity: float
    core: int = 1

    def __post_init__(self):
        if int(self.side) != self.side or not MIN_SIDE <= self.side <= MAX_SIDE:
            raise ValueError(f"side must be an integer in [{MIN_SIDE}, {MAX_SIDE}], got {self.side}")
        if not self.coupling > 0:
            raise ValueError(f"coupling K must be > 0, got {self.coupling}")
        if not self.fugacity >= 0:
            raise ValueError(f"fugacity must be >= 0, got {self.fugacity}")
        if self.core != 1:
            raise ValueError("only a unit hard core (one charge per site) is supported")

    @property
    def n_sites(self):
        return self.side * self.side

    def wrap(self, site):
        return (site[0] % self.side, site[1] % self.side)


@dataclass(frozen=True)
class ChargeConfig:
    """Signed unit charges keyed by lattice site (x, y)."""
    charges: dict = field(default_factory=dict)

    def __post_init__(self):
        for site, q in self.charges.items():
            if q not in (1, -1):
                raise ValueError(f"charge at {site} must be +1 or -1, got {q}")
        if self.net != 0:
            raise ValueError(f"configuration is not neutral (net charge {self.net})")

    @classmethod
    def from_charges(cls, items):
        """Build from (site, q) pairs; a site may hold one charge only."""
        charges = {}
        for site, q in items:
            site = tuple(site)
            if site in charges:
                raise ValueError(f"overlapping charges at {site}")
            charges[site] = q
        return cls(charges)

    @property
    def net(self):
        return sum(self.charges.values())

    @property
    def n_pairs(self):
        return sum(1 for q in self.charges.values() if q > 0)

    def sites(self, sign):
        return [site for site, q in self.charges.items() if q == sign]

    def conjugate(self):
        return ChargeConfig({site: -q for site, q in self.charges.items()})


@dataclass(frozen=True)
class GasObservables:
    """Mean pair count and mean squared separation of matched (+, −) pairs."""
    mean_pairs: float
    mean_r2: float
    stderr_pairs: float = 0.0
    stderr_r2: float = 0.0
    samples: int = 0
    seed: int = None
    partition: float = None

    def as_dict(self):
        return {key: value for key, value in asdict(self).items() if value is not None}


class MoveKind(Enum):
    INSERT = 'insert'
    DELETE = 'delete'
    DISPLACE = 'displace'


@dataclass(frozen=True)
class Move:
    kind: MoveKind
    first: tuple
    second: tuple
