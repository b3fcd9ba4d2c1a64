# coulombgas/sampler.py
"""
Grand-canonical Metropolis sampler for the neutral Coulomb gas.

Each attempt picks one of three moves with probability 1/3:
- insert: an ordered pair of distinct empty sites gets (+, −);
- delete: a uniformly chosen + and a uniformly chosen − are removed;
- displace: a uniformly chosen charge hops to one of its 4 neighbours.
Acceptance is min(1, e^{log_ratio}) with the proposal asymmetry of
insert/delete folded into ``log_ratio``. One sweep is side² attempts.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from utils.seeding import task_rng
from .energy import energy, matched_r2, pair_energy
from .models import ChargeConfig, GasObservables, Move, MoveKind

logger = logging.getLogger(__name__)

NEIGHBOURS = ((1, 0), (-1, 0), (0, 1), (0, -1))
N_BATCHES = 20


def _log_fugacity_squared(y):
    return -math.inf if y == 0 else 2 * math.log(y)


def log_weight(spec, config):
    """ln[y^{2n} e^{−E}]."""
    n = config.n_pairs
    if n == 0:
        return 0.0
    return n * _log_fugacity_squared(spec.fugacity) - energy(spec, config)


class MetropolisSampler:
    def __init__(self, spec, rng, max_pairs=None, initial=None):
        self.spec = spec
        self.rng = rng
        self.max_pairs = max_pairs
        self.charges = dict((initial or ChargeConfig()).charges)
        if max_pairs is not None and self.n_pairs > max_pairs:
            raise ValueError(f"initial state has more than {max_pairs} pairs")
        self.accepted = 0
        self.attempted = 0

    @property
    def n_pairs(self):
        return len(self.charges) // 2

    @property
    def config(self):
        return ChargeConfig(dict(self.charges))

    def _others(self, exclude):
        items = [(site, q) for site, q in self.charges.items() if site not in exclude]
        return [site for site, _ in items], [q for _, q in items]

    def _empty_count(self):
        return self.spec.n_sites - len(self.charges)

    def _random_empty(self, taken):
        while True:
            site = (int(self.rng.integers(self.spec.side)), int(self.rng.integers(self.spec.side)))
            if site not in self.charges and site not in taken:
                return site

    def _random_charge(self, sign=None):
        sites = [site for site, q in self.charges.items() if sign is None or q == sign]
        return sites[int(self.rng.integers(len(sites)))]

    def propose(self):
        """Draw a move, or None when the chosen move type is impossible in this state."""
        kind = (MoveKind.INSERT, MoveKind.DELETE, MoveKind.DISPLACE)[int(self.rng.integers(3))]
        if kind is MoveKind.INSERT:
            if self._empty_count() < 2:
                return None
            plus = self._random_empty(())
            return Move(kind, plus, self._random_empty((plus,)))
        if not self.charges:
            return None
        if kind is MoveKind.DELETE:
            return Move(kind, self._random_charge(1), self._random_charge(-1))
        site = self._random_charge()
        dx, dy = NEIGHBOURS[int(self.rng.integers(4))]
        return Move(kind, site, self.spec.wrap((site[0] + dx, site[1] + dy)))

    def log_ratio(self, move):
        """ln of the Metropolis-Hastings ratio for ``move`` from the current state."""
        spec = self.spec
        n, empty = self.n_pairs, self._empty_count()
        if move.kind is MoveKind.INSERT:
            if self.max_pairs is not None and n >= self.max_pairs:
                return -math.inf
            sites, charges = self._others(())
            delta_e = (
                pair_energy(spec, move.first, 1, sites, charges)
                + pair_energy(spec, move.second, -1, sites, charges)
                + pair_energy(spec, move.second, -1, [move.first], [1])
            )
            return (_log_fugacity_squared(spec.fugacity) - delta_e
                    + math.log(empty * (empty - 1)) - 2 * math.log(n + 1))
        if move.kind is MoveKind.DELETE:
            sites, charges = self._others((move.first, move.second))
            delta_e = -(
                pair_energy(spec, move.first, 1, sites, charges)
                + pair_energy(spec, move.second, -1, sites, charges)
                + pair_energy(spec, move.second, -1, [move.first], [1])
            )
            empty_after = empty + 2
            return (-_log_fugacity_squared(spec.fugacity) - delta_e
                    + 2 * math.log(n) - math.log(empty_after * (empty_after - 1)))
        if move.second in self.charges:
            return -math.inf
        q = self.charges[move.first]
        sites, charges = self._others((move.first,))
        return -(pair_energy(spec, move.second, q, sites, charges) - pair_energy(spec, move.first, q, sites, charges))

    def apply(self, move):
        if move.kind is MoveKind.INSERT:
            self.charges[move.first] = 1
            self.charges[move.second] = -1
        elif move.kind is MoveKind.DELETE:
            del self.charges[move.first]
            del self.charges[move.second]
        else:
            self.charges[move.second] = self.charges.pop(move.first)

    def step(self):
        self.attempted += 1
        move = self.propose()
        if move is None:
            return False
        ratio = self.log_ratio(move)
        if ratio >= 0 or self.rng.random() < math.exp(ratio):
            self.apply(move)
            self.accepted += 1
            return True
        return False

    def sweep(self):
        for _ in range(self.spec.n_sites):
            self.step()
        return self.n_pairs, matched_r2(self.spec, self.config)


def reverse_move(move):
    """The move that undoes ``move`` from the state it leads to."""
    if move.kind is MoveKind.INSERT:
        return Move(MoveKind.DELETE, move.first, move.second)
    if move.kind is MoveKind.DELETE:
        return Move(MoveKind.INSERT, move.first, move.second)
    return Move(MoveKind.DISPLACE, move.second, move.first)


def proposal_probability(spec, config_a, config_b):
    """Probability that one attempt from ``config_a`` proposes ``config_b``, by enumeration."""
    charges = config_a.charges
    empty = [(x, y) for x in range(spec.side) for y in range(spec.side) if (x, y) not in charges]
    target = config_b.charges
    total = 0.0
    for plus in empty:
        for minus in empty:
            if plus != minus and {**charges, plus: 1, minus: -1} == target:
                total += 1.0 / (3 * len(empty) * (len(empty) - 1))
    pluses, minuses = config_a.sites(1), config_a.sites(-1)
    for plus in pluses:
        for minus in minuses:
            if {s: q for s, q in charges.items() if s not in (plus, minus)} == target:
                total += 1.0 / (3 * len(pluses) * len(minuses))
    for site, q in charges.items():
        for dx, dy in NEIGHBOURS:
            hop = spec.wrap((site[0] + dx, site[1] + dy))
            if hop in charges:
                continue
            moved = {s: c for s, c in charges.items() if s != site}
            moved[hop] = q
            if moved == target:
                total += 1.0 / (3 * len(charges) * len(NEIGHBOURS))
    return total


def _batch_estimates(pairs, r2):
    batches = np.array_split(np.arange(len(pairs)), min(N_BATCHES, len(pairs)))
    pair_means = np.array([pairs[idx].mean() for idx in batches])
    r2_ratios = np.array([r2[idx].sum() / pairs[idx].sum() for idx in batches if pairs[idx].sum() > 0])
    n_batches = len(batches)
    stderr_pairs = float(pair_means.std(ddof=1) / math.sqrt(n_batches)) if n_batches > 1 else 0.0
    stderr_r2 = float(r2_ratios.std(ddof=1) / math.sqrt(len(r2_ratios))) if len(r2_ratios) > 1 else 0.0
    return stderr_pairs, stderr_r2


def metropolis_run(spec, sweeps, seed, max_pairs=None, burn_in=None, initial=None, chain=0, trace=None):
    """
    Run one chain from the stream (seed, chain) and estimate the mean pair
    count and mean_r2 = Σ matched r² / Σ pairs, with batch-mean standard
    errors over 20 batches. ``trace``, if given, receives (sweep, pairs, r2) rows.
    """
    if int(sweeps) != sweeps or sweeps < 1:
        raise ValueError(f"sweeps must be a positive integer, got {sweeps}")
    burn_in = sweeps // 10 if burn_in is None else burn_in
    sampler = MetropolisSampler(spec, task_rng(seed, chain), max_pairs=max_pairs, initial=initial)
    for _ in range(burn_in):
        sampler.sweep()

    pairs, r2 = np.zeros(sweeps), np.zeros(sweeps)
    for i in range(sweeps):
        pairs[i], r2[i] = sampler.sweep()
        if trace is not None:
            trace.append((i, int(pairs[i]), r2[i] / pairs[i] if pairs[i] else 0.0))

    total_pairs = pairs.sum()
    mean_r2 = float(r2.sum() / total_pairs) if total_pairs > 0 else 0.0
    stderr_pairs, stderr_r2 = _batch_estimates(pairs, r2)
    logger.debug(f"chain {chain}: acceptance {sampler.accepted / max(sampler.attempted, 1):.3f}")
    return GasObservables(
        mean_pairs=float(pairs.mean()), mean_r2=mean_r2,
        stderr_pairs=stderr_pairs, stderr_r2=stderr_r2, samples=sweeps, seed=seed,
    )


def pool_chains(results):
    """Count-weighted pooling of independent chain estimates."""
    results = sorted(results, key=lambda r: (r.samples, r.mean_pairs, r.mean_r2))
    total = sum(r.samples for r in results)
    weights = [r.samples / total for r in results]
    return GasObservables(
        mean_pairs=math.fsum(w * r.mean_pairs for w, r in zip(weights, results)),
        mean_r2=math.fsum(w * r.mean_r2 for w, r in zip(weights, results)),
        stderr_pairs=math.sqrt(math.fsum((w * r.stderr_pairs) ** 2 for w, r in zip(weights, results))),
        stderr_r2=math.sqrt(math.fsum((w * r.stderr_r2) ** 2 for w, r in zip(weights, results))),
        samples=total,
        seed=results[0].seed,
    )


def run_chains(spec, sweeps, seed, chains=1, max_pairs=None, workers=1, trace=None):
    """Independent chains 0..chains−1 under one root seed, pooled. ``trace`` follows chain 0."""
    def run(chain):
        return metropolis_run(
            spec, sweeps, seed, max_pairs=max_pairs, chain=chain, trace=trace if chain == 0 else None,
        )

    logger.info(f"Sampling L = {spec.side}, K = {spec.coupling:g}, y = {spec.fugacity:g}: {chains} chains x {sweeps} sweeps")
    if workers > 1 and chains > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(run, range(chains)))
    else:
        results = [run(chain) for chain in range(chains)]
    pooled = pool_chains(results)
    logger.info(f"✓ mean pairs {pooled.mean_pairs:.4f} ± {pooled.stderr_pairs:.2g}, mean r2 {pooled.mean_r2:.4f} ± {pooled.stderr_r2:.2g}")
    return pooled


def kt_inputs_for_gas(spec):
    """Reduced KT variables of the gas: x = 2 − K/2, y = fugacity."""
    return 2.0 - spec.coupling / 2.0, spec.fugacity
