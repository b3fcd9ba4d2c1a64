# coulombgas/enumeration.py
"""Exact partition function of the neutral gas with at most two dipole pairs."""
import itertools
import logging
import math

import numpy as np
from django.conf import settings

from utils.exceptions import BudgetExceededError
from .energy import minimum_image_r2
from .models import GasObservables

logger = logging.getLogger(__name__)


def _sector(spec, n_pairs):
    """
    Boltzmann weights y^{2p} e^{−E} and matched r² for every configuration
    with p = n_pairs (+, −) pairs, as arrays.
    """
    coords = np.array([(x, y) for x in range(spec.side) for y in range(spec.side)])
    sites = range(spec.n_sites)
    plus_sets, minus_sets = [], []
    for plus in itertools.combinations(sites, n_pairs):
        rest = [s for s in sites if s not in plus]
        for minus in itertools.combinations(rest, n_pairs):
            plus_sets.append(plus)
            minus_sets.append(minus)
    plus = coords[np.array(plus_sets)]
    minus = coords[np.array(minus_sets)]

    positions = np.concatenate([plus, minus], axis=1)
    charges = np.array([1.0] * n_pairs + [-1.0] * n_pairs)
    i, j = np.triu_indices(2 * n_pairs, k=1)
    r2 = minimum_image_r2(spec.side, positions[:, i, :], positions[:, j, :])
    energies = -spec.coupling * np.sum(charges[i] * charges[j] * 0.5 * np.log(r2), axis=1)
    log_weights = 2 * n_pairs * math.log(spec.fugacity) - energies

    matchings = []
    for perm in itertools.permutations(range(n_pairs)):
        matchings.append(sum(
            minimum_image_r2(spec.side, plus[:, a, :], minus[:, b, :]) for a, b in enumerate(perm)
        ))
    return np.exp(log_weights), np.min(matchings, axis=0).astype(float)


def exact_partition(spec, max_pairs=2, max_side=None, max_enum_pairs=None):
    """
    Z = Σ y^{#charges} e^{−E} over neutral configurations with at most
    ``max_pairs`` pairs, with the exact mean pair count and
    mean_r2 = ⟨Σ matched r²⟩ / ⟨pairs⟩.
    """
    rs = settings.RESILIENCE
    max_side = rs['MAX_ENUM_SIDE'] if max_side is None else max_side
    max_enum_pairs = rs['MAX_ENUM_PAIRS'] if max_enum_pairs is None else max_enum_pairs
    if spec.side > max_side or max_pairs > max_enum_pairs:
        raise BudgetExceededError(
            f"exact enumeration is limited to side <= {max_side} and <= {max_enum_pairs} pairs"
        )
    if max_pairs < 0:
        raise ValueError(f"max_pairs must be >= 0, got {max_pairs}")

    z_terms, pair_terms, r2_terms = [1.0], [0.0], [0.0]
    if spec.fugacity > 0:
        for n_pairs in range(1, min(max_pairs, spec.n_sites // 2) + 1):
            weights, r2 = _sector(spec, n_pairs)
            z_terms.append(math.fsum(weights))
            pair_terms.append(n_pairs * z_terms[-1])
            r2_terms.append(math.fsum(weights * r2))
            logger.debug(f"sector with {n_pairs} pairs: {weights.size} configurations")

    Z = math.fsum(z_terms)
    mean_pairs = math.fsum(pair_terms) / Z
    mean_r2 = math.fsum(r2_terms) / math.fsum(pair_terms) if mean_pairs > 0 else 0.0
    return GasObservables(mean_pairs=mean_pairs, mean_r2=mean_r2, partition=Z)
