# coulombgas/energy.py
"""Log interaction on the periodic square lattice, minimum-image distances."""
import numpy as np
from scipy.optimize import linear_sum_assignment


def minimum_image_r2(side, a, b):
    """Squared minimum-image distance; ``a`` and ``b`` broadcast over leading axes, last axis = (x, y)."""
    d = np.abs(np.asarray(a) - np.asarray(b)) % side
    d = np.minimum(d, side - d)
    return np.sum(d * d, axis=-1)


def pair_energy(spec, site, q, sites, charges):
    """Interaction of charge ``q`` at ``site`` with the listed charges: −K q Σ q_j ln r_j."""
    if len(sites) == 0:
        return 0.0
    r2 = minimum_image_r2(spec.side, np.asarray(sites), np.asarray(site))
    return float(-spec.coupling * q * np.dot(np.asarray(charges, dtype=float), 0.5 * np.log(r2)))


def energy(spec, config):
    """E = −K Σ_{i<j} q_i q_j ln r_ij; an empty lattice has E = 0."""
    if not config.charges:
        return 0.0
    sites = np.array(list(config.charges), dtype=int)
    q = np.array(list(config.charges.values()), dtype=float)
    r2 = minimum_image_r2(spec.side, sites[:, None, :], sites[None, :, :])
    i, j = np.triu_indices(len(q), k=1)
    if np.any(r2[i, j] == 0):
        raise ValueError("overlapping charges")
    return float(-spec.coupling * np.sum(q[i] * q[j] * 0.5 * np.log(r2[i, j])))


def matched_r2(spec, config):
    """Σ r² over the (+, −) matching of least total squared separation."""
    plus, minus = config.sites(1), config.sites(-1)
    if not plus:
        return 0.0
    cost = minimum_image_r2(spec.side, np.array(plus)[:, None, :], np.array(minus)[None, :, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].sum())
