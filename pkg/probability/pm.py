# probability/pm.py
"""Stochastic m-error probabilities and the leading pair correction."""
import logging
import math

import numpy as np
from scipy.special import gammaln, xlogy

from .lattice import correction_pair_sum
from .models import PmBreakdown

logger = logging.getLogger(__name__)

MAX_CORRECTED_ERRORS = 4


def _cell_count(N, R):
    if int(N) != N or int(R) != R or N < 1 or R < 1:
        raise ValueError(f"N and R must be positive integers, got N={N}, R={R}")
    return int(N) * int(R)


def _log_binomial(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def stochastic_pm(eps, channel, N, R, m):
    """
    C(NR, m) ε_α^m (1 − Σ_β ε_β)^{NR−m}, in log space.

    ``channel=None`` counts errors of any type: ε_α is replaced by Σ_β ε_β,
    which makes the distribution over m sum to 1.
    """
    n_cells = _cell_count(N, R)
    if int(m) != m or not 0 <= m <= n_cells:
        raise ValueError(f"m must be an integer in [0, {n_cells}], got {m}")
    p = eps.total if channel is None else eps.get(channel)
    log_value = _log_binomial(n_cells, m) + xlogy(m, p) + xlogy(n_cells - m, eps.no_error)
    return float(np.exp(log_value))


def stochastic_pm_joint(eps, N, R, counts):
    """Multinomial probability of exactly ``counts[α]`` errors of each type."""
    n_cells = _cell_count(N, R)
    counts = {channel: int(value) for channel, value in counts.items()}
    if any(value < 0 for value in counts.values()) or sum(counts.values()) > n_cells:
        raise ValueError(f"error counts {counts} do not fit in {n_cells} cells")
    clean = n_cells - sum(counts.values())
    log_value = gammaln(n_cells + 1) - gammaln(clean + 1) + xlogy(clean, eps.no_error)
    for channel, value in counts.items():
        log_value += xlogy(value, eps.get(channel)) - gammaln(value + 1)
    return float(np.exp(log_value))


def pair_weight(m, n_cells):
    """Share of ordered cell pairs that carry two of the m errors: m(m−1)/(NR(NR−1))."""
    if m < 2 or n_cells < 2:
        return 0.0
    return m * (m - 1) / (n_cells * (n_cells - 1))


def evaluate_pm(grid, eps, fcorr, m, channel=None, workers=None):
    """
    P_m split into its stochastic part and one correlated F pair among the m
    insertions: pair_correction = P_m^stoch · (S/2) · m(m−1)/(NR(NR−1)),
    with S the ordered pair sum.
    """
    if int(m) != m or m < 0 or m > MAX_CORRECTED_ERRORS:
        raise ValueError(f"the pair correction is kept for m <= {MAX_CORRECTED_ERRORS}, got m = {m}")
    stochastic = stochastic_pm(eps, channel, grid.n_cycles, grid.n_qubits, m)
    weight = pair_weight(m, grid.n_cells)
    pair_sum = correction_pair_sum(grid, fcorr, workers=workers) if weight else 0.0
    pair_correction = stochastic * 0.5 * pair_sum * weight
    ratio = pair_correction / stochastic if stochastic > 0 else 0.0
    if not math.isfinite(ratio):
        raise ValueError(f"non-finite pair correction ratio for m = {m}")
    return PmBreakdown(m=int(m), stochastic=stochastic, pair_correction=pair_correction, ratio=ratio)
