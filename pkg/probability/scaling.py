# probability/scaling.py
"""
Finite-size scaling of the pair sum.

The ordered pair sum S(L) has an extensive part, NR times the converged
per-cell sum, and a non-extensive remainder. The remainder, measured as
E(L) = S(L) − [NR(L)/NR(L/2)]·S(L/2), grows like L^{2(D+z−2δ)}; its fitted
exponent is the numerical form of the dimensional criterion.
"""
import logging

import numpy as np
from scipy.stats import linregress

from bath.models import Correlator
from hypercube.integrals import pair_correlator_F
from hypercube.models import GridSpec
from rg.classification import verdict_for
from .lattice import correction_pair_sum
from .models import ScalingFit, ScanRow
from .pm import pair_weight

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 0.1


def fit_scaling_exponent(points):
    """
    Least-squares slope of log S against log L, dropping the smallest size.
    Returns a ScalingFit with the slope's standard error.
    """
    points = sorted((float(L), float(S)) for L, S in points)
    if len(points) < 4:
        raise ValueError(f"a scaling fit needs at least 4 sizes, got {len(points)}")
    if any(L <= 0 or S <= 0 for L, S in points):
        raise ValueError("sizes and values must be positive for a log-log fit")
    sizes, values = np.array(points[1:]).T
    result = linregress(np.log(sizes), np.log(values))
    return ScalingFit(
        slope=float(result.slope), stderr=float(result.stderr),
        intercept=float(result.intercept), n_points=len(sizes),
    )


def excess_pair_sum(sum_L, sum_half, n_cells_L, n_cells_half):
    """S(L) − [NR(L)/NR(L/2)]·S(L/2)."""
    return sum_L - (n_cells_L / n_cells_half) * sum_half


def scan_grid(L, comp_dim, z):
    """Periodic L^D × round(L^z) grid with unit spacing and unit cycle time."""
    n_cycles = max(1, round(L**z))
    return GridSpec(delta_t=1.0, n_cycles=n_cycles, n_qubits=L**comp_dim, comp_dim=comp_dim)


def unit_pair_correlator(c):
    """⟨FF⟩ with unit prefactor, 2C(dx, dt)²."""
    def fcorr(dx, dt):
        return pair_correlator_F(c, 1.0, 1.0, 1.0, dx, dt)
    return fcorr


def scaling_scan(bath, channel, comp_dim, sizes, workers=None):
    """
    Pair sums on the scan grids for every L in ``sizes`` (each even), with
    the excess taken against L/2.
    """
    sizes = sorted(int(L) for L in sizes)
    if any(L < 2 or L % 2 for L in sizes):
        raise ValueError(f"scan sizes must be even and >= 2, got {sizes}")
    fcorr = unit_pair_correlator(Correlator.for_channel(bath, channel))

    sums = {}

    def pair_sum(L):
        if L not in sums:
            sums[L] = correction_pair_sum(scan_grid(L, comp_dim, bath.z), fcorr, workers=workers)
        return sums[L]

    rows = []
    for L in sizes:
        grid, half = scan_grid(L, comp_dim, bath.z), scan_grid(L // 2, comp_dim, bath.z)
        total = pair_sum(L)
        excess = excess_pair_sum(total, pair_sum(L // 2), grid.n_cells, half.n_cells)
        rows.append(ScanRow(
            L=L, n_cells=grid.n_cells, sum=total,
            ratio=0.5 * total * pair_weight(2, grid.n_cells), excess=excess,
        ))
        logger.info(f"L = {L}: pair sum {total:.6g}, excess {excess:.6g}")
    return rows


def fit_scan(rows, tolerance=DEFAULT_TOLERANCE):
    """Fit the excess growth exponent and label it Relevant / Marginal / Irrelevant."""
    fit = fit_scaling_exponent([(row.L, row.excess) for row in rows])
    verdict = verdict_for(fit.slope, tol=tolerance).value
    logger.info(f"✓ Excess growth exponent {fit.slope:.4f} ± {fit.stderr:.2g}: {verdict}")
    return ScalingFit(fit.slope, fit.stderr, fit.intercept, fit.n_points, verdict)
