# probability/lattice.py
"""
Direct lattice sums of the inter-hypercube correlator on periodic grids.

The grid is periodic in every spatial direction and in time; separations are
minimum images. By translation invariance the sum over ordered cell pairs is
NR times the sum over nonzero displacements, which is what gets evaluated.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from django.conf import settings

from utils.exceptions import BudgetExceededError

logger = logging.getLogger(__name__)


def minimum_image_offsets(n):
    """One representative per residue class mod n, closest to zero: [−⌊n/2⌋, n − ⌊n/2⌋)."""
    return np.arange(-(n // 2), n - n // 2)


def spatial_offsets(side, comp_dim):
    """All spatial displacements of a side^D periodic lattice, shape (side^D, D)."""
    axes = [minimum_image_offsets(side)] * comp_dim
    return np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1).reshape(-1, comp_dim)


def correction_pair_sum(grid, fcorr, m=2, workers=None, max_cells=None):
    """
    Σ over ordered pairs of distinct cells of ``fcorr(dx, dt)``, with unit cell
    volume. ``fcorr`` takes separations in cutoff units, ``dx`` of shape
    (k, D) and ``dt`` of shape (k,), and returns k values.

    Work is split per time displacement and recombined in a fixed order, so
    the result does not depend on ``workers``.
    """
    if m != 2:
        raise ValueError(f"only pair sums (m = 2) are evaluated directly, got m = {m}")
    rs = settings.RESILIENCE
    max_cells = rs['MAX_CELLS'] if max_cells is None else max_cells
    workers = rs['WORKERS'] if workers is None else workers
    if not grid.is_cubic:
        raise ValueError(
            f"n_qubits = {grid.n_qubits} is not a {grid.comp_dim}-th power; the lattice sum needs a cubic lattice"
        )
    if grid.n_cells > max_cells:
        raise BudgetExceededError(f"{grid.n_cells} cells exceed the direct-summation budget of {max_cells}")
    if grid.n_cells < 2:
        return 0.0

    offsets = spatial_offsets(grid.side, grid.comp_dim)
    dx = offsets * grid.cell_spacing
    origin = np.all(offsets == 0, axis=1)
    time_offsets = minimum_image_offsets(grid.n_cycles)

    def time_slice(k):
        dt = np.full(len(dx), k * grid.cell_time)
        values = np.asarray(fcorr(dx, dt), dtype=float)
        if k == 0:
            values = values[~origin]
        logger.debug(f"time offset {k}: {values.size} displacements")
        return math.fsum(values)

    logger.info(f"Summing pair correlations over {grid.n_cells} cells ({len(time_offsets)} chunks, {workers} workers)")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            partial_sums = list(executor.map(time_slice, time_offsets))
    else:
        partial_sums = [time_slice(k) for k in time_offsets]
    return grid.n_cells * math.fsum(partial_sums)
