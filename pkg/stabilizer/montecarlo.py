# stabilizer/montecarlo.py
"""
Stochastic-limit logical error rates: independent per-qubit Pauli errors
with probabilities ε_x, ε_y, ε_z, one perfect decoding round per cycle.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from django.conf import settings
from scipy.optimize import curve_fit
from scipy.stats import linregress

from hypercube.models import ErrorRates
from utils.seeding import task_rng
from .codes import all_paulis, decode_batch, pauli_bits
from .models import PauliOp, RateEstimate, ThresholdSweep

logger = logging.getLogger(__name__)

MIN_SAMPLES = 10_000


def _qubit_probabilities(eps):
    """(p_I, p_X, p_Y, p_Z) for one qubit."""
    return np.array([eps.no_error, eps.get('x'), eps.get('y'), eps.get('z')])


def sample_errors(eps, n, size, rng):
    """``size`` independent n-qubit errors as (x, z) bit arrays of shape (size, n)."""
    u = rng.random((size, n))
    cuts = np.cumsum([eps.get('x'), eps.get('y'), eps.get('z')])
    # u < cut_x → X, < cut_y → Y, < cut_z → Z, else I
    kinds = np.searchsorted(cuts, u, side='right') + 1
    kinds[kinds == 4] = 0
    return pauli_bits(kinds)


def sample_error(eps, n, rng):
    x, z = sample_errors(eps, n, 1, rng)
    return PauliOp(x[0], z[0])


def _count_failures(code, eps, size, rng):
    x, z = sample_errors(eps, code.n, size, rng)
    return int(np.count_nonzero(decode_batch(code, x, z)))


def logical_error_rate(code, eps, samples, seed, chunk_size=None, p_index=0, workers=None):
    """
    Fraction of cycles decoded to a logical error. Chunk ``i`` draws from the
    stream (seed, p_index, i), so the estimate does not depend on ``workers``.
    Samples are independent, so the standard error is the binomial one.
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"samples must be >= {MIN_SAMPLES}, got {samples}")
    chunk_size = settings.RESILIENCE['MC_CHUNK'] if chunk_size is None else int(chunk_size)
    workers = settings.RESILIENCE['WORKERS'] if workers is None else workers
    sizes = [min(chunk_size, samples - start) for start in range(0, samples, chunk_size)]

    def run(index):
        return _count_failures(code, eps, sizes[index], task_rng(seed, p_index, index))

    if eps.total == 0:
        counts = [0]
    elif workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            counts = list(executor.map(run, range(len(sizes))))
    else:
        counts = [run(index) for index in range(len(sizes))]

    failures = sum(counts)
    rate = failures / samples
    return RateEstimate(
        rate=rate, stderr=math.sqrt(rate * (1 - rate) / samples),
        samples=samples, failures=failures, seed=seed,
    )


def _failure_mask(code):
    indices = all_paulis(code.n)
    x, z = pauli_bits(indices)
    return indices, decode_batch(code, x, z) != 0


def exact_logical_error_rate(code, eps):
    """Σ over all 4^n errors of P(error)·[decoded to a logical error]."""
    indices, failing = _failure_mask(code)
    probs = np.prod(_qubit_probabilities(eps)[indices[failing]], axis=1)
    return math.fsum(probs.tolist())


def _weight2_failure_indices(code):
    indices, failing = _failure_mask(code)
    return indices[failing & (np.count_nonzero(indices, axis=1) == 2)]


def weight2_failures(code):
    """Weight-2 errors the decoder turns into a logical error."""
    x, z = pauli_bits(_weight2_failure_indices(code))
    return [PauliOp(a, b) for a, b in zip(x, z)]


def second_order_rate(code, eps):
    """Leading term: Σ over failing weight-2 errors of the product of their two single-qubit rates."""
    probs = _qubit_probabilities(eps)
    terms = [float(np.prod(probs[row[row > 0]])) for row in _weight2_failure_indices(code)]
    return math.fsum(terms)


def _quadratic(p, c):
    return c * p**2


def threshold_sweep(code, p_values, samples, seed, chunk_size=None, workers=None):
    """
    Depolarizing rates p → logical rate, with c from a standard-error-weighted
    fit of p_L = c·p² and pseudo-threshold 1/c.
    """
    p_values = [float(p) for p in p_values]
    if not p_values or any(not 0 < p < 0.75 for p in p_values):
        raise ValueError(f"p values must lie in (0, 0.75), got {p_values}")
    estimates = []
    for index, p in enumerate(p_values):
        estimate = logical_error_rate(
            code, ErrorRates.depolarizing(p), samples, seed,
            chunk_size=chunk_size, p_index=index, workers=workers,
        )
        estimates.append(RateEstimate(**{**estimate.as_dict(), 'p': p}))
        logger.info(f"p = {p:g}: logical rate {estimate.rate:.4g} ± {estimate.stderr:.2g}")

    ps = np.array(p_values)
    rates = np.array([e.rate for e in estimates])
    # a zero count still carries the resolution of one failure
    sigma = np.array([max(e.stderr, 1.0 / e.samples) for e in estimates])
    if not np.any(rates > 0):
        raise ValueError("no logical failures observed; raise samples or p")
    guess = float(np.sum(rates * ps**2 / sigma**2) / np.sum(ps**4 / sigma**2))
    popt, pcov = curve_fit(_quadratic, ps, rates, p0=[guess], sigma=sigma, absolute_sigma=True)
    slope = None
    if len(ps) >= 2 and np.all(rates > 0):
        slope = float(linregress(np.log(ps), np.log(rates)).slope)
    sweep = ThresholdSweep(estimates=estimates, c=float(popt[0]), c_stderr=float(np.sqrt(pcov[0, 0])), slope=slope)
    logger.info(f"✓ c = {sweep.c:.4g} ± {sweep.c_stderr:.2g}, pseudo-threshold {sweep.pseudo_threshold:.4g}")
    return sweep
