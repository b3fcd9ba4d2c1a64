# hypercube/integrals.py
"""
Intra-hypercube error probabilities and the inter-hypercube F correlators.

All times and lengths here are in cutoff units.
"""
import logging
import math

import numpy as np
from django.conf import settings
from scipy.integrate import quad

from bath.correlators import two_point
from bath.models import Correlator
from rg.flows import lambda_star as renormalized_couplings
from utils.exceptions import PerturbativeRegimeError, QuadratureError
from .models import ErrorRates, PulseSequence

logger = logging.getLogger(__name__)


def effective_dimension(delta, n_pulses, z):
    """dim[F] = 2(δ + n z)."""
    if delta < 0 or n_pulses < 0 or z < 0:
        raise ValueError("effective_dimension needs non-negative delta, n_pulses and z")
    return 2.0 * (delta + n_pulses * z)


def _time_kernel(c):
    if c.instantaneous:
        # no time dependence: the whole cycle sees the equal-time value
        value = two_point(c, 0.0, 0.0)
        return lambda u: value
    return lambda u: two_point(c, 0.0, u)


def _segments(delta_t, flips):
    bounds = np.concatenate(([0.0], np.asarray(flips, dtype=float), [delta_t]))
    signs = np.where(np.arange(bounds.size - 1) % 2 == 0, 1.0, -1.0)
    return list(zip(bounds[:-1], bounds[1:], signs))


def _overlap_pieces(a, b, c, d):
    """
    ∫_a^b∫_c^d k(t1 − t2) = ∫ k(u) w(u) du over u ∈ [a − d, b − c],
    w piecewise linear between the returned breakpoints (and 0, where k may cusp).
    """
    lo, hi = a - d, b - c
    points = sorted({lo, a - c, b - d, hi, 0.0})
    points = [p for p in points if lo <= p <= hi]
    return [(p, q) for p, q in zip(points, points[1:]) if q > p]


def _signed_double_integral(kernel, delta_t, flips, epsabs, limit):
    segments = _segments(delta_t, flips)
    pieces = []
    for i, (a, b, s_i) in enumerate(segments):
        for j in range(i, len(segments)):
            c, d, s_j = segments[j]
            weight = s_i * s_j * (1.0 if i == j else 2.0)
            pieces.extend((weight, a, b, c, d, p, q) for p, q in _overlap_pieces(a, b, c, d))

    piece_abs = epsabs / max(len(pieces), 1)
    terms, total_error = [], 0.0
    for weight, a, b, c, d, p, q in pieces:
        def integrand(u, a=a, b=b, c=c, d=d):
            return kernel(u) * max(0.0, min(b, d + u) - max(a, c + u))

        result = quad(integrand, p, q, epsabs=piece_abs, epsrel=1e-10, limit=limit, full_output=1)
        if len(result) == 4:
            raise QuadratureError(f"quadrature did not converge on [{p:g}, {q:g}]: {result[3]}")
        value, error = result[0], result[1]
        terms.append(weight * value)
        total_error += abs(weight) * error
    return math.fsum(terms), total_error


def epsilon_with_pulses(c, lambda_star, delta_t, seq=None, tol=None, limit=None):
    """(λ*)² ∫∫ s(t1) s(t2) C(0, t1 − t2) dt1 dt2 over one cycle."""
    if lambda_star < 0 or delta_t <= 0:
        raise ValueError("lambda_star must be >= 0 and delta_t > 0")
    tol = settings.RESILIENCE['QUAD_TOL'] if tol is None else tol
    limit = settings.RESILIENCE['QUAD_LIMIT'] if limit is None else limit
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    if lambda_star == 0:
        return 0.0

    flips = (seq or PulseSequence()).flip_times(delta_t)
    scale = lambda_star**2
    integral, error = _signed_double_integral(_time_kernel(c), delta_t, flips, tol / scale, limit)
    eps = scale * integral
    logger.debug(f"eps = {eps:.6g} (n_pulses = {len(flips)}, quadrature error {scale * error:.2g})")
    # echo cancellation can leave rounding noise below zero
    eps = max(eps, 0.0)
    if eps >= 1:
        raise PerturbativeRegimeError(f"eps = {eps:g} >= 1: the coupling is not perturbative at this cycle time")
    return eps


def epsilon_alpha(c, lambda_star, delta_t, tol=None, limit=None):
    """(λ*)² ∫₀^Δ∫₀^Δ C(0, t1 − t2) dt1 dt2."""
    return epsilon_with_pulses(c, lambda_star, delta_t, None, tol=tol, limit=limit)


def _correlator_squared(c, dx, dt):
    dt = np.asarray(dt, dtype=float)
    if c.instantaneous:
        same_cycle = dt == 0
        value = np.asarray(two_point(c, dx, np.zeros_like(dt))) ** 2 * same_cycle
    else:
        value = np.asarray(two_point(c, dx, dt)) ** 2
    return value


def _result(value):
    return float(value) if np.ndim(value) == 0 else value


def pair_correlator_F(c, lambda_star, delta_t, eps, dx, dt):
    """
    ⟨F_α(x_i, t_i) F_α(x_j, t_j)⟩ = [(λ*Δ)²/ε]² · 2 C(dx, dt)².

    ``dx`` is a separation vector (last axis = components) or a distance;
    arrays broadcast against ``dt``. With z = 0 cells in different cycles
    are uncorrelated.
    """
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    prefactor = ((lambda_star * delta_t) ** 2 / eps) ** 2
    return _result(prefactor * 2.0 * _correlator_squared(c, dx, dt))


def pair_correlator_F0(correlators, rates, delta_t, dx, dt):
    """Connected ⟨F_0 F_0⟩ = Σ_β [(λ*_β Δ)²]² 2 C_β² / (1 − Σε)²."""
    terms = [
        (rates.lambda_star[channel] * delta_t) ** 4 * 2.0 * _correlator_squared(c, dx, dt)
        for channel, c in correlators.items()
    ]
    return _result(np.sum(terms, axis=0) / rates.no_error**2)


def pair_correlator_cross(c, rates, channel, delta_t, dx, dt):
    """⟨F_α F_0⟩ = −[(λ*_α Δ)²]² 2 C_α² / (ε_α (1 − Σε))."""
    eps = rates.get(channel)
    if not eps > 0:
        raise ValueError(f"eps.{channel} must be > 0, got {eps}")
    prefactor = (rates.lambda_star[channel] * delta_t) ** 4 / (eps * rates.no_error)
    return _result(-prefactor * 2.0 * _correlator_squared(c, dx, dt))


def error_rates(model, grid, pulses=None, tol=None):
    """
    ErrorRates for every declared channel: λ* at the grid scale, then ε per
    channel over one cycle with the given pulse schedule.
    """
    couplings = renormalized_couplings(model, grid.delta_t)
    grid = grid.with_bath(model.bath)
    seq = (pulses or PulseSequence()).in_cutoff_units(model.bath)
    eps = {}
    for channel in model.channels:
        c = Correlator.for_channel(model.bath, channel)
        eps[channel] = epsilon_with_pulses(c, couplings[channel], grid.cell_time, seq, tol=tol)
    rates = ErrorRates(eps=eps, lambda_star=couplings)
    logger.info(f"✓ Error rates {rates.eps} (total {rates.total:.6g})")
    return rates
