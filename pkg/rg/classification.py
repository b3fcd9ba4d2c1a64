# rg/classification.py
"""Dimensional criterion: the sign of D + z − dim[F] decides the flow of λ*."""
import math

from django.conf import settings

from hypercube.integrals import effective_dimension
from .models import Classification, Verdict


def flow_exponent(D, z, dimF):
    """D + z − dim[F]."""
    if D < 1 or int(D) != D:
        raise ValueError(f"D must be a positive integer, got {D}")
    if z < 0 or dimF < 0:
        raise ValueError("z and dim[F] must be non-negative")
    return D + z - dimF


def verdict_for(exponent, tol=None):
    if tol is None:
        tol = settings.RESILIENCE['MARGINAL_TOL']
    if exponent > tol:
        return Verdict.RELEVANT
    if exponent < -tol:
        return Verdict.IRRELEVANT
    return Verdict.MARGINAL


def classify(model, D, n_pulses=0, tol=None):
    """Per-channel Classification with dim[F_α] = 2(δ_α + n z)."""
    z = model.bath.z
    result = {}
    for channel in model.channels:
        dim_f = effective_dimension(model.bath.delta[channel], n_pulses, z)
        exponent = flow_exponent(D, z, dim_f)
        result[channel] = Classification(exponent=exponent, verdict=verdict_for(exponent, tol))
    return result


def _irrelevant_with(D, z, delta, n):
    return 2 * (delta + n * z) > D + z


def pulses_needed(D, z, delta):
    """
    Smallest n >= 0 with 2(δ + n z) > D + z, or None when no n works
    (z = 0 and 2δ <= D: pulses do not change the dimension).
    """
    if z < 0 or delta < 0 or D < 1:
        raise ValueError("pulses_needed needs z >= 0, delta >= 0, D >= 1")
    if z == 0:
        return 0 if _irrelevant_with(D, z, delta, 0) else None

    n = max(0, math.floor((D + z - 2 * delta) / (2 * z)) + 1)
    # float guard around the exact boundary
    while not _irrelevant_with(D, z, delta, n):
        n += 1
    while n > 0 and _irrelevant_with(D, z, delta, n - 1):
        n -= 1
    return n


def kt_inputs(D, z, delta_eff, fugacity):
    """Reduced KT variables: x = D + z − 2δ_eff (x > 0 is relevant), y = fugacity."""
    return flow_exponent(D, z, 2 * delta_eff), fugacity
