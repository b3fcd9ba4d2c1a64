# bath/correlators.py
"""Regularized two-point correlators, in cutoff units."""
import numpy as np

from .models import CorrelatorKind


def _as_result(value):
    return float(value) if np.ndim(value) == 0 else value


def two_point(c, x, t):
    """
    C(x, t) = (1 + |x|² + |t|^{2/z})^{-δ} for PowerLaw.

    ``x`` is a displacement vector (last axis = components) or a scalar
    distance; leading axes broadcast against ``t``. For z = 0 only t = 0 is
    accepted.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(t))):
        raise ValueError("x and t must be finite")
    if c.delta < 0:
        raise ValueError(f"delta must be >= 0, got {c.delta}")

    r2 = x**2 if x.ndim == 0 else np.sum(x**2, axis=-1)
    if c.instantaneous:
        if np.any(t != 0):
            raise ValueError("nonzero time separation in instantaneous (z = 0) mode")
        time_term = np.zeros_like(t)
    else:
        time_term = np.abs(t) ** (2.0 / c.z)

    if c.kind is CorrelatorKind.CONSTANT:
        value = np.ones(np.broadcast(r2, time_term).shape)
    elif c.kind is CorrelatorKind.USER_TABLE:
        value = c.table(np.sqrt(r2), t) * np.ones(np.broadcast(r2, time_term).shape)
    else:
        value = (1.0 + r2 + time_term) ** (-c.delta)
    return _as_result(value)
