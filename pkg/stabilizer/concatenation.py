# stabilizer/concatenation.py
"""Level recursion p_{ℓ+1} = c·p_ℓ² of a concatenated distance-3 code."""
import logging

from .models import Concatenation

logger = logging.getLogger(__name__)

MAX_LEVELS = 64


def concatenation_map(p, c, levels):
    if c <= 0:
        raise ValueError(f"c must be > 0, got {c}")
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")
    if int(levels) != levels or levels < 0:
        raise ValueError(f"levels must be a non-negative integer, got {levels}")
    rates = [float(p)]
    for _ in range(int(levels)):
        rates.append(c * rates[-1] ** 2)
    return Concatenation(rates=rates, c=c)


def levels_needed(p, c, target):
    """Smallest level whose rate is <= ``target``; None when the sequence never gets there."""
    if target <= 0:
        raise ValueError(f"target must be > 0, got {target}")
    rate = float(p)
    for level in range(MAX_LEVELS + 1):
        if rate <= target:
            return level
        if rate >= 1.0 / c:
            return None
        rate = c * rate**2
    logger.warning(f"target {target:g} not reached within {MAX_LEVELS} levels")
    return None