# bath/wick.py
"""Wick expansion of Gaussian 2n-point functions by explicit pairing enumeration."""
import math

from django.conf import settings

from utils.exceptions import BudgetExceededError


def iter_pairings(items):
    """Yield every perfect matching of ``items`` as a list of pairs."""
    items = list(items)
    if not items:
        yield []
        return

    first = items.pop(0)
    for i, item in enumerate(items):
        for rest in iter_pairings(items[:i] + items[i + 1:]):
            yield [(first, item)] + rest


def count_pairings(n_points):
    """(2n-1)!! for 2n points."""
    if n_points % 2:
        raise ValueError(f"an odd number of points ({n_points}) has no pairings")
    return math.prod(range(n_points - 1, 0, -2))


def wick_expand(pair_fn, points, max_pairs=None):
    """
    Sum over all pairings of the product of ``pair_fn(p, q)`` over the pairs.

    Exact for a Gaussian field whose two-point function is ``pair_fn``.
    """
    points = list(points)
    if max_pairs is None:
        max_pairs = settings.RESILIENCE['MAX_WICK_PAIRS']
    if len(points) % 2:
        raise ValueError(f"wick_expand needs an even number of points, got {len(points)}")
    if len(points) // 2 > max_pairs:
        raise BudgetExceededError(
            f"{len(points)} points need {count_pairings(len(points))} pairings; limit is n <= {max_pairs}"
        )

    terms = []
    for pairing in iter_pairings(range(len(points))):
        term = 1.0
        for i, j in pairing:
            term *= pair_fn(points[i], points[j])
        terms.append(term)
    return math.fsum(terms)
