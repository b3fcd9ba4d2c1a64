# utils/seeding.py
"""
Seed handling.

One 64-bit root seed per run. Task ``k`` draws from the stream
``SeedSequence(entropy=root, spawn_key=(k,))``; the stream for a task depends
only on (root, k), so chunked work gives identical results whatever the
number of workers or the order they finish in.
"""
import logging
import secrets

import numpy as np
from django.conf import settings

logger = logging.getLogger(__name__)

MAX_SEED = 2**64 - 1


def resolve_seed(seed=None):
    """Explicit seed, else ``RESILIENCE_RG_SEED``, else a fresh random one (logged)."""
    if seed is None:
        seed = settings.RESILIENCE['ROOT_SEED']
    if seed is None:
        seed = secrets.randbits(64)
        logger.info(f"No seed given, drew root seed {seed}")
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def task_rng(root_seed, *task):
    """Generator for the task keyed by ``task`` (one or more ints) under ``root_seed``."""
    if not task:
        raise ValueError("task_rng needs at least one task index")
    spawn_key = tuple(int(part) for part in task)
    return np.random.default_rng(np.random.SeedSequence(entropy=int(root_seed), spawn_key=spawn_key))
