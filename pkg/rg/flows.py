# rg/flows.py
"""
RG flow integrators: the impurity β-function for the couplings λ_α and the
reduced Kosterlitz-Thouless recursion for (x, y).
"""
import itertools
import logging
import math

import numpy as np
from django.conf import settings
from scipy.integrate import solve_ivp

from bath.models import CHANNELS
from utils.exceptions import DivergedFlowError, GridScaleError, NonFiniteFlowError
from .models import FlowTrajectory, KTPhase, KTTrajectory

logger = logging.getLogger(__name__)

# |ε_αβγ| for (x, y, z)
LEVI_CIVITA_MASK = np.zeros((3, 3, 3))
LEVI_CIVITA_MASK[tuple(np.array(list(itertools.permutations(range(3)))).T)] = 1.0

# largest coupling change allowed in one RK4 step
MAX_CHANGE = 0.1


def _quadratic_tensor(g, k):
    if g is None:
        return np.zeros((k, k, k))
    g = np.asarray(g, dtype=float)
    if g.shape == (k, k, k):
        return g
    if g.shape == (3, 3) and k == 3:
        return LEVI_CIVITA_MASK * g[np.newaxis, :, :]
    raise ValueError(f"g must be a ({k},{k},{k}) tensor or a 3x3 table for three channels, got {g.shape}")


def _cubic_matrix(h, k):
    if h is None:
        return np.zeros((k, k))
    h = np.asarray(h, dtype=float)
    if h.shape != (k, k):
        raise ValueError(f"h must have shape ({k},{k}), got {h.shape}")
    return h


def beta_function(G, H):
    """dλ_α/dℓ = Σ G_αβγ λ_β λ_γ + λ_α Σ_β H_αβ λ_β²."""
    def beta(lam):
        return np.einsum('abc,b,c->a', G, lam, lam) + lam * (H @ lam**2)
    return beta


def rk4_step(beta, lam, dl):
    k1 = beta(lam)
    k2 = beta(lam + 0.5 * dl * k1)
    k3 = beta(lam + 0.5 * dl * k2)
    k4 = beta(lam + dl * k3)
    return lam + dl * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0


def _advance(beta, lam, ell, ell_target, blowup):
    """
    RK4 from ell to ell_target. The step is cut wherever a coupling would move
    by more than MAX_CHANGE (relative above 1, absolute below) so that a
    finite-scale blow-up is caught where it happens.
    """
    while ell < ell_target:
        rate = np.max(np.abs(beta(lam)) / np.maximum(np.abs(lam), 1.0))
        dl = ell_target - ell
        if rate * dl > MAX_CHANGE:
            dl = MAX_CHANGE / rate
            if ell + dl == ell:
                raise NonFiniteFlowError(f"β-function step underflow at ell = {ell:g}")
        lam = rk4_step(beta, lam, dl)
        ell = ell_target if dl == ell_target - ell else ell + dl
        if np.any(np.isnan(lam)):
            raise NonFiniteFlowError(f"β-function integration produced NaN at ell = {ell:g}")
        if np.max(np.abs(lam)) > blowup:
            return lam, ell, True
    return lam, ell, False


def integrate_beta(lambda0, g=None, h=None, ell_max=None, step=None, blowup=None, labels=None):
    """
    Fixed-step RK4 integration of the β-function from ℓ = 0 to ``ell_max``
    (steps are subdivided internally close to a blow-up).

    Stops early with ``diverged=True`` once any |λ_α| exceeds ``blowup``.
    The last step is shortened so that the grid ends exactly on ``ell_max``.
    """
    rg = settings.RESILIENCE
    ell_max = rg['RG_ELL_MAX'] if ell_max is None else float(ell_max)
    step = rg['RG_STEP'] if step is None else float(step)
    blowup = rg['BLOWUP'] if blowup is None else float(blowup)
    if step <= 0 or ell_max <= 0:
        raise ValueError("step and ell_max must be > 0")

    lam = np.atleast_1d(np.asarray(lambda0, dtype=float)).copy()
    k = lam.size
    if labels is None:
        labels = CHANNELS[:k] if k <= len(CHANNELS) else tuple(str(i) for i in range(k))
    beta = beta_function(_quadratic_tensor(g, k), _cubic_matrix(h, k))

    ells, states = [0.0], [lam]
    diverged = False
    n_steps = math.ceil(ell_max / step - 1e-12)
    ell = 0.0
    for i in range(n_steps):
        ell_next = ell_max if i == n_steps - 1 else min((i + 1) * step, ell_max)
        lam, ell, diverged = _advance(beta, lam, ell, ell_next, blowup)
        ells.append(ell)
        states.append(lam)
        if diverged:
            logger.debug(f"Flow crossed blow-up bound {blowup:g} at ell = {ell:g}")
            break

    return FlowTrajectory(
        ell=np.array(ells), couplings=np.vstack(states), diverged=diverged, labels=tuple(labels),
    )


def flow_scale(model, delta_t):
    """ℓ* = ln(Λ v Δ)."""
    bath = model.bath
    scale = bath.cutoff * bath.v * float(delta_t)
    if not scale > 1.0:
        raise GridScaleError(f"Λ·v·Δ = {scale:g} must exceed 1: the grid scale is above the cutoff")
    return math.log(scale)


def lambda_star(model, delta_t, step=None, blowup=None):
    """Couplings renormalized from the cutoff down to the grid scale, keyed by channel."""
    ell_star = flow_scale(model, delta_t)
    trajectory = integrate_beta(
        model.coupling_vector(), model.g_matrix(), model.h_matrix(),
        ell_max=ell_star, step=step, blowup=blowup,
    )
    if trajectory.diverged:
        ell_end = trajectory.ell[-1]
        logger.error(f"Flow diverged at ell = {ell_end:g} before ell* = {ell_star:g}")
        raise DivergedFlowError(
            f"the coupling flow diverges at ell = {ell_end:g} before the grid scale ell* = {ell_star:g}",
            trajectory=trajectory,
        )
    terminal = trajectory.terminal
    result = {channel: float(terminal[CHANNELS.index(channel)]) for channel in model.channels}
    logger.info(f"✓ Renormalized couplings at ell* = {ell_star:g}: {result}")
    return result


def kt_flow(x0, y0, ell_max=None, step=None, blowup=None, floor=None):
    """
    Reduced KT recursion dx/dℓ = y², dy/dℓ = x y.

    Integrated in (x, ln y) with terminal events at y = ``floor`` (Bound) and
    y = ``blowup`` (Unbound). Neither event by ``ell_max`` gives Undetermined.
    """
    rg = settings.RESILIENCE
    ell_max = rg['RG_ELL_MAX'] if ell_max is None else float(ell_max)
    step = rg['RG_STEP'] if step is None else float(step)
    blowup = rg['BLOWUP'] if blowup is None else float(blowup)
    floor = rg['KT_FLOOR'] if floor is None else float(floor)
    if step <= 0 or ell_max <= 0:
        raise ValueError("step and ell_max must be > 0")
    if y0 < 0 or not math.isfinite(y0) or not math.isfinite(x0):
        raise ValueError(f"kt_flow needs finite x0 and y0 >= 0, got ({x0}, {y0})")

    if y0 <= floor:
        return KTTrajectory(ell=np.zeros(1), x=np.array([float(x0)]), y=np.array([float(y0)]), phase=KTPhase.BOUND)
    if y0 > blowup:
        return KTTrajectory(ell=np.zeros(1), x=np.array([float(x0)]), y=np.array([float(y0)]), phase=KTPhase.UNBOUND)

    log_floor, log_blowup = math.log(floor), math.log(blowup)

    def rhs(ell, state):
        x, u = state
        return [math.exp(2 * u), x]

    def bound(ell, state):
        return state[1] - log_floor
    bound.terminal, bound.direction = True, -1

    def unbound(ell, state):
        return state[1] - log_blowup
    unbound.terminal, unbound.direction = True, 1

    t_eval = np.append(np.arange(0.0, ell_max, step), ell_max)
    sol = solve_ivp(
        rhs, (0.0, ell_max), [float(x0), math.log(y0)], method='DOP853',
        t_eval=t_eval, events=(bound, unbound), rtol=1e-10, atol=1e-12,
    )
    if not sol.success:
        raise NonFiniteFlowError(f"KT integration failed: {sol.message}")

    ell, x, u = sol.t, sol.y[0], sol.y[1]
    phase = KTPhase.UNDETERMINED
    for event_phase, t_event, y_event in zip((KTPhase.BOUND, KTPhase.UNBOUND), sol.t_events, sol.y_events):
        if len(t_event):
            phase = event_phase
            if ell.size == 0 or t_event[0] > ell[-1]:
                ell = np.append(ell, t_event[0])
                x = np.append(x, y_event[0][0])
                u = np.append(u, y_event[0][1])
    logger.debug(f"KT flow from ({x0:g}, {y0:g}) ended at ell = {ell[-1]:g}: {phase.value}")
    return KTTrajectory(ell=ell, x=x, y=np.exp(u), phase=phase)
