"""
Dynamics Module.

Euler-Maruyama step of the droplet position SDE

    dX = eps_rf U(X) dt - e_2 f(V) dt + eps_bm sigma dB

on the periodic domain. Volumes, ids and alive flags are never touched here.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy.special import expit

from cloudrain.core import radius_from_volume, wrap_position
from cloudrain.errors import NumericalBlowupError
from cloudrain.field import vortex_velocity
from cloudrain.types import (
    Domain,
    MotionParams,
    OUState,
    ParticleSet,
    TerminalSpeedParams,
    VortexSet,
)

logger = logging.getLogger(__name__)


def terminal_speed(v, p: TerminalSpeedParams):
    """Anchored logistic settling speed.

    f(V) = v_max [L(R) - L(0)] / [1 - L(0)],  L(R) = 1 / (1 + exp(-s (R - r_half)))
    with R the sphere radius of V. f(0) = 0 and f -> v_max as V -> infinity.
    """
    radius = radius_from_volume(v)
    l0 = expit(-p.steepness * p.r_half)
    lr = expit(p.steepness * (np.asarray(radius) - p.r_half))
    speed = p.v_max * (lr - l0) / (1.0 - l0)
    return float(speed) if np.ndim(speed) == 0 else speed


def em_step(
    particles: ParticleSet,
    field: Optional[Tuple[VortexSet, OUState]],
    mp: MotionParams,
    rng: np.random.Generator,
    d: Domain = Domain(),
) -> ParticleSet:
    """Advance the positions of all alive particles by one step of mp.dt.

    Brownian increments are drawn for every particle index, alive or not, so
    a particle's draw depends only on its index.

    Raises:
        NumericalBlowupError: If any new position is non-finite
    """
    alive = particles.alive
    positions = particles.positions.copy()
    current = positions[alive]
    disp = np.zeros_like(current)
    dt = mp.dt

    if mp.eps_rf and field is not None:
        vortices, xi = field
        u = vortex_velocity(current, vortices, xi, d)
        if mp.drag is not None:
            u = u * np.asarray(mp.drag(particles.volumes[alive]), dtype=float)[:, None]
        disp += u * dt

    disp[:, 1] -= terminal_speed(particles.volumes[alive], mp.settling) * dt

    if mp.eps_bm and mp.sigma > 0:
        z = rng.standard_normal((len(particles), 2))
        disp += mp.sigma * math.sqrt(dt) * z[alive]

    moved = current + disp
    finite = np.all(np.isfinite(moved), axis=1)
    if not np.all(finite):
        bad = int(particles.ids[alive][~finite][0])
        raise NumericalBlowupError(bad, "check dt against the field intensity")

    positions[alive] = wrap_position(moved, d)
    return ParticleSet(
        ids=particles.ids,
        positions=positions,
        volumes=particles.volumes,
        alive=particles.alive,
    )


__all__ = ["terminal_speed", "em_step"]
