"""
Random Field Module.

Turbulence surrogate: K point vortices with regularised Biot-Savart profiles,
each modulated by an independent Ornstein-Uhlenbeck process

    d xi = -lambda xi dt + lambda dB,   xi_0 = 0,

whose stationary covariance is (lambda / 2) exp(-lambda |t - s|).
"""

import logging
import math
from typing import Tuple, Union

import numpy as np

from cloudrain.core import min_image_displacement
from cloudrain.errors import OUStabilityError
from cloudrain.types import Domain, OUParams, OUState, RngStream, VortexSet

logger = logging.getLogger(__name__)


def _check_stability(p: OUParams) -> None:
    if p.ou_lambda * p.dt >= 1:
        raise OUStabilityError(p.ou_lambda, p.dt)


def ou_step(xi: OUState, p: OUParams, noise) -> OUState:
    """Advance every OU component by one step of size p.dt.

    Args:
        xi: Current state (K components)
        p: Intensity, step and scheme
        noise: K standard normal draws

    Raises:
        OUStabilityError: If dt * lambda >= 1
    """
    _check_stability(p)
    z = np.asarray(noise, dtype=float).reshape(-1)
    if z.shape[0] != len(xi):
        raise ValueError(
            f"Invalid Noise: expected {len(xi)} draws, got {z.shape[0]}"
        )
    lam, dt = p.ou_lambda, p.dt
    if lam == 0:
        return OUState(values=xi.values.copy(), time=xi.time + dt)

    if p.mode == "exact":
        decay = math.exp(-lam * dt)
        scale = lam * math.sqrt(-math.expm1(-2.0 * lam * dt) / (2.0 * lam))
        values = decay * xi.values + scale * z
    else:
        values = xi.values - lam * xi.values * dt + lam * math.sqrt(dt) * z
    return OUState(values=values, time=xi.time + dt)


def ou_stationary_variance(ou_lambda: float) -> float:
    """Stationary variance lambda / 2 of d xi = -lambda xi dt + lambda dB."""
    return ou_lambda / 2.0


def ou_moments(
    mean0: float, var0: float, p: OUParams, steps: int
) -> Tuple[float, float]:
    """Mean and variance after `steps` updates of the chosen scheme.

    Both schemes are linear Gaussian recursions, so the moments propagate
    exactly: m' = a m, s' = a^2 s + b^2.
    """
    lam, dt = p.ou_lambda, p.dt
    if p.mode == "exact":
        a = math.exp(-lam * dt)
        b2 = lam * lam * (-math.expm1(-2.0 * lam * dt)) / (2.0 * lam) if lam else 0.0
    else:
        a = 1.0 - lam * dt
        b2 = lam * lam * dt
    mean, var = mean0, var0
    for _ in range(steps):
        mean = a * mean
        var = a * a * var + b2
    return mean, var


def vortex_velocity(x, vs: VortexSet, xi: OUState, d: Domain = Domain()) -> np.ndarray:
    """Evaluate U(x) = sum_k xi^k sigma_k(x) at one point or an (N, 2) array.

    sigma_k(x) = (1 / 2pi) r^perp / (|r|^2 + reg_eps^2) with r the minimal image
    of x - x_k and (a, b)^perp = (b, -a); the contribution is 0 at r = 0.
    """
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = pts.reshape(-1, 2)
    if len(vs) == 0:
        out = np.zeros_like(pts)
        return out[0] if single else out

    # (N, K, 2)
    r = min_image_displacement(vs.centers[None, :, :], pts[:, None, :], d)
    r2 = np.einsum("nkc,nkc->nk", r, r)
    denom = 2.0 * math.pi * (r2 + vs.reg_eps**2)
    with np.errstate(divide="ignore", invalid="ignore"):
        weight = np.where(r2 > 0, xi.values[None, :] / denom, 0.0)
    u = np.empty_like(pts)
    u[:, 0] = np.sum(weight * r[:, :, 1], axis=1)
    u[:, 1] = -np.sum(weight * r[:, :, 0], axis=1)
    return u[0] if single else u


def sample_vortex_centers(
    count: int,
    d: Domain,
    rng: Union[RngStream, np.random.Generator],
    reg_eps: float = 0.01,
) -> VortexSet:
    """Draw `count` i.i.d. uniform centres in the domain."""
    if count < 0:
        raise ValueError(f"Invalid Vortex Count: must be >= 0, got {count}")
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    centers = gen.uniform(-d.half_width, d.half_width, size=(count, 2))
    logger.debug("sampled %d vortex centres", count)
    return VortexSet(centers=centers, reg_eps=reg_eps)


__all__ = [
    "ou_step",
    "ou_stationary_variance",
    "ou_moments",
    "vortex_velocity",
    "sample_vortex_centers",
]
