"""
Coagulation Kernels Module.

Evaluators for the geometric contact scale f(v, w), the mollified rate
T^delta, the jump functionals J^phi and the local kernel k f^3 obtained as
delta -> 0, plus a numerical check of that localisation by ball averages.

Two normalisations of the local kernel appear side by side in the model:
k f^3 = k (3 / 4pi) (v^1/3 + w^1/3)^3 and (pi / 2)(v^1/3 + w^1/3)^3 E. They differ
by the constant returned by ``normalization_ratio``; neither is rescaled here.
"""

import logging
import math
from typing import Callable, List, Optional, Sequence

import numpy as np

from cloudrain.core import min_image_displacement
from cloudrain.errors import QuadratureError
from cloudrain.types import Domain, unit_efficiency

logger = logging.getLogger(__name__)

_RADIUS_FACTOR = (3.0 / (4.0 * math.pi)) ** (1.0 / 3.0)


def contact_scale(v, w):
    """f(v, w) = (v^1/3 + w^1/3)(3 / 4pi)^1/3, the sum of the two sphere radii."""
    return (np.cbrt(v) + np.cbrt(w)) * _RADIUS_FACTOR


def t_delta_kernel(
    x,
    v: float,
    y,
    w: float,
    delta: float,
    efficiency: Callable = unit_efficiency,
    exponent: int = 3,
    d: Domain = Domain(),
) -> float:
    """T^delta(x, v, y, w) = (1/2) delta^-exponent 1{|x - y| <= delta f(v, w)} k(v, w)."""
    dist = float(np.linalg.norm(min_image_displacement(x, y, d)))
    if dist > delta * contact_scale(v, w):
        return 0.0
    return 0.5 * delta ** (-exponent) * efficiency(v, w)


def j_phi_local(phi: Callable, x, v: float, w: float) -> float:
    """J^phi(x, v, w) = phi(x, v + w) - phi(x, v) - phi(x, w)."""
    return phi(x, v + w) - phi(x, v) - phi(x, w)


def j_phi_nonlocal(phi: Callable, x, v: float, y, w: float) -> float:
    """Jump functional of a merge of (x, v) and (y, w); the larger volume keeps its place."""
    merged = phi(x, v + w) if v >= w else phi(y, v + w)
    return merged - phi(x, v) - phi(y, w)


def local_limit_kernel(v, w, k: Callable = unit_efficiency):
    """k(v, w) f(v, w)^3 = k(v, w) (3 / 4pi)(v^1/3 + w^1/3)^3."""
    return k(v, w) * contact_scale(v, w) ** 3


def normalization_ratio() -> float:
    """Ratio (pi / 2) / (3 / 4pi) between the two stated kernel normalisations."""
    return (math.pi / 2.0) / (3.0 / (4.0 * math.pi))


def _ball_nodes(center, radius: float, n_radial: int, n_angular: int):
    r = (np.arange(n_radial) + 0.5) * radius / n_radial
    theta = (np.arange(n_angular) + 0.5) * 2.0 * math.pi / n_angular
    rr, tt = np.meshgrid(r, theta, indexing="ij")
    pts = np.stack(
        [center[0] + rr * np.cos(tt), center[1] + rr * np.sin(tt)], axis=-1
    ).reshape(-1, 2)
    # midpoint weights of the polar area element, normalised by pi radius^2
    weights = (rr * (radius / n_radial) * (2.0 * math.pi / n_angular)).reshape(-1)
    return pts, weights / (math.pi * radius**2)


def ball_average(
    rho: Callable,
    center,
    w: float,
    radius: float,
    n_radial: int = 16,
    n_angular: int = 32,
) -> float:
    """Midpoint-rule average of rho(y, w) over the disc B_center(radius)."""
    if n_radial * n_angular < 64:
        raise ValueError("Invalid Quadrature: at least 64 nodes are required")
    pts, weights = _ball_nodes(np.asarray(center, dtype=float), radius, n_radial, n_angular)
    values = np.asarray(rho(pts, w), dtype=float)
    return float(np.dot(weights, values))


def ball_average_error(
    rho: Callable,
    phi: Callable,
    x,
    v: float,
    delta_list: Sequence[float],
    w: Optional[float] = None,
    n_radial: int = 16,
    n_angular: int = 32,
) -> List[float]:
    """Distance between the ball average of J^phi rho and its pointwise value.

    For each delta, averages J^phi(x, v, w) rho(y, w) over y in B_x(delta f(v, w))
    (normalised by the disc area) and returns |average - J^phi(x, v, w) rho(x, w)|.

    Args:
        rho: Density evaluator rho(points (M, 2), w) -> (M,)
        phi: Test function phi(x, v)
        x: Centre point
        v: Volume of the first droplet
        delta_list: Decreasing interaction scales
        w: Partner volume (defaults to v)

    Raises:
        QuadratureError: If doubling the nodes moves an average by more than 10%
    """
    if any(b > a for a, b in zip(delta_list, delta_list[1:])):
        raise ValueError("Invalid Delta List: values must be decreasing")
    w = v if w is None else w
    x = np.asarray(x, dtype=float)
    jump = j_phi_local(phi, x, v, w)
    pointwise = jump * float(np.asarray(rho(x.reshape(1, 2), w)).reshape(-1)[0])

    errors = []
    for delta in delta_list:
        radius = delta * float(contact_scale(v, w))
        coarse = jump * ball_average(rho, x, w, radius, n_radial, n_angular)
        fine = jump * ball_average(rho, x, w, radius, 2 * n_radial, 2 * n_angular)
        change = abs(fine - coarse)
        if change > 1e-12 and change > 0.1 * abs(coarse):
            raise QuadratureError(
                f"Quadrature Not Converged: delta={delta}, coarse={coarse}, fine={fine}"
            )
        errors.append(abs(fine - pointwise))
    logger.debug("ball average errors %s", errors)
    return errors


__all__ = [
    "contact_scale",
    "t_delta_kernel",
    "j_phi_local",
    "j_phi_nonlocal",
    "local_limit_kernel",
    "normalization_ratio",
    "ball_average",
    "ball_average_error",
]
