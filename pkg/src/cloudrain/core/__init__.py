"""
Core Geometry Module.

Periodic-domain geometry, sphere volume/radius conversions and seeded random
streams shared by every other module. All functions accept scalars or numpy
arrays of points with a trailing axis of length 2.
"""

import math

import numpy as np

from cloudrain.errors import InvalidStateError
from cloudrain.types import Domain, RngStream

_VOLUME_FACTOR = 4.0 / 3.0 * math.pi


def wrap_position(p, d: Domain) -> np.ndarray:
    """Map coordinates into [-half_width, half_width); points inside are untouched."""
    p = np.asarray(p, dtype=float)
    hw = d.half_width
    length = d.length
    wrapped = np.mod(p + hw, length) - hw
    # np.mod can round up to exactly `length`
    wrapped = np.where(wrapped >= hw, wrapped - length, wrapped)
    inside = (p >= -hw) & (p < hw)
    return np.where(inside, p, wrapped)


def min_image_displacement(a, b, d: Domain) -> np.ndarray:
    """Shortest periodic representative of b - a."""
    delta = np.asarray(b, dtype=float) - np.asarray(a, dtype=float)
    length = d.length
    return delta - length * np.round(delta / length)


def radius_from_volume(v):
    """Radius of a sphere of volume v: (3v / 4pi)^(1/3)."""
    arr = np.asarray(v, dtype=float)
    if np.any(arr < 0):
        raise InvalidStateError(f"Invalid Volume: volume must be >= 0, got {v}")
    r = np.cbrt(arr / _VOLUME_FACTOR)
    return float(r) if r.ndim == 0 else r


def volume_from_radius(r):
    """Volume of a sphere of radius r."""
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise InvalidStateError(f"Invalid Radius: radius must be >= 0, got {r}")
    v = _VOLUME_FACTOR * arr**3
    return float(v) if v.ndim == 0 else v


def make_generator(seed: int, stream_id: int = 0) -> np.random.Generator:
    """Generator for the (seed, stream_id) stream."""
    return RngStream(seed=seed, stream_id=stream_id).generator()


__all__ = [
    "wrap_position",
    "min_image_displacement",
    "radius_from_volume",
    "volume_from_radius",
    "make_generator",
]
