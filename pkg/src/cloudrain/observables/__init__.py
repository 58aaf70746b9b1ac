"""
Observables Module.

Empirical-measure summaries of a replica, the closed-system volume check and
detection of the first rain-formation epoch.
"""

import math
from typing import Dict, Iterable, Optional

import numpy as np

from cloudrain.core import radius_from_volume, volume_from_radius
from cloudrain.types import MergeEvent, ObservableConfig, ParticleSet


def _is_raindrop(volume: float, rain_radius: float) -> bool:
    # either form of R >= R_rd, so a drop built at exactly R_rd counts
    return bool(
        radius_from_volume(volume) >= rain_radius
        or volume >= volume_from_radius(rain_radius)
    )


def detect_first_rain(particles: ParticleSet, cfg: ObservableConfig) -> bool:
    """True iff some alive particle has radius >= cfg.rain_radius."""
    volumes = particles.volumes[particles.alive]
    if volumes.size == 0:
        return False
    return _is_raindrop(float(volumes.max()), cfg.rain_radius)


def empirical_moment(particles: ParticleSet, p: float) -> float:
    """<mu^N, v^p> = (1 / N0) sum_alive v_i^p, with N0 the initial count."""
    if p < 0:
        raise ValueError(f"Invalid Moment Order: p must be >= 0, got {p}")
    n0 = len(particles)
    if n0 == 0:
        return 0.0
    volumes = particles.volumes[particles.alive]
    return math.fsum(np.power(volumes, p).tolist()) / n0


def total_volume(particles: ParticleSet) -> float:
    return math.fsum(particles.volumes[particles.alive].tolist())


def relative_volume_drift(initial: float, current: float) -> float:
    if initial == 0:
        return abs(current)
    return abs(current - initial) / initial


def summarize(particles: ParticleSet, cfg: ObservableConfig) -> Dict[str, float]:
    """Alive count, largest radius and the configured volume moments."""
    alive = particles.volumes[particles.alive]
    summary = {
        "n_alive": particles.n_alive,
        "total_volume": total_volume(particles),
        "max_radius": radius_from_volume(alive.max()) if alive.size else 0.0,
        "raining": detect_first_rain(particles, cfg),
    }
    for p in cfg.moment_orders:
        summary[f"moment_{p:g}"] = empirical_moment(particles, p)
    return summary


def formation_epoch_from_events(
    initial: ParticleSet, events: Iterable[MergeEvent], cfg: ObservableConfig
) -> Optional[int]:
    """Replay a merge log and return the first epoch at which rain is detected.

    Events must carry their epoch. Returns 0 if the initial state already
    rains and None if no event in the log reaches the threshold.
    """
    if detect_first_rain(initial, cfg):
        return 0
    volumes = initial.volumes.copy()
    for event in events:
        if event.epoch is None:
            raise ValueError("Invalid Event Log: replay requires epoch-stamped events")
        if max(event.absorber_id, event.absorbed_id) >= volumes.size:
            raise ValueError(
                f"Invalid Event Log: particle id out of range for {volumes.size} particles"
            )
        volumes[event.absorber_id] = volumes[event.absorber_id] + volumes[event.absorbed_id]
        volumes[event.absorbed_id] = 0.0
        if _is_raindrop(float(volumes[event.absorber_id]), cfg.rain_radius):
            return event.epoch
    return None


__all__ = [
    "detect_first_rain",
    "empirical_moment",
    "total_volume",
    "relative_volume_drift",
    "summarize",
    "formation_epoch_from_events",
]
