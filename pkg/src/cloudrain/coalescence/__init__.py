"""
Coalescence Module.

Geometric contact detection on the periodic domain (uniform spatial hash),
the stochastic coalescence pass used by the time-stepped simulator, and two
pure-coalescence references with frozen positions built on the pair rates
T_N^delta(i, j): an exact event-driven (Gillespie) run and a stepped run that
merges each in-range pair with probability rate * dt per step.

Merge rule everywhere: the larger volume absorbs, ties go to the first index
of the pair, and the absorber keeps its position.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from cloudrain.core import min_image_displacement, radius_from_volume
from cloudrain.kernels import contact_scale, t_delta_kernel
from cloudrain.types import (
    CoalescenceParams,
    Domain,
    KernelRateParams,
    MergeEvent,
    Particle,
    ParticleSet,
)

logger = logging.getLogger(__name__)

ContactPair = Tuple[int, int, float]

MAX_ORACLE_PAIRS = 10_000
# keeps cell keys inside int64
_MAX_CELLS_PER_AXIS = 1 << 20


def _sorted_pairs(i, j, dist) -> List[ContactPair]:
    order = np.lexsort((j, i, dist))
    return [(int(i[k]), int(j[k]), float(dist[k])) for k in order]


def _pair_distances(positions, src, dst, d: Domain) -> np.ndarray:
    delta = min_image_displacement(positions[src], positions[dst], d)
    return np.hypot(delta[:, 0], delta[:, 1])


def brute_force_contact_pairs(particles: ParticleSet, d: Domain) -> List[ContactPair]:
    """O(N^2) reference for find_contact_pairs."""
    idx = np.flatnonzero(particles.alive)
    if idx.size < 2:
        return []
    src, dst = np.triu_indices(idx.size, k=1)
    i, j = idx[src], idx[dst]
    dist = _pair_distances(particles.positions, i, j, d)
    radii = radius_from_volume(particles.volumes)
    mask = dist <= radii[i] + radii[j]
    return _sorted_pairs(i[mask], j[mask], dist[mask])


def find_contact_pairs(particles: ParticleSet, d: Domain) -> List[ContactPair]:
    """All alive pairs with |x_i - x_j| <= R_i + R_j, ascending by distance.

    Each unordered pair appears once as (i, j, distance) with i < j. Candidates
    come from a uniform hash grid whose cells are at least 2 * max radius wide,
    so touching droplets always sit in the same or adjacent cells.
    """
    idx = np.flatnonzero(particles.alive)
    if idx.size < 2:
        return []
    pos = particles.positions[idx]
    radii = radius_from_volume(particles.volumes[idx])
    r_max = float(radii.max())
    length = d.length

    n_cells = _MAX_CELLS_PER_AXIS if r_max == 0 else int(length // (2.0 * r_max))
    n_cells = min(n_cells, _MAX_CELLS_PER_AXIS)
    if n_cells < 3:
        return brute_force_contact_pairs(particles, d)

    cell = length / n_cells
    coords = np.floor((pos + d.half_width) / cell).astype(np.int64)
    np.clip(coords, 0, n_cells - 1, out=coords)
    keys = coords[:, 0] * n_cells + coords[:, 1]
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    local = np.arange(idx.size)

    sources, targets = [], []
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            neighbor = ((coords[:, 0] + dx) % n_cells) * n_cells + (
                (coords[:, 1] + dy) % n_cells
            )
            lo = np.searchsorted(sorted_keys, neighbor, side="left")
            hi = np.searchsorted(sorted_keys, neighbor, side="right")
            counts = hi - lo
            total = int(counts.sum())
            if total == 0:
                continue
            src = np.repeat(local, counts)
            offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
            dst = order[np.repeat(lo, counts) + offsets]
            keep = src < dst
            sources.append(src[keep])
            targets.append(dst[keep])

    if not sources:
        return []
    src = np.concatenate(sources)
    dst = np.concatenate(targets)
    dist = _pair_distances(pos, src, dst, d)
    mask = dist <= radii[src] + radii[dst]
    return _sorted_pairs(idx[src[mask]], idx[dst[mask]], dist[mask])


def _merge(volumes: np.ndarray, alive: np.ndarray, i: int, j: int) -> Tuple[int, int]:
    absorber, absorbed = (i, j) if volumes[i] >= volumes[j] else (j, i)
    volumes[absorber] = volumes[absorber] + volumes[absorbed]
    volumes[absorbed] = 0.0
    alive[absorbed] = False
    return absorber, absorbed


def coalesce_pass(
    particles: ParticleSet,
    pairs: List[ContactPair],
    cp: CoalescenceParams,
    rng: np.random.Generator,
    time: float = 0.0,
    epoch: Optional[int] = None,
) -> Tuple[ParticleSet, List[MergeEvent]]:
    """Apply the stochastic coalescence rule to the contact pairs in order.

    For every pair whose members are both still alive a uniform phi in (0, 1]
    is drawn and the pair merges iff phi > p_mean. Absorbers carry their
    updated volume into later pairs of the same pass.
    """
    volumes = particles.volumes.copy()
    alive = particles.alive.copy()
    events: List[MergeEvent] = []
    for i, j, _ in pairs:
        if not (alive[i] and alive[j]):
            continue
        phi = 1.0 - rng.random()
        if phi <= cp.p_mean:
            continue
        absorber, absorbed = _merge(volumes, alive, i, j)
        events.append(
            MergeEvent(
                time=time,
                epoch=epoch,
                absorber_id=int(particles.ids[absorber]),
                absorbed_id=int(particles.ids[absorbed]),
                volume_after=float(volumes[absorber]),
            )
        )
    if events:
        logger.debug("coalescence pass merged %d pairs", len(events))
    merged = ParticleSet(
        ids=particles.ids, positions=particles.positions, volumes=volumes, alive=alive
    )
    return merged, events


def tn_delta_rate(i: Particle, j: Particle, kp: KernelRateParams, d: Domain) -> float:
    """T_N^delta(i, j) = (1/2) N^-1 delta^-3 1{|x_i - x_j| <= delta f(v_i, v_j)} k(v_i, v_j)."""
    if not (i.alive and j.alive):
        return 0.0
    rate = t_delta_kernel(
        i.position,
        i.volume,
        j.position,
        j.volume,
        kp.delta,
        kp.efficiency,
        kp.exponent,
        d,
    )
    return rate / kp.n_scale


def _efficiency_values(kp: KernelRateParams, vi: np.ndarray, vj: np.ndarray) -> np.ndarray:
    try:
        values = np.asarray(kp.efficiency(vi, vj), dtype=float)
        return np.broadcast_to(values, vi.shape)
    except (TypeError, ValueError):
        return np.array([kp.efficiency(a, b) for a, b in zip(vi, vj)], dtype=float)


def pair_rates(particles: ParticleSet, kp: KernelRateParams, d: Domain):
    """Rates of every unordered alive pair.

    Returns:
        (i, j, distance, rate) arrays with i < j
    """
    idx = np.flatnonzero(particles.alive)
    src, dst = np.triu_indices(idx.size, k=1)
    i, j = idx[src], idx[dst]
    if i.size > MAX_ORACLE_PAIRS:
        raise ValueError(
            f"Invalid Oracle Size: {i.size} pairs exceeds {MAX_ORACLE_PAIRS}"
        )
    dist = _pair_distances(particles.positions, i, j, d)
    vi, vj = particles.volumes[i], particles.volumes[j]
    in_range = dist <= kp.delta * contact_scale(vi, vj)
    base = 0.5 / kp.n_scale * kp.delta ** (-kp.exponent)
    rates = np.where(in_range, base * _efficiency_values(kp, vi, vj), 0.0)
    return i, j, dist, rates


def gillespie_run(
    particles: ParticleSet,
    kp: KernelRateParams,
    horizon: float,
    rng: np.random.Generator,
    d: Domain = Domain(),
) -> Tuple[ParticleSet, List[MergeEvent]]:
    """Exact simulation of the pure-coalescence jump process up to `horizon`.

    Each iteration draws an exponential waiting time with the total rate, then
    a uniform to select the pair proportionally to its rate.
    """
    volumes = particles.volumes.copy()
    alive = particles.alive.copy()
    state = ParticleSet(
        ids=particles.ids, positions=particles.positions, volumes=volumes, alive=alive
    )
    events: List[MergeEvent] = []
    t = 0.0
    while True:
        i, j, _, rates = pair_rates(state, kp, d)
        total = float(rates.sum())
        if total <= 0:
            break
        wait = rng.exponential(1.0 / total)
        if t + wait > horizon:
            break
        t += wait
        cumulative = np.cumsum(rates)
        pick = int(np.searchsorted(cumulative, rng.random() * total, side="right"))
        pick = min(pick, rates.size - 1)
        absorber, absorbed = _merge(volumes, alive, int(i[pick]), int(j[pick]))
        events.append(
            MergeEvent(
                time=t,
                absorber_id=int(particles.ids[absorber]),
                absorbed_id=int(particles.ids[absorbed]),
                volume_after=float(volumes[absorber]),
            )
        )
    return state, events


def stepped_coalescence_run(
    particles: ParticleSet,
    kp: KernelRateParams,
    horizon: float,
    dt: float,
    rng: np.random.Generator,
    d: Domain = Domain(),
) -> Tuple[ParticleSet, List[MergeEvent]]:
    """Time-stepped counterpart of gillespie_run with frozen positions.

    Every step draws one uniform per alive pair; pairs with u < rate * dt merge
    in ascending-distance order, skipping pairs that lost a member earlier in
    the same step.
    """
    volumes = particles.volumes.copy()
    alive = particles.alive.copy()
    state = ParticleSet(
        ids=particles.ids, positions=particles.positions, volumes=volumes, alive=alive
    )
    events: List[MergeEvent] = []
    n_steps = int(round(horizon / dt))
    for step in range(1, n_steps + 1):
        i, j, dist, rates = pair_rates(state, kp, d)
        if not np.any(rates > 0):
            break
        probs = rates * dt
        if np.any(probs > 1):
            logger.warning("rate * dt exceeds 1 (max %.3g); reduce dt", probs.max())
        hits = np.flatnonzero(rng.random(rates.size) < probs)
        for h in hits[np.lexsort((j[hits], i[hits], dist[hits]))]:
            a, b = int(i[h]), int(j[h])
            if not (alive[a] and alive[b]):
                continue
            absorber, absorbed = _merge(volumes, alive, a, b)
            events.append(
                MergeEvent(
                    time=step * dt,
                    epoch=step,
                    absorber_id=int(particles.ids[absorber]),
                    absorbed_id=int(particles.ids[absorbed]),
                    volume_after=float(volumes[absorber]),
                )
            )
    return state, events


__all__ = [
    "ContactPair",
    "brute_force_contact_pairs",
    "find_contact_pairs",
    "coalesce_pass",
    "tn_delta_rate",
    "pair_rates",
    "gillespie_run",
    "stepped_coalescence_run",
]
