"""
Experiment Harness Module.

Runs seeded replicas of the droplet simulator, aggregates parameter sweeps
into SweepRow tables and hosts the two Monte Carlo benchmarks that do not use
the full simulator: the two-particle Brownian hitting time and the
Gillespie-versus-stepped pure-coalescence comparison.

Every replica draws from its own (seed, stream_id) stream, so a sweep gives
the same table whatever the worker count or completion order.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from cloudrain.coalescence import (
    coalesce_pass,
    find_contact_pairs,
    gillespie_run,
    stepped_coalescence_run,
)
from cloudrain.core import make_generator, volume_from_radius
from cloudrain.dynamics import em_step
from cloudrain.field import ou_step, sample_vortex_centers
from cloudrain.observables import (
    detect_first_rain,
    relative_volume_drift,
    total_volume,
)
from cloudrain.types import (
    KernelRateParams,
    OUState,
    ParticleSet,
    ParticleSnapshot,
    ReplicaResult,
    SimConfig,
    SweepRow,
    SweepSpec,
)

logger = logging.getLogger(__name__)

# stream reserved for vortex centres shared by every replica
PINNED_VORTEX_STREAM = 2**32


def init_particles(cfg: SimConfig, rng: np.random.Generator) -> ParticleSet:
    """Uniform positions on the domain and uniform initial sizes.

    In "radius" mode R0 ~ U[r0_min_frac R_rd, r0_max_frac R_rd]; in "volume"
    mode V0 ~ U[r0_min_frac V_rd, r0_max_frac V_rd].
    """
    hw = cfg.half_width
    n = cfg.n_particles
    positions = rng.uniform(-hw, hw, size=(n, 2))
    if cfg.initial_size_mode == "radius":
        radii = rng.uniform(
            cfg.r0_min_frac * cfg.rain_radius, cfg.r0_max_frac * cfg.rain_radius, n
        )
        volumes = volume_from_radius(radii)
    else:
        volumes = rng.uniform(
            cfg.r0_min_frac * cfg.rain_volume, cfg.r0_max_frac * cfg.rain_volume, n
        )
    return ParticleSet.from_arrays(positions, volumes)


def replica_vortices(cfg: SimConfig, seed: int, rng: np.random.Generator):
    """Vortex centres of a replica, or None when the random field is off.

    Pinned centres come from a reserved stream shared by every replica.
    """
    if not cfg.eps_rf or cfg.n_vortices == 0:
        return None
    if cfg.pin_vortices:
        pinned_seed = cfg.vortex_seed if cfg.vortex_seed is not None else seed
        source = make_generator(pinned_seed, PINNED_VORTEX_STREAM)
    else:
        source = rng
    return sample_vortex_centers(cfg.n_vortices, cfg.domain(), source, cfg.reg_eps)


def run_replica(
    cfg: SimConfig,
    seed: int,
    stream_id: int = 0,
    particles: Optional[ParticleSet] = None,
    snapshot_every: Optional[int] = None,
) -> ReplicaResult:
    """Simulate one replica until rain forms or max_epochs is reached.

    Epoch 0 only checks the initial state. Each later epoch advances the OU
    amplitudes, moves the droplets, resolves contacts and checks for rain.

    Args:
        cfg: Simulation parameters
        seed: Master seed
        stream_id: Replica stream within the seed
        particles: Optional explicit initial state (skips the size draw)
        snapshot_every: Record the alive particles at epoch 0, every this many
            epochs and at the last epoch

    Raises:
        NumericalBlowupError: If a position becomes non-finite
        OUStabilityError: If dt * lambda >= 1 with the field on
    """
    if snapshot_every is not None and snapshot_every < 1:
        raise ValueError(f"Invalid Snapshot Interval: must be >= 1, got {snapshot_every}")
    rng = make_generator(seed, stream_id)
    d = cfg.domain()
    vortices = replica_vortices(cfg, seed, rng)
    state = init_particles(cfg, rng) if particles is None else particles.copy()
    motion = cfg.motion_params()
    ou_params = cfg.ou_params()
    coalescence = cfg.coalescence_params()
    observed = cfg.observable_config()
    xi = OUState.zeros(len(vortices) if vortices is not None else 0)

    initial_count = len(state)
    initial_volume = total_volume(state)
    max_drift = 0.0
    events = []
    formation_epoch = 0 if detect_first_rain(state, observed) else None
    epoch = 0
    snapshots = []
    if snapshot_every is not None:
        snapshots.append(ParticleSnapshot.capture(state, 0, cfg.dt))

    while formation_epoch is None and epoch < cfg.max_epochs:
        epoch += 1
        field = None
        if vortices is not None:
            xi = ou_step(xi, ou_params, rng.standard_normal(len(vortices)))
            field = (vortices, xi)
        state = em_step(state, field, motion, rng, d)
        pairs = find_contact_pairs(state, d)
        if pairs:
            state, merged = coalesce_pass(
                state, pairs, coalescence, rng, time=epoch * cfg.dt, epoch=epoch
            )
            if merged:
                events.extend(merged)
                max_drift = max(
                    max_drift, relative_volume_drift(initial_volume, total_volume(state))
                )
        if detect_first_rain(state, observed):
            formation_epoch = epoch
        if snapshot_every is not None and epoch % snapshot_every == 0:
            snapshots.append(ParticleSnapshot.capture(state, epoch, cfg.dt))

    if snapshot_every is not None and snapshots[-1].epoch != epoch:
        snapshots.append(ParticleSnapshot.capture(state, epoch, cfg.dt))

    logger.debug(
        "replica seed=%d stream=%d: epoch=%s after %d epochs, %d merges",
        seed,
        stream_id,
        formation_epoch,
        epoch,
        len(events),
    )
    return ReplicaResult(
        seed=seed,
        stream_id=stream_id,
        dt=cfg.dt,
        formation_epoch=formation_epoch,
        formation_time=None if formation_epoch is None else formation_epoch * cfg.dt,
        epochs_run=epoch,
        events=events,
        initial_count=initial_count,
        final_alive=state.n_alive,
        initial_volume=initial_volume,
        final_volume=total_volume(state),
        max_volume_drift=max_drift,
        snapshots=snapshots,
    )


def apply_sweep_value(base: SimConfig, varying: str, value: float) -> SimConfig:
    """Configuration of one sweep point."""
    if varying == "sigma":
        return base.with_updates(sigma=value)
    if varying == "vortex_count":
        return base.with_updates(n_vortices=int(round(value)))
    if varying == "lambda":
        return base.with_updates(ou_lambda=value)
    raise ValueError(f"Invalid Sweep Parameter: {varying}")


def aggregate_rows(value: float, results: Sequence[ReplicaResult], dt: float) -> SweepRow:
    """Mean and sample standard deviation over the uncensored replicas."""
    epochs = sorted(r.formation_epoch for r in results if not r.censored)
    censored = len(results) - len(epochs)
    if not epochs:
        return SweepRow(value=value, censored=censored, n_replicas=len(results))
    mean_epoch = math.fsum(epochs) / len(epochs)
    std_dev = float(np.std(epochs, ddof=1)) if len(epochs) > 1 else 0.0
    return SweepRow(
        value=value,
        mean_epoch=mean_epoch,
        mean_time=mean_epoch * dt,
        std_dev=std_dev,
        censored=censored,
        n_replicas=len(results),
    )


def _replica_task(task: Tuple[int, SimConfig, int, int]) -> Tuple[int, ReplicaResult]:
    value_index, cfg, seed, stream_id = task
    return value_index, run_replica(cfg, seed, stream_id)


def run_sweep_results(
    spec: SweepSpec, master_seed: int, workers: int = 1
) -> Dict[float, List[ReplicaResult]]:
    """All replica results of a sweep, grouped by value in stream order.

    Stream ids are value_index * replicas_per_value + replica_index.
    """
    n_r = spec.replicas_per_value
    tasks = []
    for vi, value in enumerate(spec.values):
        cfg = apply_sweep_value(spec.base, spec.varying, value)
        for r in range(n_r):
            tasks.append((vi, cfg, master_seed, vi * n_r + r))

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(_replica_task, tasks, chunksize=max(1, n_r // 2)))
    else:
        outputs = [_replica_task(task) for task in tasks]

    grouped: Dict[float, List[ReplicaResult]] = {v: [] for v in spec.values}
    for vi, result in sorted(outputs, key=lambda o: (o[0], o[1].stream_id)):
        grouped[spec.values[vi]].append(result)
    return grouped


def run_sweep(spec: SweepSpec, master_seed: int, workers: int = 1) -> List[SweepRow]:
    """Run every sweep value and return one SweepRow per value, in value order."""
    logger.info(
        "sweep %s over %s: %d values x %d replicas",
        spec.name or "custom",
        spec.varying,
        len(spec.values),
        spec.replicas_per_value,
    )
    grouped = run_sweep_results(spec, master_seed, workers)
    rows = []
    for value in spec.values:
        cfg = apply_sweep_value(spec.base, spec.varying, value)
        row = aggregate_rows(value, grouped[value], cfg.dt)
        logger.info("%s=%g: mean epoch %s", spec.varying, value, row.mean_epoch)
        if row.censored:
            logger.warning(
                "%s=%g: %d of %d replicas censored at %d epochs",
                spec.varying,
                value,
                row.censored,
                row.n_replicas,
                cfg.max_epochs,
            )
        rows.append(row)
    return rows


def two_particle_hitting_epochs(
    sigma: float,
    eps: float = 0.05,
    n_replicas: int = 2000,
    dt: float = 1e-4,
    x0: float = 0.25,
    max_steps: int = 1_000_000,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """Epochs until two Brownian particles on the unit torus come within eps.

    Both particles start x0 apart along the first axis and move with
    independent increments sigma dB. Replicas still apart after max_steps are
    returned as NaN.
    """
    if sigma <= 0:
        raise ValueError(f"Invalid Sigma: must be > 0, got {sigma}")
    if not 0 < eps < x0 <= 0.5:
        raise ValueError("Invalid Hitting Setup: need 0 < eps < x0 <= 0.5")
    rng = rng if rng is not None else make_generator(0)
    separation = np.zeros((n_replicas, 2))
    separation[:, 0] = x0
    epochs = np.full(n_replicas, np.nan)
    active = np.arange(n_replicas)
    scale = sigma * math.sqrt(dt)

    for step in range(1, max_steps + 1):
        increments = rng.standard_normal((active.size, 2, 2))
        separation[active] += scale * (increments[:, 0] - increments[:, 1])
        sep = separation[active]
        sep -= np.round(sep)
        hit = np.hypot(sep[:, 0], sep[:, 1]) <= eps
        if np.any(hit):
            epochs[active[hit]] = step
            active = active[~hit]
            if active.size == 0:
                break
    if active.size:
        logger.warning("%d of %d two-particle replicas censored", active.size, n_replicas)
    return epochs


def brownian_scaling_ratio(
    sigmas: Tuple[float, float] = (0.5, 1.0),
    seed: int = 0,
    **kwargs,
) -> float:
    """E[tau_sigma0] / E[tau_sigma1] for the two-particle benchmark (sigma^-2 law)."""
    means = []
    for stream_id, sigma in enumerate(sigmas):
        epochs = two_particle_hitting_epochs(
            sigma, rng=make_generator(seed, stream_id), **kwargs
        )
        means.append(float(np.nanmean(epochs)))
    return means[0] / means[1]


def oracle_compare(
    n: int = 10,
    horizon: float = 1.0,
    replicas: int = 5000,
    seed: int = 0,
    dt: float = 0.01,
) -> Dict[str, float]:
    """Mean merge counts of the Gillespie and stepped pure-coalescence runs.

    All n droplets share one position with unit volume, so every pair stays in
    range; k == 1, delta = 1 and n_scale = n.
    """
    kp = KernelRateParams(delta=1.0, n_scale=float(n))
    particles = ParticleSet.from_arrays(np.zeros((n, 2)), np.ones(n))
    exact, stepped = [], []
    for r in range(replicas):
        _, events = gillespie_run(particles, kp, horizon, make_generator(seed, r))
        exact.append(len(events))
        _, events = stepped_coalescence_run(
            particles, kp, horizon, dt, make_generator(seed, replicas + r)
        )
        stepped.append(len(events))
    gillespie_mean = float(np.mean(exact))
    stepped_mean = float(np.mean(stepped))
    return {
        "n": n,
        "horizon": horizon,
        "replicas": replicas,
        "dt": dt,
        "gillespie_mean": gillespie_mean,
        "stepped_mean": stepped_mean,
        "relative_difference": abs(stepped_mean - gillespie_mean)
        / max(gillespie_mean, 1e-300),
    }


__all__ = [
    "PINNED_VORTEX_STREAM",
    "init_particles",
    "replica_vortices",
    "run_replica",
    "apply_sweep_value",
    "aggregate_rows",
    "run_sweep_results",
    "run_sweep",
    "two_particle_hitting_epochs",
    "brownian_scaling_ratio",
    "oracle_compare",
]
