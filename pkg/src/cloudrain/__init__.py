"""
CloudRain Simulation Library.

Seeded stochastic particle simulator of droplet coagulation under Brownian
motion, gravitational settling and an Ornstein-Uhlenbeck driven vortex field,
with a Monte Carlo harness measuring the first rain-formation time and the
regression fits of formation time against the swept parameters.
"""

import asyncio
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from cloudrain.config import dump_config, load_config
from cloudrain.consts import experiment_presets, get_preset
from cloudrain.harness import oracle_compare, run_replica, run_sweep
from cloudrain.io import export_results, read_sweep_csv, write_plot_data, write_snapshots_csv
from cloudrain.regression import fit_all, fit_sweep
from cloudrain.types import (
    RegressionFit,
    ReplicaResult,
    SimConfig,
    SweepRow,
    SweepSpec,
)

__version__ = "0.1.0"


class RainSimulator:
    """Entry point bundling configuration, replicas, sweeps and fits."""

    def __init__(
        self,
        config: Optional[SimConfig] = None,
        seed: int = 0,
        workers: int = 1,
        config_path: Optional[Union[str, Path]] = None,
    ) -> None:
        """
        Initialize the RainSimulator.

        Args:
            config: Simulation parameters (defaults to SimConfig())
            seed: Master seed for every replica and sweep
            workers: Worker processes used by sweeps
            config_path: key = value file loaded when config is not given
        """
        if config is not None and config_path is not None:
            raise ValueError("Invalid Arguments: pass either config or config_path")
        if config_path is not None:
            config = load_config(config_path)
        if workers < 1:
            raise ValueError(f"Invalid Worker Count: must be >= 1, got {workers}")

        self.config = config if config is not None else SimConfig()
        self.seed = seed
        self.workers = workers

    @property
    def presets(self) -> List[str]:
        """Names of the bundled experiment presets."""
        return sorted(experiment_presets)

    def with_config(self, **changes) -> "RainSimulator":
        """Copy of this simulator with some configuration fields replaced."""
        return RainSimulator(self.config.with_updates(**changes), self.seed, self.workers)

    def simulate(
        self, stream_id: int = 0, snapshot_every: Optional[int] = None
    ) -> ReplicaResult:
        return run_replica(self.config, self.seed, stream_id, snapshot_every=snapshot_every)

    def sweep(
        self, spec: Union[SweepSpec, str], replicas_per_value: Optional[int] = None
    ) -> List[SweepRow]:
        """Run a SweepSpec or a named preset over this simulator's seed."""
        if isinstance(spec, str):
            spec = get_preset(spec, replicas_per_value or 10)
        elif replicas_per_value is not None:
            spec = spec.model_copy(update={"replicas_per_value": replicas_per_value})
        return run_sweep(spec, self.seed, self.workers)

    def fit(
        self, rows: Sequence[SweepRow], model: str = "quadratic", target: str = "time", **kwargs
    ) -> RegressionFit:
        return fit_sweep(rows, model, target, **kwargs)

    def fit_all(
        self, rows: Sequence[SweepRow]
    ) -> Dict[str, Dict[str, Optional[RegressionFit]]]:
        """Quadratic, log-log and rational fits against both time and 1 / time."""
        return fit_all(rows)

    def oracle_compare(self, n: int = 10, horizon: float = 1.0, replicas: int = 5000) -> Dict:
        return oracle_compare(n, horizon, replicas, self.seed)

    def export(self, obj, path, format: str = "csv") -> Path:
        return export_results(obj, path, format, master_seed=self.seed, config=self.config)

    def export_snapshots(self, result: ReplicaResult, path) -> Path:
        return write_snapshots_csv(result.snapshots, path)

    def save_config(self, path) -> Path:
        return dump_config(self.config, path)

    async def simulate_async(
        self, stream_id: int = 0, snapshot_every: Optional[int] = None
    ) -> ReplicaResult:
        """
        Run one replica without blocking the event loop.

        Args:
            stream_id: Replica stream within the master seed
            snapshot_every: Epochs between recorded particle snapshots

        Returns:
            ReplicaResult: Formation epoch and merge log
        """
        return await asyncio.to_thread(self.simulate, stream_id, snapshot_every)

    async def sweep_async(
        self, spec: Union[SweepSpec, str], replicas_per_value: Optional[int] = None
    ) -> List[SweepRow]:
        return await asyncio.to_thread(self.sweep, spec, replicas_per_value)

    async def simulate_many(self, stream_ids: Sequence[int]) -> List[ReplicaResult]:
        """Run several replicas concurrently; results follow stream_ids order."""
        return list(await asyncio.gather(*(self.simulate_async(s) for s in stream_ids)))


__all__ = [
    "RainSimulator",
    "SimConfig",
    "SweepSpec",
    "SweepRow",
    "ReplicaResult",
    "RegressionFit",
    "load_config",
    "dump_config",
    "get_preset",
    "read_sweep_csv",
    "write_plot_data",
    "__version__",
]
