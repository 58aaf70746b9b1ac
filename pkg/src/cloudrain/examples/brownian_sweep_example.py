#!/usr/bin/env python3
"""
Brownian Sweep Example using cloudrain.

Runs a small sigma sweep with the RainSimulator facade, writes the table and
plot triples, fits the quadratic, log-log and rational models to both mean
time and 1 / mean time, and records particle snapshots of one replica.
Set CLOUDRAIN_CONFIG to a key = value file to replace the desk geometry.
"""

import asyncio
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from cloudrain import RainSimulator, SimConfig, SweepSpec, write_plot_data

DESK_CONFIG = SimConfig(
    half_width=0.5,
    n_particles=300,
    max_epochs=3000,
    rain_radius=0.02,
    initial_size_mode="volume",
    r0_min_frac=0.2,
    r0_max_frac=0.4,
)


async def brownian_sweep_example(
    replicas: int = 5,
    out_dir: str = "results/brownian",
    config: Optional[SimConfig] = None,
    seed: int = 1,
):
    """Sweep sigma over 0.2..1.0 and print the fitted trends."""
    load_dotenv()
    config_path = os.getenv("CLOUDRAIN_CONFIG")
    if config is None and config_path:
        sim = RainSimulator(config_path=config_path, seed=seed)
    else:
        sim = RainSimulator(config or DESK_CONFIG, seed=seed)

    spec = SweepSpec(
        varying="sigma",
        values=[0.2, 0.4, 0.6, 0.8, 1.0],
        replicas_per_value=replicas,
        base=sim.config,
    )
    print(f"Sweeping sigma over {spec.values} ({replicas} replicas each)")
    rows = await sim.sweep_async(spec)

    out = Path(out_dir)
    sim.export(rows, out / "sweep.csv")
    sim.export(rows, out / "sweep.json", format="json")
    write_plot_data(rows, out / "plot.csv")

    for row in rows:
        print(
            f"  sigma={row.value:.1f}  mean epoch={row.mean_epoch}  "
            f"std={row.std_dev}  censored={row.censored}/{row.n_replicas}"
        )

    fits = {}
    if sum(r.mean_time is not None for r in rows) >= 4:
        fits = sim.fit_all(rows)
        for model, by_target in fits.items():
            for target, fit in by_target.items():
                if fit is None:
                    print(f"{model} vs {target}: not fitted")
                    continue
                print(
                    f"{model} vs {target}: coefficients={fit.coefficients} "
                    f"R^2={fit.r_squared:.4f}"
                )
    else:
        print("Too many censored values to fit; raise max_epochs")

    replica = await sim.simulate_async(0, snapshot_every=50)
    sim.export_snapshots(replica, out / "snapshots.csv")
    print(f"Wrote {len(replica.snapshots)} snapshots of replica 0")
    return rows, fits


if __name__ == "__main__":
    asyncio.run(brownian_sweep_example())
