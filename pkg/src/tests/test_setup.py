"""
Test setup and initialization for the RainSimulator facade.

Tests construction, configuration handling and the async wrappers.
"""

import re
from importlib import metadata

import pytest

from cloudrain import RainSimulator, SimConfig, __version__
from cloudrain.errors import ConfigError
from cloudrain.types import SweepSpec

FAST = dict(
    half_width=0.5,
    n_particles=100,
    max_epochs=200,
    rain_radius=0.02,
    initial_size_mode="volume",
    r0_min_frac=0.2,
    r0_max_frac=0.4,
)


class TestRainSimulatorSetup:
    """Test cases for RainSimulator initialization and setup."""

    def test_defaults(self):
        sim = RainSimulator()
        assert sim.config == SimConfig()
        assert sim.seed == 0 and sim.workers == 1
        assert __version__

    def test_init_from_config_file(self, tmp_path, test_config):
        path = tmp_path / "sim.env"
        path.write_text(f"half_width = {test_config['half_width']}\nsigma = 0.25\n")
        sim = RainSimulator(config_path=path, seed=test_config["seed"])
        assert sim.config.sigma == 0.25
        assert sim.seed == test_config["seed"]

    def test_config_and_path_exclusive(self, tmp_path):
        with pytest.raises(ValueError, match="Invalid Arguments"):
            RainSimulator(config=SimConfig(), config_path=tmp_path / "sim.env")

    def test_bad_config_file(self, tmp_path):
        path = tmp_path / "sim.env"
        path.write_text("unknown_key = 1\n")
        with pytest.raises(ConfigError):
            RainSimulator(config_path=path)

    @pytest.mark.parametrize("workers", [0, -2])
    def test_invalid_workers(self, workers):
        with pytest.raises(ValueError, match="Invalid Worker Count"):
            RainSimulator(workers=workers)

    def test_presets(self):
        assert RainSimulator().presets == ["brownian-sweep", "lambda-sweep", "vortex-sweep"]

    def test_with_config(self):
        sim = RainSimulator(seed=5).with_config(sigma=0.5)
        assert sim.config.sigma == 0.5
        assert sim.seed == 5

    def test_save_config(self, tmp_path):
        sim = RainSimulator(SimConfig(**FAST))
        path = sim.save_config(tmp_path / "saved.env")
        assert RainSimulator(config_path=path).config == sim.config

    def test_runtime_dependencies(self):
        try:
            requires = metadata.requires("cloudrain") or []
        except metadata.PackageNotFoundError:
            pytest.skip("cloudrain is not installed")
        names = {re.split(r"[<>=!~;\[ ]", r, maxsplit=1)[0].lower() for r in requires}
        # tooling such as pre-commit belongs to the dev group
        assert names == {"numpy", "pandas", "pydantic", "python-dotenv", "scipy"}


class TestRainSimulatorRuns:
    """Test cases for replica, sweep and fit calls through the facade."""

    def test_simulate_matches_stream(self):
        sim = RainSimulator(SimConfig(**FAST), seed=3)
        assert sim.simulate(1) == sim.simulate(1)
        assert sim.simulate(1).stream_id == 1

    def test_sweep_and_fit(self, tmp_path):
        sim = RainSimulator(SimConfig(**FAST), seed=2)
        spec = SweepSpec(
            varying="sigma", values=[0.5, 0.75, 1.0, 1.25], replicas_per_value=1, base=sim.config
        )
        rows = sim.sweep(spec, replicas_per_value=2)
        assert [r.n_replicas for r in rows] == [2, 2, 2, 2]
        path = sim.export(rows, tmp_path / "sweep.json", format="json")
        assert path.exists()
        if all(r.mean_time is not None for r in rows):
            fit = sim.fit(rows, "loglog")
            assert fit.df_residual == 2

    def test_simulate_with_snapshots(self, tmp_path):
        sim = RainSimulator(SimConfig(**FAST), seed=3)
        result = sim.simulate(0, snapshot_every=10)
        assert result.snapshots[0].epoch == 0
        assert result.snapshots[-1].epoch == result.epochs_run
        assert sim.export_snapshots(result, tmp_path / "snap.csv").exists()
        # snapshots do not change the replica itself
        plain = sim.simulate(0)
        assert (result.events, result.formation_epoch) == (plain.events, plain.formation_epoch)

    def test_fit_all_reports_both_targets(self, brownian_rows):
        report = RainSimulator().fit_all(brownian_rows)
        assert set(report) == {"quadratic", "loglog", "rational"}
        for by_target in report.values():
            assert by_target["time"].target == "time"
            assert by_target["inverse"].target == "inverse"

    def test_unknown_preset(self):
        with pytest.raises(ValueError, match="Invalid Preset Name"):
            RainSimulator().sweep("no-such-preset")

    @pytest.mark.asyncio
    async def test_simulate_async(self):
        sim = RainSimulator(SimConfig(**FAST), seed=4)
        assert await sim.simulate_async(2) == sim.simulate(2)

    @pytest.mark.asyncio
    async def test_simulate_many_keeps_order(self):
        sim = RainSimulator(SimConfig(**FAST), seed=4)
        results = await sim.simulate_many([3, 0, 1])
        assert [r.stream_id for r in results] == [3, 0, 1]


class TestExamples:
    """Test cases for the bundled example scripts."""

    @pytest.mark.asyncio
    async def test_brownian_sweep_example(self, tmp_path, monkeypatch):
        from cloudrain.examples.brownian_sweep_example import brownian_sweep_example

        monkeypatch.delenv("CLOUDRAIN_CONFIG", raising=False)
        rows, fits = await brownian_sweep_example(
            replicas=1, out_dir=str(tmp_path), config=SimConfig(**FAST)
        )
        assert [r.value for r in rows] == [0.2, 0.4, 0.6, 0.8, 1.0]
        assert (tmp_path / "sweep.csv").exists() and (tmp_path / "plot.csv").exists()
        assert (tmp_path / "snapshots.csv").exists()
        assert set(fits) <= {"quadratic", "loglog", "rational"}
        for by_target in fits.values():
            assert set(by_target) == {"time", "inverse"}
