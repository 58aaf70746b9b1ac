"""
Test the command-line subcommands and their exit codes.
"""

import json

import pandas as pd
import pytest

from cloudrain.cli import EXIT_CONFIG, EXIT_IO, EXIT_NUMERICAL, EXIT_OK, build_parser, main
from cloudrain.io import export_results
from cloudrain.types import SweepRow

FAST_ENV = """\
half_width = 0.5
n_particles = 60
max_epochs = 100
rain_radius = 0.02
initial_size_mode = volume
r0_min_frac = 0.2
r0_max_frac = 0.4
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "fast.env"
    path.write_text(FAST_ENV)
    return path


@pytest.fixture
def sweep_csv(tmp_path, brownian_rows):
    return export_results(brownian_rows, tmp_path / "sweep.csv")


class TestSimulateCommand:
    """Test cases for `cloudrain simulate`."""

    def test_prints_result(self, config_file, capsys):
        assert main(["simulate", "--config", str(config_file), "--seed", "3"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["seed"] == 3
        assert "events" not in payload
        assert "censored" in payload

    def test_writes_json(self, config_file, tmp_path, capsys):
        out = tmp_path / "replica.json"
        argv = ["simulate", "--config", str(config_file), "--out", str(out), "--events"]
        assert main(argv) == EXIT_OK
        document = json.loads(out.read_text())
        assert document["kind"] == "replica"
        assert document["config"]["n_particles"] == 60
        assert "events" in json.loads(capsys.readouterr().out)

    def test_bad_config_exit_code(self, tmp_path):
        path = tmp_path / "bad.env"
        path.write_text("n_particles = -4\n")
        assert main(["simulate", "--config", str(path)]) == EXIT_CONFIG

    def test_missing_config_exit_code(self, tmp_path):
        assert main(["simulate", "--config", str(tmp_path / "nope.env")]) == EXIT_CONFIG

    def test_writes_snapshots(self, config_file, tmp_path):
        out = tmp_path / "snapshots.csv"
        argv = [
            "simulate", "--config", str(config_file), "--snapshots", str(out),
            "--snapshot-every", "20",
        ]
        assert main(argv) == EXIT_OK
        frame = pd.read_csv(out)
        assert list(frame.columns) == ["epoch", "time", "id", "x", "y", "volume"]
        assert frame["epoch"].iloc[0] == 0
        assert frame.loc[frame["epoch"] == 0, "id"].tolist() == list(range(60))


class TestSweepCommand:
    """Test cases for `cloudrain sweep`."""

    def test_custom_sweep(self, config_file, tmp_path):
        out = tmp_path / "results"
        argv = [
            "sweep", "--config", str(config_file), "--varying", "sigma",
            "--values", "1.0", "0.5", "--replicas", "2", "--seed", "1", "--out", str(out),
        ]
        assert main(argv) == EXIT_OK
        frame = pd.read_csv(out / "sweep.csv")
        assert frame["value"].tolist() == [0.5, 1.0]
        assert json.loads((out / "sweep.json").read_text())["master_seed"] == 1

    def test_sweep_needs_grid(self, config_file, tmp_path):
        argv = ["sweep", "--config", str(config_file), "--out", str(tmp_path)]
        assert main(argv) == EXIT_CONFIG

    def test_duplicate_values_rejected(self, config_file, tmp_path):
        argv = [
            "sweep", "--config", str(config_file), "--varying", "sigma",
            "--values", "0.5", "0.5", "--out", str(tmp_path),
        ]
        assert main(argv) == EXIT_CONFIG


class TestRegressCommand:
    """Test cases for `cloudrain regress` and `cloudrain plotdata`."""

    def test_quadratic(self, sweep_csv, capsys):
        argv = ["regress", "--model", "quadratic", "--in", str(sweep_csv), "--target", "inverse"]
        assert main(argv) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["df_residual"] == 7
        assert (sweep_csv.parent / "residuals_quadratic.csv").exists()

    def test_all_models_both_targets(self, sweep_csv, capsys):
        assert main(["regress", "--model", "all", "--in", str(sweep_csv)]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert set(payload) == {"quadratic", "loglog", "rational"}
        for model, by_target in payload.items():
            assert by_target["time"]["target"] == "time"
            assert by_target["inverse"]["target"] == "inverse"
            assert (sweep_csv.parent / f"residuals_{model}_inverse.csv").exists()

    def test_rational_with_start(self, sweep_csv, tmp_path):
        residuals = tmp_path / "rational.csv"
        argv = [
            "regress", "--model", "rational", "--in", str(sweep_csv),
            "--a-init", "0.5", "--b-init", "1.0", "--residuals", str(residuals),
        ]
        assert main(argv) == EXIT_OK
        assert len(pd.read_csv(residuals)) == 10

    def test_degenerate_exit_code(self, tmp_path):
        rows = [
            SweepRow(value=v, mean_epoch=10.0, mean_time=1e-3, std_dev=0.0, n_replicas=1)
            for v in (1.0, 2.0)
        ]
        path = export_results(rows, tmp_path / "short.csv")
        assert main(["regress", "--model", "quadratic", "--in", str(path)]) == EXIT_NUMERICAL

    def test_missing_input_exit_code(self, tmp_path):
        argv = ["regress", "--model", "loglog", "--in", str(tmp_path / "none.csv")]
        assert main(argv) == EXIT_IO

    def test_plotdata(self, sweep_csv, tmp_path):
        out = tmp_path / "plot.csv"
        assert main(["plotdata", "--in", str(sweep_csv), "--out", str(out)]) == EXIT_OK
        assert list(pd.read_csv(out).columns) == ["x", "y", "y_err"]


class TestOracleCommand:
    """Test cases for `cloudrain oracle-compare`."""

    def test_small_run(self, capsys):
        argv = ["oracle-compare", "--n", "3", "--horizon", "0.5", "--replicas", "20"]
        assert main(argv) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["n"] == 3 and payload["replicas"] == 20

    def test_parser_requires_command(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])
