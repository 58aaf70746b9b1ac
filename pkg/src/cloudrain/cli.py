"""
Command-line interface.

    cloudrain simulate --config sim.env --seed 7
    cloudrain simulate --config sim.env --seed 7 --snapshots results/snapshots.csv
    cloudrain sweep --preset brownian-sweep --replicas 10 --seed 1 --out results/
    cloudrain regress --model rational --in results/sweep.csv
    cloudrain regress --model all --in results/sweep.csv
    cloudrain plotdata --in results/sweep.csv --out results/plot.csv
    cloudrain oracle-compare --n 10 --horizon 1 --replicas 5000

Exit codes: 0 success, 2 configuration error, 3 numerical error, 4 I/O error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from cloudrain.config import load_config, read_config_values
from cloudrain.consts import experiment_presets, get_preset
from cloudrain.errors import (
    ConfigError,
    DegenerateInputError,
    DomainError,
    NumericalError,
    ResultsIOError,
)
from cloudrain.harness import oracle_compare, run_replica, run_sweep
from cloudrain.io import (
    export_results,
    read_sweep_csv,
    write_plot_data,
    write_residuals_csv,
    write_snapshots_csv,
)
from cloudrain.regression import fit_all, fit_sweep
from cloudrain.types import SweepSpec

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _print_json(payload) -> None:
    print(json.dumps(payload, indent=2))


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    snapshot_every = args.snapshot_every if args.snapshots else None
    result = run_replica(cfg, args.seed, args.stream_id, snapshot_every=snapshot_every)
    if args.out:
        export_results(result, args.out, "json", master_seed=args.seed, config=cfg)
    if args.snapshots:
        write_snapshots_csv(result.snapshots, args.snapshots)
    exclude = None if args.events else {"events"}
    payload = result.model_dump(mode="json", exclude=exclude)
    payload["censored"] = result.censored
    payload["n_events"] = len(result.events)
    _print_json(payload)
    return EXIT_OK


def _sweep_spec(args) -> SweepSpec:
    if args.preset:
        overrides = {}
        if args.config:
            overrides = read_config_values(args.config)
        return get_preset(args.preset, args.replicas, **overrides)
    if not (args.config and args.varying and args.values):
        raise ConfigError(
            "Invalid Sweep: give --preset, or --config with --varying and --values"
        )
    return SweepSpec(
        varying=args.varying,
        values=sorted(args.values),
        replicas_per_value=args.replicas,
        base=load_config(args.config),
    )


def _cmd_sweep(args) -> int:
    spec = _sweep_spec(args)
    rows = run_sweep(spec, args.seed, args.workers)
    out = Path(args.out)
    export_results(rows, out / "sweep.csv", "csv")
    export_results(rows, out / "sweep.json", "json", master_seed=args.seed, config=spec.base)
    _print_json([r.model_dump(mode="json") for r in rows])
    return EXIT_OK


def _cmd_regress(args) -> int:
    rows = read_sweep_csv(args.input)
    if args.model == "all":
        return _regress_all(rows, args)
    kwargs = {}
    if args.model == "rational":
        a_init = 0.08 if args.a_init is None else args.a_init
        kwargs = {"a_init": a_init, "b_init": args.b_init}
    fit = fit_sweep(rows, args.model, args.target, **kwargs)
    residuals = args.residuals or str(Path(args.input).with_name(f"residuals_{args.model}.csv"))
    write_residuals_csv(fit, residuals)
    _print_json(fit.model_dump(mode="json"))
    return EXIT_OK


def _regress_all(rows, args) -> int:
    report = fit_all(rows, a_init=args.a_init, b_init=args.b_init)
    payload = {}
    for model, by_target in report.items():
        payload[model] = {}
        for target, fit in by_target.items():
            if fit is None:
                payload[model][target] = None
                continue
            payload[model][target] = fit.model_dump(mode="json")
            residuals = Path(args.input).with_name(f"residuals_{model}_{target}.csv")
            write_residuals_csv(fit, residuals)
    _print_json(payload)
    return EXIT_OK


def _cmd_plotdata(args) -> int:
    write_plot_data(read_sweep_csv(args.input), args.out)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    _print_json(oracle_compare(args.n, args.horizon, args.replicas, args.seed, args.dt))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cloudrain", description="Droplet coagulation rain-formation simulator"
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default WARNING)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Run one replica")
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stream-id", type=int, default=0)
    p.add_argument("--out", help="Write the result (with provenance) as JSON")
    p.add_argument("--events", action="store_true", help="Include the merge log")
    p.add_argument(
        "--snapshot-every",
        type=int,
        default=100,
        help="Epochs between particle snapshots (default 100)",
    )
    p.add_argument("--snapshots", help="Write particle snapshots to this CSV")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="Run a parameter sweep")
    p.add_argument("--preset", choices=sorted(experiment_presets))
    p.add_argument("--config", help="Base configuration (overrides preset fields)")
    p.add_argument("--varying", choices=["sigma", "vortex_count", "lambda"])
    p.add_argument("--values", type=float, nargs="+")
    p.add_argument("--replicas", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="Output directory")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("regress", help="Fit a model to a sweep CSV")
    p.add_argument(
        "--model",
        required=True,
        choices=["quadratic", "cubic", "loglog", "rational", "all"],
        help="Model to fit; all fits quadratic, loglog and rational against both targets",
    )
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--target", default="time", choices=["time", "inverse"])
    p.add_argument(
        "--a-init",
        type=float,
        default=None,
        help="Rational start a (default 0.08, or the first y with --model all)",
    )
    p.add_argument("--b-init", type=float, default=0.048)
    p.add_argument("--residuals", help="Residuals CSV path")
    p.set_defaults(func=_cmd_regress)

    p = sub.add_parser("plotdata", help="Write (x, y, y_err) triples")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_plotdata)

    p = sub.add_parser("oracle-compare", help="Gillespie vs stepped coalescence")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--horizon", type=float, default=1.0)
    p.add_argument("--replicas", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dt", type=float, default=0.01)
    p.set_defaults(func=_cmd_oracle)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )
    try:
        return args.func(args)
    except ResultsIOError as e:
        logger.error("%s", e)
        return EXIT_IO
    except (NumericalError, DegenerateInputError, DomainError) as e:
        logger.error("%s", e)
        return EXIT_NUMERICAL
    except (ConfigError, ValidationError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
