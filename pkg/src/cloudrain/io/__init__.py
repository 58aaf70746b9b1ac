"""
Results I/O Module.

CSV and JSON persistence of sweep tables, regression fits, replica results,
merge logs and particle snapshots. CSV column sets are fixed (see
SWEEP_CSV_COLUMNS, MERGE_ROW_COLUMNS and SNAPSHOT_CSV_COLUMNS); JSON documents
carry the master seed and configuration for provenance.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ValidationError

from cloudrain.errors import ResultsIOError
from cloudrain.types import (
    MERGE_ROW_COLUMNS,
    SWEEP_CSV_COLUMNS,
    MergeEvent,
    ParticleSnapshot,
    RegressionFit,
    ReplicaResult,
    SweepRow,
    event_to_merge_row,
    merge_row_to_event,
    record_to_sweep_row,
    sweep_row_to_record,
    validate_merge_row,
    validate_sweep_record,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
Exportable = Union[Sequence[SweepRow], RegressionFit, ReplicaResult]


def _write_frame(frame: pd.DataFrame, path: PathLike) -> None:
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False)
    except OSError as e:
        raise ResultsIOError(path, str(e)) from e


def _read_frame(path: PathLike, columns: List[str]) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ResultsIOError(path, str(e)) from e
    if list(frame.columns) != columns:
        raise ResultsIOError(path, f"expected columns {columns}, got {list(frame.columns)}")
    return frame


def _provenance(master_seed: Optional[int], config: Optional[BaseModel]) -> Dict[str, Any]:
    return {
        "master_seed": master_seed,
        "config": config.model_dump(mode="json") if config is not None else None,
    }


def sweep_frame(rows: Sequence[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([sweep_row_to_record(r) for r in rows], columns=SWEEP_CSV_COLUMNS)


def export_results(
    obj: Exportable,
    path: PathLike,
    format: str = "csv",
    master_seed: Optional[int] = None,
    config: Optional[BaseModel] = None,
) -> Path:
    """Write a sweep table, a fit or a replica result.

    CSV: sweep tables use SWEEP_CSV_COLUMNS, fits write their residual table,
    replica results write their merge log. JSON: the object's fields plus
    "master_seed" and "config".

    Raises:
        ResultsIOError: On any write failure, naming the path
    """
    path = Path(path)
    if format not in ("csv", "json"):
        raise ValueError(f"Invalid Format: {format}, expected 'csv' or 'json'")

    if format == "csv":
        if isinstance(obj, RegressionFit):
            write_residuals_csv(obj, path)
        elif isinstance(obj, ReplicaResult):
            write_events_csv(obj.events, path)
        else:
            _write_frame(sweep_frame(obj), path)
    else:
        document = _provenance(master_seed, config)
        if isinstance(obj, (RegressionFit, ReplicaResult)):
            document["kind"] = "fit" if isinstance(obj, RegressionFit) else "replica"
            document["result"] = obj.model_dump(mode="json")
        else:
            document["kind"] = "sweep"
            document["columns"] = SWEEP_CSV_COLUMNS
            document["rows"] = [r.model_dump(mode="json") for r in obj]
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(document, indent=2))
        except OSError as e:
            raise ResultsIOError(path, str(e)) from e

    logger.info("wrote %s results to %s", format, path)
    return path


def read_sweep_csv(path: PathLike) -> List[SweepRow]:
    """Read a sweep table written by export_results.

    Raises:
        ResultsIOError: Missing file, wrong columns or malformed records
    """
    frame = _read_frame(path, SWEEP_CSV_COLUMNS)
    rows = []
    for i, record in enumerate(frame.itertuples(index=False, name=None)):
        try:
            rows.append(record_to_sweep_row(validate_sweep_record(list(record))))
        except (ValueError, ValidationError) as e:
            raise ResultsIOError(path, f"row {i}: {e}") from e
    return rows


def write_plot_data(rows: Sequence[SweepRow], path: PathLike) -> Path:
    """(x, y, y_err) triples: swept value, mean time and its standard deviation.

    Rows without an uncensored replica are skipped.
    """
    triples = []
    for r in rows:
        if r.mean_time is None:
            continue
        dt = r.mean_time / r.mean_epoch if r.mean_epoch else 0.0
        triples.append((r.value, r.mean_time, (r.std_dev or 0.0) * dt))
    _write_frame(pd.DataFrame(triples, columns=["x", "y", "y_err"]), path)
    return Path(path)


def write_residuals_csv(fit: RegressionFit, path: PathLike) -> Path:
    frame = pd.DataFrame(
        {"x": fit.x, "y": fit.y, "fitted": fit.fitted, "residual": fit.residuals}
    )
    _write_frame(frame, path)
    return Path(path)


def write_events_csv(events: Sequence[MergeEvent], path: PathLike) -> Path:
    frame = pd.DataFrame([event_to_merge_row(e) for e in events], columns=MERGE_ROW_COLUMNS)
    frame["epoch"] = frame["epoch"].astype("Int64")
    _write_frame(frame, path)
    return Path(path)


def read_events_csv(path: PathLike) -> List[MergeEvent]:
    frame = _read_frame(path, MERGE_ROW_COLUMNS)
    events = []
    for i, record in enumerate(frame.itertuples(index=False, name=None)):
        raw = [None if (isinstance(v, float) and np.isnan(v)) else v for v in record]
        try:
            events.append(merge_row_to_event(validate_merge_row(raw)))
        except (ValueError, ValidationError) as e:
            raise ResultsIOError(path, f"row {i}: {e}") from e
    return events


SNAPSHOT_CSV_COLUMNS = ["epoch", "time", "id", "x", "y", "volume"]


def write_snapshots_csv(snapshots: Sequence[ParticleSnapshot], path: PathLike) -> Path:
    """One row per alive particle per recorded epoch."""
    records = [
        (s.epoch, s.time, pid, x, y, v)
        for s in snapshots
        for pid, (x, y), v in zip(s.ids, s.positions, s.volumes)
    ]
    _write_frame(pd.DataFrame(records, columns=SNAPSHOT_CSV_COLUMNS), path)
    logger.info("wrote %d snapshots to %s", len(snapshots), path)
    return Path(path)


def read_snapshots_csv(path: PathLike) -> List[ParticleSnapshot]:
    frame = _read_frame(path, SNAPSHOT_CSV_COLUMNS)
    snapshots = []
    try:
        for (epoch, time), group in frame.groupby(["epoch", "time"], sort=True):
            snapshots.append(
                ParticleSnapshot(
                    epoch=int(epoch),
                    time=float(time),
                    ids=group["id"].astype(int).tolist(),
                    positions=list(zip(group["x"].tolist(), group["y"].tolist())),
                    volumes=group["volume"].tolist(),
                )
            )
    except (ValueError, ValidationError) as e:
        raise ResultsIOError(path, f"bad snapshot rows: {e}") from e
    return snapshots


def read_fit_json(path: PathLike) -> RegressionFit:
    """Load the RegressionFit stored by export_results(fit, ..., format="json")."""
    try:
        document = json.loads(Path(path).read_text())
        return RegressionFit.model_validate(document["result"])
    except OSError as e:
        raise ResultsIOError(path, str(e)) from e
    except (KeyError, ValueError, ValidationError) as e:
        raise ResultsIOError(path, f"not a fit document: {e}") from e


__all__ = [
    "export_results",
    "sweep_frame",
    "read_sweep_csv",
    "write_plot_data",
    "write_residuals_csv",
    "write_events_csv",
    "read_events_csv",
    "write_snapshots_csv",
    "read_snapshots_csv",
    "SNAPSHOT_CSV_COLUMNS",
    "read_fit_json",
]
