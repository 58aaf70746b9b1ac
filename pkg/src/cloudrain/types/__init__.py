"""Type definitions for cloudrain.

Pydantic models for the particle state, random field, motion, coalescence,
observables, configuration and experiment harness, plus the tuple codecs
used for CSV records.
"""

from .core import Domain, Particle, ParticleSet, RngStream
from .field import OUParams, OUState, VortexSet
from .motion import MotionParams, TerminalSpeedParams
from .coalescence import (
    MERGE_ROW_COLUMNS,
    CoalescenceParams,
    KernelRateParams,
    MergeEvent,
    MergeEventRow,
    event_to_merge_row,
    merge_row_to_event,
    unit_efficiency,
    validate_merge_row,
)
from .observables import ObservableConfig, ParticleSnapshot, ReplicaResult
from .config import SimConfig
from .harness import (
    SWEEP_CSV_COLUMNS,
    RegressionFit,
    SweepRow,
    SweepRowRecord,
    SweepSpec,
    record_to_sweep_row,
    sweep_row_to_record,
    validate_sweep_record,
)

__all__ = [
    "Domain",
    "Particle",
    "ParticleSet",
    "RngStream",
    "OUParams",
    "OUState",
    "VortexSet",
    "MotionParams",
    "TerminalSpeedParams",
    "MERGE_ROW_COLUMNS",
    "CoalescenceParams",
    "KernelRateParams",
    "MergeEvent",
    "MergeEventRow",
    "event_to_merge_row",
    "merge_row_to_event",
    "unit_efficiency",
    "validate_merge_row",
    "ObservableConfig",
    "ReplicaResult",
    "ParticleSnapshot",
    "SimConfig",
    "SWEEP_CSV_COLUMNS",
    "RegressionFit",
    "SweepRow",
    "SweepRowRecord",
    "SweepSpec",
    "record_to_sweep_row",
    "sweep_row_to_record",
    "validate_sweep_record",
]
