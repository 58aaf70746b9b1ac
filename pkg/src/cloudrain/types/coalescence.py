"""Coalescence types and the merge-event row codec.

``MergeEventRow`` is the flat tuple representation used when event logs are
written to CSV; the converters mirror the ones used for sweep rows.
"""

from typing import Callable, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator


def unit_efficiency(v: float, w: float) -> float:
    """Collision efficiency k(v, w) == 1."""
    return 1.0


class CoalescenceParams(BaseModel):
    """Parameters of the geometric stochastic coalescence pass."""

    model_config = ConfigDict(frozen=True)

    p_mean: float = Field(0.0, ge=0, le=1, description="Bounce threshold")
    contact_rule: Literal["sum-of-radii"] = "sum-of-radii"
    pair_order: Literal["ascending-distance"] = "ascending-distance"


class KernelRateParams(BaseModel):
    """Parameters of the mollified pair rate T_N^delta(i, j)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    delta: float = Field(..., gt=0, description="Interaction range scale")
    n_scale: float = Field(..., gt=0, description="Mean-field particle count N")
    efficiency: Callable = Field(unit_efficiency, description="Symmetric k(v, w)")
    exponent: int = Field(3, ge=1, le=3, description="Power of delta in the rate")


class MergeEvent(BaseModel):
    """One coalescence: the absorber keeps its position and gains the volume."""

    model_config = ConfigDict(frozen=True)

    time: float = Field(..., ge=0)
    absorber_id: int = Field(..., ge=0)
    absorbed_id: int = Field(..., ge=0)
    volume_after: float = Field(..., gt=0)
    epoch: Optional[int] = Field(None, ge=0, description="Epoch (stepped runs)")

    @model_validator(mode="after")
    def _check_ids(self):
        if self.absorber_id == self.absorbed_id:
            raise ValueError("Invalid MergeEvent: a particle cannot absorb itself")
        return self


MergeEventRow = Tuple[
    float,  # time
    Optional[int],  # epoch
    int,  # absorber_id
    int,  # absorbed_id
    float,  # volume_after
]

MERGE_ROW_COLUMNS = ["time", "epoch", "absorber_id", "absorbed_id", "volume_after"]


def event_to_merge_row(obj: MergeEvent) -> MergeEventRow:
    """Convert a MergeEvent to its tuple form."""
    return (obj.time, obj.epoch, obj.absorber_id, obj.absorbed_id, obj.volume_after)


def merge_row_to_event(data: MergeEventRow) -> MergeEvent:
    """Convert a tuple row back to a MergeEvent."""
    return MergeEvent(
        time=data[0],
        epoch=data[1],
        absorber_id=data[2],
        absorbed_id=data[3],
        volume_after=data[4],
    )


def validate_merge_row(data: Union[List, Tuple]) -> MergeEventRow:
    """Validate and coerce raw input (e.g. a CSV record) to a MergeEventRow.

    Raises:
        ValueError: If the record has the wrong arity or types
    """
    if not isinstance(data, (list, tuple)):
        raise ValueError("Data must be a list or tuple")

    if len(data) != len(MERGE_ROW_COLUMNS):
        raise ValueError(f"Data must have exactly {len(MERGE_ROW_COLUMNS)} elements")

    converted = []
    for i, item in enumerate(data):
        if i == 1:
            if item is None or item == "" or item != item:
                converted.append(None)
                continue
            try:
                converted.append(int(item))
            except (ValueError, TypeError):
                raise ValueError(f"Element at index {i} must be an integer or None")
        elif i in (2, 3):
            try:
                converted.append(int(item))
            except (ValueError, TypeError):
                raise ValueError(f"Element at index {i} must be an integer")
        else:
            try:
                converted.append(float(item))
            except (ValueError, TypeError):
                raise ValueError(f"Element at index {i} must be a number")

    return tuple(converted)
