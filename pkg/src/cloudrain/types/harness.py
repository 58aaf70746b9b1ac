"""Sweep and regression types, with the sweep-row record codec."""

from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .config import SimConfig


class SweepSpec(BaseModel):
    """One-parameter sweep over a base configuration."""

    model_config = ConfigDict(frozen=True)

    varying: Literal["sigma", "vortex_count", "lambda"]
    values: List[float] = Field(..., min_length=1)
    replicas_per_value: int = Field(10, ge=1, description="N_r")
    base: SimConfig = Field(default_factory=SimConfig)
    name: Optional[str] = Field(None, description="Preset name, if any")

    @model_validator(mode="after")
    def _check_values(self):
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("Invalid SweepSpec: values must be strictly increasing")
        return self


class SweepRow(BaseModel):
    """Aggregate formation statistics for one swept value."""

    value: float
    mean_epoch: Optional[float] = Field(None, ge=0)
    mean_time: Optional[float] = Field(None, ge=0)
    std_dev: Optional[float] = Field(None, ge=0, description="Sample std of epochs")
    censored: int = Field(0, ge=0)
    n_replicas: int = Field(..., ge=1)

    @model_validator(mode="after")
    def _check_counts(self):
        if self.censored > self.n_replicas:
            raise ValueError("Invalid SweepRow: censored exceeds replica count")
        return self


SweepRowRecord = Tuple[
    float,  # value
    Optional[float],  # mean_epoch
    Optional[float],  # mean_time
    Optional[float],  # std_dev
    int,  # censored
    int,  # n_replicas
]

SWEEP_CSV_COLUMNS = [
    "value",
    "mean_epoch",
    "mean_time",
    "std_dev",
    "censored",
    "n_replicas",
]


def sweep_row_to_record(obj: SweepRow) -> SweepRowRecord:
    """Convert a SweepRow to its tuple form (CSV column order)."""
    return (
        obj.value,
        obj.mean_epoch,
        obj.mean_time,
        obj.std_dev,
        obj.censored,
        obj.n_replicas,
    )


def record_to_sweep_row(data: SweepRowRecord) -> SweepRow:
    """Convert a tuple record back to a SweepRow."""
    return SweepRow(
        value=data[0],
        mean_epoch=data[1],
        mean_time=data[2],
        std_dev=data[3],
        censored=data[4],
        n_replicas=data[5],
    )


def validate_sweep_record(data: Union[List, Tuple]) -> SweepRowRecord:
    """Validate and coerce a raw CSV record; blanks and NaN become None.

    Raises:
        ValueError: If the record has the wrong arity or types
    """
    if not isinstance(data, (list, tuple)):
        raise ValueError("Data must be a list or tuple")

    if len(data) != len(SWEEP_CSV_COLUMNS):
        raise ValueError(f"Data must have exactly {len(SWEEP_CSV_COLUMNS)} elements")

    converted = []
    for i, item in enumerate(data):
        missing = item is None or item == "" or item != item
        if i in (4, 5):
            if missing:
                raise ValueError(f"Element at index {i} must be an integer")
            try:
                converted.append(int(item))
            except (ValueError, TypeError):
                raise ValueError(f"Element at index {i} must be an integer")
        elif missing:
            if i == 0:
                raise ValueError("Element at index 0 (value) cannot be None")
            converted.append(None)
        else:
            try:
                converted.append(float(item))
            except (ValueError, TypeError):
                raise ValueError(f"Element at index {i} must be a number or None")

    return tuple(converted)


class RegressionFit(BaseModel):
    """Fitted model with the usual least-squares summary fields."""

    model: Literal["quadratic", "cubic", "loglog", "rational"]
    target: Optional[Literal["time", "inverse"]] = None
    coefficient_names: List[str]
    coefficients: List[float]
    std_errors: Optional[List[float]] = None
    t_values: Optional[List[float]] = None
    r_squared: float = Field(..., ge=0, le=1)
    adj_r_squared: Optional[float] = None
    residual_std_error: float = Field(..., ge=0)
    df_residual: int = Field(..., ge=0)
    f_statistic: Optional[float] = None
    f_p_value: Optional[float] = None
    rss: float = Field(..., ge=0)
    correlation: Optional[float] = None
    converged: bool = True
    iterations: Optional[int] = None
    x: List[float]
    y: List[float]
    fitted: List[float]
    residuals: List[float]

    @model_validator(mode="after")
    def _check_lengths(self):
        if len(self.residuals) != len(self.y) or len(self.fitted) != len(self.y):
            raise ValueError("Invalid RegressionFit: residuals length != data length")
        if len(self.coefficients) != len(self.coefficient_names):
            raise ValueError("Invalid RegressionFit: coefficient names mismatch")
        return self
