"""Random velocity field types: OU intensity, OU state and vortex set."""

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class OUParams(BaseModel):
    """Ornstein-Uhlenbeck intensity, time step and integration scheme."""

    model_config = ConfigDict(frozen=True)

    ou_lambda: float = Field(..., ge=0, description="Inverse-time intensity")
    dt: float = Field(..., gt=0, description="Time step")
    mode: Literal["euler", "exact"] = Field(
        "euler", description="Euler-Maruyama or exact Gaussian update"
    )


class OUState(BaseModel):
    """Current values of the K OU processes driving the vortices."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    values: np.ndarray
    time: float = 0.0

    @model_validator(mode="after")
    def _check_values(self):
        if self.values.ndim != 1:
            raise ValueError("Invalid OUState: values must be a 1-D array")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Invalid OUState: non-finite entries")
        return self

    @classmethod
    def zeros(cls, count: int) -> "OUState":
        return cls(values=np.zeros(count, dtype=float), time=0.0)

    def __len__(self) -> int:
        return int(self.values.shape[0])


class VortexSet(BaseModel):
    """Frozen vortex centres and the core regularisation length."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    centers: np.ndarray
    reg_eps: float = Field(0.01, ge=0)

    @model_validator(mode="after")
    def _check_centers(self):
        if self.centers.ndim != 2 or self.centers.shape[1] != 2:
            raise ValueError(
                f"Invalid VortexSet: centers shape {self.centers.shape}, expected (K, 2)"
            )
        return self

    def __len__(self) -> int:
        return int(self.centers.shape[0])
