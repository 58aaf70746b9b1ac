"""Observable configuration and per-replica results."""

import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .coalescence import MergeEvent


class ObservableConfig(BaseModel):
    """Rain threshold and the volume moments to report."""

    model_config = ConfigDict(frozen=True)

    rain_radius: float = Field(0.0004, gt=0, description="Raindrop radius R_rd")
    moment_orders: List[float] = Field(default_factory=lambda: [0.0, 1.0, 2.0])


class ParticleSnapshot(BaseModel):
    """Alive droplets at one epoch: ids, positions and volumes."""

    model_config = ConfigDict(frozen=True)

    epoch: int = Field(..., ge=0)
    time: float = Field(..., ge=0)
    ids: List[int]
    positions: List[Tuple[float, float]]
    volumes: List[float]

    @model_validator(mode="after")
    def _check_lengths(self):
        if not (len(self.ids) == len(self.positions) == len(self.volumes)):
            raise ValueError(
                "Invalid ParticleSnapshot: ids/positions/volumes length mismatch"
            )
        return self

    @classmethod
    def capture(cls, particles, epoch: int, dt: float) -> "ParticleSnapshot":
        alive = particles.alive
        return cls(
            epoch=epoch,
            time=epoch * dt,
            ids=particles.ids[alive].tolist(),
            positions=[tuple(p) for p in particles.positions[alive].tolist()],
            volumes=particles.volumes[alive].tolist(),
        )


class ReplicaResult(BaseModel):
    """Outcome of one replica: first formation epoch and the merge log."""

    seed: int = Field(..., ge=0)
    stream_id: int = Field(..., ge=0)
    dt: float = Field(..., gt=0)
    formation_epoch: Optional[int] = Field(None, ge=0)
    formation_time: Optional[float] = Field(None, ge=0)
    epochs_run: int = Field(0, ge=0)
    events: List[MergeEvent] = Field(default_factory=list)
    initial_count: int = Field(..., ge=0)
    final_alive: int = Field(..., ge=0)
    initial_volume: float = Field(..., ge=0)
    final_volume: float = Field(..., ge=0)
    max_volume_drift: float = Field(0.0, ge=0, description="Max relative drift seen")
    snapshots: List[ParticleSnapshot] = Field(
        default_factory=list, exclude=True, description="Alive-particle states, if recorded"
    )

    @model_validator(mode="after")
    def _check_formation(self):
        if (self.formation_epoch is None) != (self.formation_time is None):
            raise ValueError("Invalid ReplicaResult: formation epoch/time mismatch")
        if self.formation_epoch is not None and not math.isclose(
            self.formation_time, self.formation_epoch * self.dt, rel_tol=1e-12
        ):
            raise ValueError("Invalid ReplicaResult: formation_time != epoch * dt")
        return self

    @property
    def censored(self) -> bool:
        return self.formation_epoch is None
