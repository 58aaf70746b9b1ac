"""Core state types: periodic domain, particles and random streams.

Particle state is held as a structure of arrays (``ParticleSet``) so the
integrators stay vectorised; ``Particle`` is the per-droplet record view.
"""

from typing import List, Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class Domain(BaseModel):
    """Square periodic domain [-half_width, half_width)^2."""

    model_config = ConfigDict(frozen=True)

    half_width: float = Field(2.0, gt=0, description="Half side length")
    periodic: Literal[True] = Field(True, description="Always periodic")

    @property
    def length(self) -> float:
        return 2.0 * self.half_width


class Particle(BaseModel):
    """A single droplet: label, position, volume and alive flag."""

    model_config = ConfigDict(frozen=True)

    id: int = Field(..., ge=0, description="Stable label within a replica")
    position: Tuple[float, float] = Field(..., description="Wrapped position")
    volume: float = Field(..., ge=0, description="Droplet volume")
    alive: bool = Field(True, description="False once absorbed")

    @model_validator(mode="after")
    def _check_alive_volume(self):
        if self.alive and self.volume <= 0:
            raise ValueError(f"Invalid Particle: alive particle {self.id} has volume 0")
        if not self.alive and self.volume != 0:
            raise ValueError(
                f"Invalid Particle: removed particle {self.id} must have volume 0"
            )
        return self


class ParticleSet(BaseModel):
    """All droplets of one replica, indexed by id (id == array index)."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    ids: np.ndarray
    positions: np.ndarray
    volumes: np.ndarray
    alive: np.ndarray

    @model_validator(mode="after")
    def _check_shapes(self):
        n = self.ids.shape[0]
        if not np.array_equal(self.ids, np.arange(n)):
            raise ValueError("Invalid ParticleSet: ids must be 0..N-1 in array order")
        if self.positions.shape != (n, 2):
            raise ValueError(
                f"Invalid ParticleSet: positions shape {self.positions.shape}, "
                f"expected ({n}, 2)"
            )
        if self.volumes.shape != (n,) or self.alive.shape != (n,):
            raise ValueError("Invalid ParticleSet: volumes/alive length mismatch")
        if np.any(self.volumes < 0):
            raise ValueError("Invalid ParticleSet: negative volume")
        if np.any(self.alive & (self.volumes <= 0)):
            raise ValueError("Invalid ParticleSet: alive particle with zero volume")
        return self

    @classmethod
    def from_arrays(cls, positions, volumes, alive=None) -> "ParticleSet":
        positions = np.asarray(positions, dtype=float).reshape(-1, 2)
        volumes = np.asarray(volumes, dtype=float).reshape(-1)
        n = volumes.shape[0]
        if alive is None:
            alive = volumes > 0
        return cls(
            ids=np.arange(n, dtype=np.int64),
            positions=positions.copy(),
            volumes=volumes.copy(),
            alive=np.asarray(alive, dtype=bool).copy(),
        )

    @classmethod
    def from_particles(cls, particles: List[Particle]) -> "ParticleSet":
        ordered = sorted(particles, key=lambda p: p.id)
        if [p.id for p in ordered] != list(range(len(ordered))):
            raise ValueError("Invalid ParticleSet: ids must be 0..N-1 and unique")
        return cls.from_arrays(
            [p.position for p in ordered],
            [p.volume for p in ordered],
            [p.alive for p in ordered],
        )

    def __len__(self) -> int:
        return int(self.ids.shape[0])

    def particle(self, index: int) -> Particle:
        return Particle(
            id=int(self.ids[index]),
            position=(float(self.positions[index, 0]), float(self.positions[index, 1])),
            volume=float(self.volumes[index]),
            alive=bool(self.alive[index]),
        )

    def to_particles(self) -> List[Particle]:
        return [self.particle(i) for i in range(len(self))]

    @property
    def n_alive(self) -> int:
        return int(np.count_nonzero(self.alive))

    def copy(self) -> "ParticleSet":
        return ParticleSet(
            ids=self.ids.copy(),
            positions=self.positions.copy(),
            volumes=self.volumes.copy(),
            alive=self.alive.copy(),
        )


class RngStream(BaseModel):
    """Reproducible random stream keyed by (seed, stream_id)."""

    model_config = ConfigDict(frozen=True)

    seed: int = Field(..., ge=0, lt=2**64, description="Master seed")
    stream_id: int = Field(0, ge=0, description="Replica index")

    def generator(self) -> np.random.Generator:
        """Fresh generator; every call replays the same sequence."""
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(seq))
