"""Simulation configuration.

Every default equals the value used in the numerical experiments where one is
stated (dt = 1e-4, N = 1000, T_MaxIt = 3000, P_mean = 0, R_rd = 0.0004 on the
square [-2, 2]^2, lambda = 1500 with 200 vortices). Lengths are nondimensional
simulation units.
"""

import math
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .coalescence import CoalescenceParams
from .core import Domain
from .field import OUParams
from .motion import MotionParams, TerminalSpeedParams
from .observables import ObservableConfig


class SimConfig(BaseModel):
    """All physical and numerical parameters of one replica."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    # domain and population
    half_width: float = Field(2.0, gt=0, description="Domain half side length")
    n_particles: int = Field(1000, ge=2, description="Initial particle count N")
    dt: float = Field(1e-4, gt=0, description="Time step")
    max_epochs: int = Field(3000, ge=0, description="Iteration cap T_MaxIt")

    # motion
    eps_rf: Literal[0, 1] = Field(0, description="Random-field switch")
    eps_bm: Literal[0, 1] = Field(1, description="Brownian switch")
    sigma: float = Field(1.0, ge=0, description="Brownian intensity")

    # random field
    n_vortices: int = Field(200, ge=0, description="Vortex count K")
    ou_lambda: float = Field(1500.0, ge=0, description="OU intensity lambda")
    ou_mode: Literal["euler", "exact"] = "euler"
    reg_eps: float = Field(0.01, ge=0, description="Vortex core regularisation")
    pin_vortices: bool = Field(False, description="Share vortex centres across replicas")
    vortex_seed: Optional[int] = Field(None, ge=0, description="Seed for pinned centres")

    # settling
    v_max: float = Field(1.0, ge=0, description="Terminal speed limit")
    r_half: Optional[float] = Field(None, gt=0, description="Defaults to 5 * rain_radius")
    steepness: Optional[float] = Field(None, gt=0, description="Defaults to 2 / r_half")

    # coalescence and rain
    p_mean: float = Field(0.0, ge=0, le=1, description="Bounce threshold")
    rain_radius: float = Field(0.0004, gt=0, description="Raindrop radius R_rd")
    initial_size_mode: Literal["radius", "volume"] = "radius"
    r0_min_frac: float = Field(0.01, gt=0, description="Lower initial size fraction")
    r0_max_frac: float = Field(0.1, gt=0, description="Upper initial size fraction")

    @model_validator(mode="after")
    def _check_cross_fields(self):
        if self.eps_rf == 1 and self.ou_lambda * self.dt >= 1:
            raise ValueError(
                f"Invalid Config: dt * ou_lambda must be < 1, got "
                f"{self.dt} * {self.ou_lambda}"
            )
        if self.r0_min_frac > self.r0_max_frac:
            raise ValueError("Invalid Config: r0_min_frac must not exceed r0_max_frac")
        return self

    def with_updates(self, **changes) -> "SimConfig":
        """Validated copy with some fields replaced."""
        data = self.model_dump()
        data.update(changes)
        return SimConfig.model_validate(data)

    @property
    def rain_volume(self) -> float:
        return 4.0 / 3.0 * math.pi * self.rain_radius**3

    def domain(self) -> Domain:
        return Domain(half_width=self.half_width)

    def terminal_speed_params(self) -> TerminalSpeedParams:
        r_half = self.r_half if self.r_half is not None else 5.0 * self.rain_radius
        steepness = self.steepness if self.steepness is not None else 2.0 / r_half
        return TerminalSpeedParams(v_max=self.v_max, r_half=r_half, steepness=steepness)

    def motion_params(self) -> MotionParams:
        return MotionParams(
            eps_rf=self.eps_rf,
            eps_bm=self.eps_bm,
            sigma=self.sigma,
            dt=self.dt,
            settling=self.terminal_speed_params(),
        )

    def ou_params(self) -> OUParams:
        return OUParams(ou_lambda=self.ou_lambda, dt=self.dt, mode=self.ou_mode)

    def coalescence_params(self) -> CoalescenceParams:
        return CoalescenceParams(p_mean=self.p_mean)

    def observable_config(self) -> ObservableConfig:
        return ObservableConfig(rain_radius=self.rain_radius)
