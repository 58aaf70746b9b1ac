"""Motion parameter types for the position integrator."""

from typing import Callable, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class TerminalSpeedParams(BaseModel):
    """Anchored logistic settling speed f(V)."""

    model_config = ConfigDict(frozen=True)

    v_max: float = Field(1.0, ge=0, description="Asymptotic terminal speed")
    r_half: float = Field(0.002, gt=0, description="Radius at the logistic midpoint")
    steepness: float = Field(1000.0, gt=0, description="Logistic slope")


class MotionParams(BaseModel):
    """Switches and intensities of the position SDE."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    eps_rf: Literal[0, 1] = Field(0, description="Random-field switch")
    eps_bm: Literal[0, 1] = Field(1, description="Brownian switch")
    sigma: float = Field(1.0, ge=0, description="Brownian intensity")
    dt: float = Field(1e-4, gt=0, description="Time step")
    settling: TerminalSpeedParams = Field(default_factory=TerminalSpeedParams)
    # volume-dependent factor on the vortex velocity; None means D == 1
    drag: Optional[Callable] = Field(None, description="Vortex drag D(V)")
