"""Exception types raised by cloudrain."""


class CloudRainError(Exception):
    """Base class for every cloudrain error."""


class ConfigError(CloudRainError, ValueError):
    """Invalid configuration key or value."""


class InvalidStateError(CloudRainError, ValueError):
    """A physical quantity left its admissible range (e.g. negative volume)."""


class NumericalError(CloudRainError, ArithmeticError):
    """Base class for numerical failures."""


class OUStabilityError(NumericalError):
    """Euler step of the Ornstein-Uhlenbeck process would be unstable."""

    def __init__(self, ou_lambda: float, dt: float):
        self.ou_lambda = ou_lambda
        self.dt = dt
        super().__init__(
            f"Invalid OU Step: dt * lambda must be < 1, got lambda={ou_lambda}, "
            f"dt={dt} (product {ou_lambda * dt})"
        )


class NumericalBlowupError(NumericalError):
    """A particle position became non-finite."""

    def __init__(self, particle_id: int, detail: str = ""):
        self.particle_id = particle_id
        message = f"Numerical Blowup: non-finite position for particle {particle_id}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class QuadratureError(NumericalError):
    """Ball-average quadrature did not settle under node doubling."""


class DegenerateInputError(CloudRainError, ValueError):
    """Regression input cannot identify the model."""


class DomainError(CloudRainError, ValueError):
    """Input outside the mathematical domain of the operation."""


class ResultsIOError(CloudRainError, OSError):
    """Reading or writing a results file failed."""

    def __init__(self, path, detail: str):
        self.path = str(path)
        super().__init__(f"Results I/O failed for {path}: {detail}")
