from dataclasses import asdict, dataclass, fields
from enum import Enum
from typing import Optional

from ..errors import ConfigValidationError
from ..network import TriodNetwork


@dataclass(frozen=True)
class FlowConfig:
    N: int = 128
    cfl: float = 0.5
    t_max: float = 1.0
    L_min: float = 1e-3
    K_max: float = 1e6
    newton_tol: float = 1e-10
    newton_max_iter: int = 50
    reparam_every: int = 25
    delta_reg: float = 1e-8
    a0_floor: float = 0.05
    admissibility_tol: float = 1e-6
    strict: bool = False
    fd_step: float = 1e-7
    ellipticity_samples: int = 3600

    def __post_init__(self):
        positive = ("t_max", "L_min", "K_max", "newton_tol", "delta_reg", "a0_floor", "admissibility_tol", "fd_step")
        for name in positive:
            if not getattr(self, name) > 0:
                raise ConfigValidationError(name, f"'{name}' must be positive")
        if not 0 < self.cfl <= 1:
            raise ConfigValidationError("cfl", "'cfl' must lie in (0, 1]")
        if int(self.N) != self.N or self.N < 4:
            raise ConfigValidationError("N", "'N' must be an integer >= 4")
        if int(self.newton_max_iter) != self.newton_max_iter or self.newton_max_iter < 1:
            raise ConfigValidationError("newton_max_iter", "'newton_max_iter' must be a positive integer")
        if int(self.reparam_every) != self.reparam_every or self.reparam_every < 0:
            raise ConfigValidationError("reparam_every", "'reparam_every' must be a non-negative integer")
        if int(self.ellipticity_samples) != self.ellipticity_samples or self.ellipticity_samples < 360:
            raise ConfigValidationError("ellipticity_samples", "'ellipticity_samples' must be an integer >= 360")

    @classmethod
    def from_dict(cls, values):
        known = {f.name for f in fields(cls)}
        for key in values:
            if key not in known:
                raise ConfigValidationError(key, f"unknown flow setting '{key}'")
        return cls(**values)

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class FlowState:
    net: TriodNetwork
    t: float = 0.0
    step_index: int = 0
    resampled: bool = False
    newton_iterations: int = 0


class StopKind(Enum):
    MAX_TIME = "MaxTimeReached"
    LENGTH_VANISHING = "LengthVanishing"
    CURVATURE_BLOWUP = "CurvatureBlowup"
    SOLVER_FAILURE = "SolverFailure"


@dataclass(frozen=True)
class StopReason:
    kind: StopKind
    curve: Optional[int] = None
    detail: Optional[str] = None

    @classmethod
    def max_time(cls):
        return cls(StopKind.MAX_TIME)

    @classmethod
    def length_vanishing(cls, curve):
        return cls(StopKind.LENGTH_VANISHING, curve=curve)

    @classmethod
    def curvature_blowup(cls):
        return cls(StopKind.CURVATURE_BLOWUP)

    @classmethod
    def solver_failure(cls, detail):
        return cls(StopKind.SOLVER_FAILURE, detail=detail)

    @property
    def is_failure(self):
        return self.kind is StopKind.SOLVER_FAILURE

    def __str__(self):
        if self.kind is StopKind.LENGTH_VANISHING:
            return f"{self.kind.value}:{self.curve}"
        if self.kind is StopKind.SOLVER_FAILURE:
            return f"{self.kind.value}:{self.detail}"
        return self.kind.value
