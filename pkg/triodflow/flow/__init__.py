from .config import FlowConfig, FlowState, StopKind, StopReason
from .scheme import cfl_dt, resample, run, step
