from .config import FunctionRegistry, ToolConfig, setup_logging
from .anisotropy import Anisotropy
from .network import DiscreteCurve, TriodNetwork
from .network import check as _check  # noqa: F401  registers admissibility_check
from .flow import FlowConfig, FlowState, StopReason, run, step
from .flow import runner as _runner  # noqa: F401  registers run_flow
