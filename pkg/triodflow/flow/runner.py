import logging

from ..base import BaseTool
from ..config import FunctionRegistry
from ..diagnostics import compute_record
from ..io import RunEmitter, build_network, config_from_dict
from .config import FlowState
from .scheme import run

logger = logging.getLogger(__name__)


def run_config(cfg, base_dir=None):
    """Run a parsed RunConfig with all outputs written. Returns (state, stop, emitter)."""
    net0 = build_network(cfg)
    a = cfg.anisotropy
    with RunEmitter(cfg.output, a, base_dir) as emitter:
        record0 = compute_record(net0, a, 0.0, 0, None, cfg.flow.delta_reg, cfg.flow.a0_floor)
        emitter.start(FlowState(net0), record0)
        state, stop = run(net0, a, cfg.flow, emitter)
        emitter.finish(stop)
    return state, stop, emitter


@FunctionRegistry.register
class RunFlow(BaseTool):
    def __init__(self, name="run_flow", base_dir=None):
        super().__init__()
        self.name = name
        self.base_dir = base_dir

    @property
    def definition(self):
        return {
            "type": "function",
            "function": {
                "name": self.name,
                "description": "Evolve a triod by anisotropic curvature until the time horizon or a stopping criterion, writing the diagnostics time series",
                "parameters": {
                    "type": "object",
                    "properties": {
                        "config": {
                            "type": "object",
                            "description": "Run configuration with anisotropy, endpoints, initial, flow and output sections",
                        }
                    },
                    "required": ["config"],
                },
            },
        }

    def fn(self, config):
        cfg = config_from_dict(config)
        state, stop, emitter = run_config(cfg, self.base_dir)
        return {
            "stop_reason": str(stop),
            "failed": stop.is_failure,
            "t": state.t,
            "steps": state.step_index,
            "junction": state.net.junction.tolist(),
            "csv": str(emitter.csv_path),
        }
