import logging

from ..anisotropy import Anisotropy, ellipticity_bounds
from ..base import BaseTool
from ..config import FunctionRegistry
from .junction import admissibility_report
from .triod import TriodNetwork

logger = logging.getLogger(__name__)


@FunctionRegistry.register
class AdmissibilityCheck(BaseTool):
    def __init__(self, name="admissibility_check"):
        super().__init__()
        self.name = name

    @property
    def definition(self):
        return {
            "type": "function",
            "function": {
                "name": self.name,
                "description": "Check a triod against the Herring condition, endpoint curvature and junction velocity matching",
                "parameters": {
                    "type": "object",
                    "properties": {
                        "anisotropy": {"type": "object", "description": "Anisotropy with its family and parameters"},
                        "curves": {
                            "type": "array",
                            "minItems": 3,
                            "maxItems": 3,
                            "description": "Three node arrays, each running from the junction to its endpoint",
                        },
                        "tol": {"type": "number", "exclusiveMinimum": 0, "description": "Tolerance on every residual"},
                        "a0_floor": {"type": "number", "exclusiveMinimum": 0},
                        "samples": {"type": "integer", "minimum": 360, "description": "Angles used to certify ellipticity"},
                    },
                    "required": ["anisotropy", "curves"],
                },
            },
        }

    def fn(self, anisotropy, curves, tol=1e-6, a0_floor=0.05, samples=3600):
        a = Anisotropy.from_dict(anisotropy, samples=samples)
        m, M = ellipticity_bounds(a, samples)
        net = TriodNetwork.from_polylines(curves)
        report = admissibility_report(net, a, tol, a0_floor)
        logger.debug(f"Admissibility of {a.family} triod: {report.passed}")
        return {
            "report": report.to_dict(),
            "text": report.format(),
            "ellipticity": {"m": m, "M": M},
            "passed": report.passed,
        }
