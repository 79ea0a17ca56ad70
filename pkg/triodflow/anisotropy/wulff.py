import logging

import numpy as np

from ..base import BaseTool
from ..config import FunctionRegistry
from ..errors import SpecViolation
from .anisotropy import Anisotropy, ellipticity_bounds, polar_grad_theta

logger = logging.getLogger(__name__)


def wulff_boundary(a: Anisotropy, n: int, samples: int = 3600):
    """Sample the Wulff boundary as Cahn-Hoffman vectors at n uniform normals."""
    if n < 4:
        raise SpecViolation(f"wulff_boundary needs n >= 4, got {n}")
    ellipticity_bounds(a, samples)
    theta = 2.0 * np.pi * np.arange(n) / n
    return polar_grad_theta(a, theta)


def polygon_is_convex(points):
    pts = np.asarray(points, dtype=float)
    edges = np.roll(pts, -1, axis=0) - pts
    nxt = np.roll(edges, -1, axis=0)
    cross = edges[:, 0] * nxt[:, 1] - edges[:, 1] * nxt[:, 0]
    return bool(np.all(cross > 0.0) or np.all(cross < 0.0))


@FunctionRegistry.register
class WulffBoundary(BaseTool):
    def __init__(self, name="wulff_boundary"):
        super().__init__()
        self.name = name

    @property
    def definition(self):
        return {
            "type": "function",
            "function": {
                "name": self.name,
                "description": "Sample the boundary of the Wulff shape of an anisotropy",
                "parameters": {
                    "type": "object",
                    "properties": {
                        "anisotropy": {
                            "type": "object",
                            "description": "Anisotropy with its family and parameters, e.g. {\"family\": \"fourier\", \"a\": 0.1, \"k\": 3, \"theta0\": 0}",
                        },
                        "n": {
                            "type": "integer",
                            "minimum": 4,
                            "description": "Number of boundary points",
                        },
                    },
                    "required": ["anisotropy", "n"],
                },
            },
        }

    def fn(self, anisotropy, n):
        a = Anisotropy.from_dict(anisotropy)
        logger.debug(f"Sampling Wulff boundary of {a.family} anisotropy at {n} points")
        points = wulff_boundary(a, n)
        return {"points": points.tolist(), "convex": polygon_is_convex(points)}
