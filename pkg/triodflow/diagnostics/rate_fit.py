import logging
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ..base import BaseTool
from ..config import FunctionRegistry
from ..errors import FitDegenerate, SpecViolation

logger = logging.getLogger(__name__)

SCAN_POINTS = 200


@dataclass
class RateFitResult:
    C: float
    T_est: float
    rms: float

    def to_dict(self):
        return asdict(self)


def _fit_for(T, t, y):
    g = 1.0 / np.sqrt(T - t)
    C = float(y @ g / (g @ g))
    return C, float(np.sqrt(np.mean((y - C * g) ** 2)))


def rate_fit(series) -> RateFitResult:
    """Least-squares fit of y(t) = C / sqrt(T - t) over the trailing half."""
    data = np.asarray(series, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 8:
        raise SpecViolation("rate_fit needs at least 8 (t, y) pairs")
    t, y = data[:, 0], data[:, 1]
    if np.any(np.diff(t) <= 0.0):
        raise SpecViolation("rate_fit needs strictly increasing times")
    if np.any(y <= 0.0):
        raise SpecViolation("rate_fit needs positive values")

    half = data.shape[0] // 2
    t, y = t[half:], y[half:]
    steps = np.diff(y)
    if y.max() == y.min() or y[-1] <= y[0] or np.count_nonzero(steps <= 0.0) > steps.size / 4:
        raise FitDegenerate("series is not increasing over its trailing half")

    t_last, span = t[-1], t[-1] - t[0]
    grid = t_last + 2.0 * span * np.arange(1, SCAN_POINTS + 1) / SCAN_POINTS
    rms = np.array([_fit_for(T, t, y)[1] for T in grid])
    j = int(np.argmin(rms))
    lo = grid[j - 1] if j > 0 else t_last + 1e-9 * span
    hi = grid[min(j + 1, SCAN_POINTS - 1)]
    res = minimize_scalar(
        lambda T: _fit_for(T, t, y)[1], bounds=(lo, hi), method="bounded", options={"xatol": 1e-12 * span}
    )
    T_est = float(res.x) if res.fun < rms[j] else float(grid[j])
    C, err = _fit_for(T_est, t, y)
    logger.debug("rate_fit: C=%.6g T=%.6g rms=%.3g", C, T_est, err)
    return RateFitResult(C=C, T_est=T_est, rms=err)


@FunctionRegistry.register
class RateFit(BaseTool):
    def __init__(self, name="rate_fit"):
        super().__init__()
        self.name = name

    @property
    def definition(self):
        return {
            "type": "function",
            "function": {
                "name": self.name,
                "description": "Fit y(t) = C / sqrt(T - t) to the trailing half of a blow-up series",
                "parameters": {
                    "type": "object",
                    "properties": {
                        "series": {
                            "type": "array",
                            "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
                            "minItems": 8,
                            "description": "List of (t, y) pairs in increasing t",
                        }
                    },
                    "required": ["series"],
                },
            },
        }

    def fn(self, series):
        return rate_fit(series).to_dict()
