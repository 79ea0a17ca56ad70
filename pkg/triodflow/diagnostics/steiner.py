"""Anisotropic Steiner point of three endpoints.

The junction of a straight triod is stationary exactly when it minimizes
E(q) = sum_i phi°((P_i - q)^perp), whose gradient is (sum_i N_i)^perp.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from ..anisotropy import Anisotropy, polar_eval, polar_grad
from ..base import BaseTool
from ..config import FunctionRegistry
from ..errors import NoConvergence, SpecViolation
from ..network.curve import perp

logger = logging.getLogger(__name__)

MAX_EVALUATIONS = 100_000
VERTEX_SNAP = 1e-6
POLISH_STEPS = 20


@dataclass
class SteinerResult:
    q: np.ndarray
    residual: Optional[float]
    at_vertex: bool
    vertex: Optional[int]
    evaluations: int

    def to_dict(self):
        return {
            "q": self.q.tolist(),
            "residual": self.residual,
            "at_vertex": self.at_vertex,
            "vertex": self.vertex,
            "evaluations": self.evaluations,
        }


def straight_energy(a: Anisotropy, P, q):
    d = perp(np.asarray(P) - np.asarray(q))
    return sum(polar_eval(a, v) for v in d)


def straight_herring(a: Anisotropy, P, q):
    return sum(polar_grad(a, v) for v in perp(np.asarray(P) - np.asarray(q)))


def _diameter(P):
    return max(float(np.hypot(*(P[i] - P[j]))) for i in range(3) for j in range(i + 1, 3))


def _polish(a, P, q, diam):
    """Newton on the Herring residual of the straight triod."""
    h = 1e-7 * diam
    r = straight_herring(a, P, q)
    for _ in range(POLISH_STEPS):
        if not np.all(np.isfinite(r)) or np.hypot(*r) < 1e-15:
            break
        J = np.empty((2, 2))
        for j in range(2):
            e = np.zeros(2)
            e[j] = h
            J[:, j] = (straight_herring(a, P, q + e) - r) / h
        try:
            dq = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            break
        trial = q + dq
        r_trial = straight_herring(a, P, trial)
        if not np.hypot(*r_trial) < np.hypot(*r):
            break
        q, r = trial, r_trial
    return q, r


def steiner_point(a: Anisotropy, P, q0=None) -> SteinerResult:
    P = np.asarray(P, dtype=float)
    if P.shape != (3, 2):
        raise SpecViolation("steiner_point needs three 2-vectors")
    diam = _diameter(P)
    for i in range(3):
        for j in range(i + 1, 3):
            if np.hypot(*(P[i] - P[j])) <= 1e-12 * max(diam, 1.0):
                raise SpecViolation(f"endpoints P{i + 1} and P{j + 1} coincide")
    q = P.mean(axis=0) if q0 is None else np.asarray(q0, dtype=float)

    def energy(x):
        return straight_energy(a, P, x)

    evaluations = 0
    scale = energy(q)
    for _ in range(2):
        simplex = np.array([q, q + [0.05 * diam, 0.0], q + [0.0, 0.05 * diam]])
        res = minimize(
            energy,
            q,
            method="Nelder-Mead",
            options={
                "xatol": 1e-12 * diam,
                "fatol": 1e-15 * scale,
                "maxfev": MAX_EVALUATIONS - evaluations,
                "initial_simplex": simplex,
            },
        )
        evaluations += res.nfev
        q = res.x
        if evaluations >= MAX_EVALUATIONS and not res.success:
            raise NoConvergence(f"Nelder-Mead used {evaluations} evaluations without converging")
    logger.debug("Nelder-Mead converged to %s after %d evaluations", q, evaluations)

    distances = np.hypot(*(P - q).T)
    i = int(np.argmin(distances))
    if distances[i] <= VERTEX_SNAP * diam:
        logger.info("Steiner point coincides with endpoint P%d", i + 1)
        return SteinerResult(P[i].copy(), None, True, i, evaluations)

    q, r = _polish(a, P, q, diam)
    return SteinerResult(q, float(np.hypot(*r)), False, None, evaluations)


@FunctionRegistry.register
class SteinerPoint(BaseTool):
    def __init__(self, name="steiner_point"):
        super().__init__()
        self.name = name

    @property
    def definition(self):
        return {
            "type": "function",
            "function": {
                "name": self.name,
                "description": "Find the junction position minimizing the anisotropic length of a straight triod with the given endpoints",
                "parameters": {
                    "type": "object",
                    "properties": {
                        "anisotropy": {"type": "object", "description": "Anisotropy with its family and parameters"},
                        "endpoints": {
                            "type": "array",
                            "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
                            "minItems": 3,
                            "maxItems": 3,
                            "description": "The fixed endpoints P1, P2, P3",
                        },
                        "q0": {
                            "type": "array",
                            "items": {"type": "number"},
                            "minItems": 2,
                            "maxItems": 2,
                            "description": "Initial guess, defaults to the centroid",
                        },
                    },
                    "required": ["anisotropy", "endpoints"],
                },
            },
        }

    def fn(self, anisotropy, endpoints, q0=None):
        a = Anisotropy.from_dict(anisotropy)
        return steiner_point(a, endpoints, q0).to_dict()
