import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import SpecViolation
from .curve import DiscreteCurve

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TriodNetwork:
    """Three curves leaving a shared junction node towards fixed endpoints.

    Every curve is parametrized from the junction (x = 0) to its endpoint
    (x = 1).
    """

    curves: Tuple[DiscreteCurve, DiscreteCurve, DiscreteCurve]
    endpoints: np.ndarray

    def __post_init__(self):
        curves = tuple(c if isinstance(c, DiscreteCurve) else DiscreteCurve(c) for c in self.curves)
        if len(curves) != 3:
            raise SpecViolation(f"a triod has exactly three curves, got {len(curves)}")
        endpoints = np.array(self.endpoints, dtype=float)
        if endpoints.shape != (3, 2):
            raise SpecViolation("endpoints must be three 2-vectors")
        endpoints.setflags(write=False)
        q = curves[0].nodes[0]
        for i, c in enumerate(curves):
            if not np.array_equal(c.nodes[0], q):
                raise SpecViolation(f"curve {i + 1} does not start at the shared junction node")
            if not np.array_equal(c.nodes[-1], endpoints[i]):
                raise SpecViolation(f"curve {i + 1} does not end at its endpoint P{i + 1}")
        object.__setattr__(self, "curves", curves)
        object.__setattr__(self, "endpoints", endpoints)

    @classmethod
    def straight(cls, q, P, N):
        q = np.asarray(q, dtype=float)
        P = np.asarray(P, dtype=float)
        x = np.arange(N + 1) / N
        curves = []
        for i in range(3):
            nodes = q[None, :] + x[:, None] * (P[i] - q)[None, :]
            nodes[0] = q
            nodes[-1] = P[i]
            curves.append(DiscreteCurve(nodes))
        return cls(tuple(curves), P)

    @classmethod
    def from_polylines(cls, polylines, endpoints=None, tol=1e-12):
        """Build a network from three node arrays.

        Junction nodes that agree to ``tol`` (relative to the configuration
        size) are unified to the first curve's node.
        """
        arrays = [np.array(p, dtype=float) for p in polylines]
        if len(arrays) != 3:
            raise SpecViolation(f"a triod has exactly three curves, got {len(arrays)}")
        q = arrays[0][0].copy()
        scale = max(1.0, max(float(np.abs(p).max()) for p in arrays))
        for i, p in enumerate(arrays):
            if np.max(np.abs(p[0] - q)) > tol * scale:
                raise SpecViolation(f"curve {i + 1} does not start at the junction {q.tolist()}")
            p[0] = q
        if endpoints is None:
            endpoints = [p[-1] for p in arrays]
        endpoints = np.asarray(endpoints, dtype=float)
        for i, p in enumerate(arrays):
            if np.max(np.abs(p[-1] - endpoints[i])) > tol * scale:
                raise SpecViolation(f"curve {i + 1} does not end at P{i + 1}")
            p[-1] = endpoints[i]
        return cls(tuple(DiscreteCurve(p) for p in arrays), endpoints)

    @property
    def junction(self):
        return self.curves[0].nodes[0].copy()

    @property
    def N(self):
        return self.curves[0].N

    @property
    def diameter(self):
        pts = np.vstack([self.endpoints, self.curves[0].nodes[:1]])
        diffs = pts[:, None, :] - pts[None, :, :]
        return float(np.sqrt((diffs ** 2).sum(axis=-1)).max())

    def with_curves(self, curves):
        return TriodNetwork(tuple(curves), self.endpoints)

    def translated(self, v):
        v = np.asarray(v, dtype=float)
        return TriodNetwork(
            tuple(DiscreteCurve(c.nodes + v) for c in self.curves), self.endpoints + v
        )

    def rotated(self, omega):
        c, s = np.cos(omega), np.sin(omega)

        # elementwise so that shared nodes stay bitwise equal
        def rotate(p):
            return np.stack([c * p[:, 0] - s * p[:, 1], s * p[:, 0] + c * p[:, 1]], axis=-1)

        return TriodNetwork(
            tuple(DiscreteCurve(rotate(cv.nodes)) for cv in self.curves), rotate(self.endpoints)
        )

    def to_lists(self):
        return [c.nodes.tolist() for c in self.curves]
