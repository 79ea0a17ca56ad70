"""Reparametrize an admissible triod so that the discrete compatibility
conditions hold at t = 0.

Only the parametrization is changed. The Herring condition and the
vanishing of the anisotropic curvature at the fixed endpoints are
geometric and must already hold.
"""
import logging
from dataclasses import asdict, dataclass, field
from typing import List

import numpy as np

from ..anisotropy import Anisotropy, polar_grad_theta, psi
from ..base import BaseTool
from ..config import FunctionRegistry
from ..errors import GeometricObstruction
from ..network import TriodNetwork, admissibility_report, curve_data, junction_lambdas
from .lempara import LemparaMap, reparametrize
from .resample import curve_spline, to_constant_speed

logger = logging.getLogger(__name__)

MAX_SECANT = 20


@dataclass
class CompatReport:
    cc1_herring: float
    cc2_end: float
    cc3_velocity: float
    c2_surrogate: List[float] = field(default_factory=list)
    iterations: int = 0

    def to_dict(self):
        return asdict(self)


def compat_residuals(net: TriodNetwork, a: Anisotropy, delta_reg=1e-8, iterations=0) -> CompatReport:
    data = [curve_data(c, a, delta_reg) for c in net.curves]
    herring = polar_grad_theta(a, np.array([d.theta[0] for d in data])).sum(axis=0)
    accel = [d.u_xx / d.speed[:, None] ** 2 for d in data]
    end = max(float(np.hypot(*acc[-1])) for acc in accel)
    velocity = [psi(a, d.theta[0]) * acc[0] for d, acc in zip(data, accel)]
    cc3 = max(float(np.hypot(*(velocity[i] - velocity[j]))) for i in range(3) for j in range(i + 1, 3))
    return CompatReport(
        cc1_herring=float(np.hypot(*herring)),
        cc2_end=end,
        cc3_velocity=cc3,
        c2_surrogate=[float(np.hypot(acc[:, 0], acc[:, 1]).max()) for acc in accel],
        iterations=iterations,
    )


def _tangential_ratio(c, a, node, delta_reg):
    d = curve_data(c, a, delta_reg)
    return float(d.u_xx[node] @ d.tau[node]) / d.speed[node] ** 2


def _support(mu, length):
    if mu == 0.0:
        return 0.45 * length
    return 0.45 * min(length, 1.0 / abs(mu))


def _secant(f, x0, x1, tol):
    f0, f1 = f(x0), f(x1)
    best = (abs(f0), x0) if abs(f0) < abs(f1) else (abs(f1), x1)
    for _ in range(MAX_SECANT):
        if abs(f1) <= tol or f1 == f0:
            break
        x0, x1, f0 = x1, x1 - f1 * (x1 - x0) / (f1 - f0), f1
        f1 = f(x1)
        if abs(f1) < best[0]:
            best = (abs(f1), x1)
    return best[1]


def make_compatible(
    net: TriodNetwork,
    a: Anisotropy,
    tol=1e-6,
    a0_floor=0.05,
    delta_reg=1e-8,
    max_passes=20,
    target_tol=1e-10,
):
    """Return (network, CompatReport) with cc1-cc3 satisfied discretely."""
    before = admissibility_report(net, a, tol, a0_floor, delta_reg)
    if not before.geometric_ok:
        raise GeometricObstruction(
            "reparametrization cannot repair the Herring condition or the endpoint curvature",
            report=before,
        )

    N = net.N
    base = [to_constant_speed(c, N, kind="cubic", delta_reg=delta_reg) for c in net.curves]
    splines = [curve_spline(c) for c in base]
    lengths = [c.polyline_length() for c in base]
    mu_start = np.zeros(3)
    mu_end = np.zeros(3)

    def build(i, m0, m1):
        start = LemparaMap(m0, _support(m0, lengths[i]), lengths[i])
        end = LemparaMap(-m1, _support(m1, lengths[i]), lengths[i])
        return reparametrize(base[i], N, start, end, spline=splines[i])

    def targets_and_error(current):
        lam = junction_lambdas(current, a, a0_floor, delta_reg).lambdas
        theta0 = np.array([curve_data(c, None, delta_reg).theta[0] for c in current.curves])
        targets = lam / psi(a, theta0)
        error = max(
            max(abs(_tangential_ratio(c, a, -1, delta_reg)) for c in current.curves),
            max(abs(_tangential_ratio(c, a, 0, delta_reg) - t) for c, t in zip(current.curves, targets)),
        )
        return targets, error

    curves = list(base)
    current = net.with_curves(curves)
    targets, error = targets_and_error(current)
    best = (error, current, 0)
    passes = 0
    while error > target_tol and passes < max_passes:
        passes += 1
        for i in range(3):
            mu_end[i] = _secant(
                lambda m: _tangential_ratio(build(i, mu_start[i], m), a, -1, delta_reg),
                mu_end[i],
                mu_end[i] - _tangential_ratio(curves[i], a, -1, delta_reg),
                target_tol,
            )
            mu_start[i] = _secant(
                lambda m: _tangential_ratio(build(i, m, mu_end[i]), a, 0, delta_reg) - targets[i],
                mu_start[i],
                mu_start[i] + targets[i] - _tangential_ratio(curves[i], a, 0, delta_reg),
                target_tol,
            )
            curves[i] = build(i, mu_start[i], mu_end[i])
        current = net.with_curves(curves)
        # lambda depends on the discrete junction curvature, which the start maps shift
        targets, error = targets_and_error(current)
        logger.debug("make_compatible pass %d: target error %.3e", passes, error)
        if error >= best[0]:
            break
        best = (error, current, passes)

    _, current, passes = best
    report = compat_residuals(current, a, delta_reg, iterations=passes)
    logger.info(
        "make_compatible: cc3 %.3e -> %.3e after %d passes",
        compat_residuals(net, a, delta_reg).cc3_velocity,
        report.cc3_velocity,
        passes,
    )
    return current, report


@FunctionRegistry.register
class MakeCompatible(BaseTool):
    def __init__(self, name="make_compatible"):
        super().__init__()
        self.name = name

    @property
    def definition(self):
        return {
            "type": "function",
            "function": {
                "name": self.name,
                "description": "Reparametrize an admissible triod so that the discrete compatibility conditions hold at the junction and at the fixed endpoints",
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
                        "tol": {"type": "number", "exclusiveMinimum": 0, "description": "Tolerance on the geometric residuals"},
                    },
                    "required": ["anisotropy", "curves"],
                },
            },
        }

    def fn(self, anisotropy, curves, tol=1e-6):
        a = Anisotropy.from_dict(anisotropy)
        net = TriodNetwork.from_polylines(curves)
        before = compat_residuals(net, a)
        out, report = make_compatible(net, a, tol=tol)
        return {"before": before.to_dict(), "after": report.to_dict(), "curves": out.to_lists()}
