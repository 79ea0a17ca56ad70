"""Polyline curves on a uniform parameter grid and their Frenet data.

Conventions: tau = u_x / |u_x|, nu = tau^perp with (a, b)^perp = (-b, a), and
theta = atan2(nu_2, nu_1), so that nu = (cos theta, sin theta) and
tau = (sin theta, -cos theta).
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..anisotropy import Anisotropy, phi_theta
from ..errors import Degenerate, SpecViolation

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DiscreteCurve:
    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != 2:
            raise SpecViolation(f"curve nodes must have shape (N+1, 2), got {nodes.shape}")
        if nodes.shape[0] < 5:
            raise SpecViolation(f"a discrete curve needs N >= 4, got N = {nodes.shape[0] - 1}")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @property
    def N(self):
        return self.nodes.shape[0] - 1

    @property
    def start(self):
        return self.nodes[0]

    @property
    def end(self):
        return self.nodes[-1]

    def reversed(self):
        return DiscreteCurve(self.nodes[::-1])

    def polyline_length(self):
        return float(np.sum(np.hypot(*np.diff(self.nodes, axis=0).T)))


@dataclass
class FrenetData:
    tau: np.ndarray
    nu: np.ndarray
    theta: np.ndarray
    speed: np.ndarray
    u_xx: Optional[np.ndarray] = None
    kappa: Optional[np.ndarray] = None
    kappa_phi: Optional[np.ndarray] = None


def perp(v):
    v = np.asarray(v, dtype=float)
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


def first_derivative(nodes):
    u = np.asarray(nodes, dtype=float)
    n = u.shape[0] - 1
    d = np.empty_like(u)
    d[1:-1] = (u[2:] - u[:-2]) * (0.5 * n)
    d[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) * (0.5 * n)
    d[-1] = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) * (0.5 * n)
    return d


def second_derivative(nodes):
    u = np.asarray(nodes, dtype=float)
    n = u.shape[0] - 1
    d = np.empty_like(u)
    d[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) * n * n
    d[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) * n * n
    d[-1] = (2.0 * u[-1] - 5.0 * u[-2] + 4.0 * u[-3] - u[-4]) * n * n
    return d


def frenet(c: DiscreteCurve, delta_reg: float = 1e-8) -> FrenetData:
    ux = first_derivative(c.nodes)
    speed = np.hypot(ux[:, 0], ux[:, 1])
    if speed.min() < delta_reg:
        k = int(np.argmin(speed))
        raise Degenerate(f"|u_x| = {speed[k]:.3g} below the regularity floor at node {k}")
    tau = ux / speed[:, None]
    nu = perp(tau)
    theta = np.arctan2(nu[:, 1], nu[:, 0])
    return FrenetData(tau=tau, nu=nu, theta=theta, speed=speed)


def curvature(c: DiscreteCurve, delta_reg: float = 1e-8):
    return curve_data(c, None, delta_reg).kappa


def aniso_curvature(c: DiscreteCurve, a: Anisotropy, delta_reg: float = 1e-8):
    return curve_data(c, a, delta_reg).kappa_phi


def curve_data(c: DiscreteCurve, a: Optional[Anisotropy], delta_reg: float = 1e-8) -> FrenetData:
    """Frenet data plus Euclidean and (when ``a`` is given) anisotropic curvature."""
    data = frenet(c, delta_reg)
    uxx = second_derivative(c.nodes)
    data.u_xx = uxx
    data.kappa = np.einsum("ij,ij->i", uxx, data.nu) / data.speed ** 2
    if a is not None:
        phi, _, phi2 = phi_theta(a, data.theta)
        data.kappa_phi = phi * (phi + phi2) * data.kappa / phi
    return data


def special_velocity(c: DiscreteCurve, a: Anisotropy, delta_reg: float = 1e-8):
    """Velocity psi(theta) u_xx / |u_x|^2 with its normal and tangential parts."""
    data = curve_data(c, a, delta_reg)
    phi, _, phi2 = phi_theta(a, data.theta)
    coeff = phi * (phi + phi2) / data.speed ** 2
    velocity = coeff[:, None] * data.u_xx
    normal = np.einsum("ij,ij->i", velocity, data.nu)
    tangential = np.einsum("ij,ij->i", velocity, data.tau)
    return velocity, normal, tangential
