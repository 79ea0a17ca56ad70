import logging

import numpy as np

from ..anisotropy import Anisotropy, psi
from ..network import curve_data
from ..network.curve import DiscreteCurve

logger = logging.getLogger(__name__)


def evolution_law_residuals(before: DiscreteCurve, after: DiscreteCurve, dt, a: Anisotropy, node, delta_reg=1e-8):
    """Relative residuals of the evolution laws for theta and kappa at one node.

    theta_t = (psi kappa)_s + lambda kappa
    kappa_t = (psi kappa)_ss + psi kappa^3 + lambda kappa_s
    with lambda = psi (u_xx . tau) / |u_x|^2 the tangential velocity.
    """
    d0 = curve_data(before, a, delta_reg)
    d1 = curve_data(after, a, delta_reg)
    x = np.arange(before.N + 1) / before.N

    def ds(f):
        return np.gradient(f, x, edge_order=2) / d0.speed

    w = psi(a, d0.theta) * d0.kappa
    lam = psi(a, d0.theta) * np.einsum("ij,ij->i", d0.u_xx, d0.tau) / d0.speed ** 2
    dtheta = np.angle(np.exp(1j * (d1.theta - d0.theta)))

    theta_lhs = dtheta[node] / dt
    theta_rhs = ds(w)[node] + lam[node] * d0.kappa[node]
    kappa_lhs = (d1.kappa[node] - d0.kappa[node]) / dt
    kappa_rhs = ds(ds(w))[node] + w[node] * d0.kappa[node] ** 2 + lam[node] * ds(d0.kappa)[node]
    return {
        "theta": abs(theta_lhs - theta_rhs) / abs(theta_rhs),
        "kappa": abs(kappa_lhs - kappa_rhs) / abs(kappa_rhs),
    }
