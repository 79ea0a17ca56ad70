"""Scalar functionals of a triod: lengths, curvature norms and dissipation bookkeeping."""
import logging
from dataclasses import asdict, dataclass
from typing import List, Optional

import numpy as np
from scipy.integrate import trapezoid

from ..anisotropy import Anisotropy, phi_theta, polar_grad_theta
from ..errors import DegenerateJunction
from ..network import TriodNetwork, curve_data, frenet, junction_frame, junction_identities, lambdas_from_frame
from ..network.curve import DiscreteCurve, perp

logger = logging.getLogger(__name__)

CSV_HEADER = [
    "t", "L1", "L2", "L3", "Lphi1", "Lphi2", "Lphi3", "kphi_l2sq", "kphi_h1sq",
    "herring_res", "qx", "qy", "a0_min", "lambda_mismatch",
]


def _grid(N):
    return np.arange(N + 1) / N


def _length(d, x):
    return float(trapezoid(d.speed, x))


def _aniso_length(d, phi, x):
    return float(trapezoid(phi * d.speed, x))


def _kphi_parts(d, phi, x):
    l2 = trapezoid(d.kappa_phi ** 2 * phi * d.speed, x)
    ks = np.gradient(d.kappa_phi, x, edge_order=2) / d.speed
    return float(l2), float(trapezoid(ks ** 2 * d.speed, x))


def lengths(net: TriodNetwork, delta_reg=1e-8):
    return np.array([_length(frenet(c, delta_reg), _grid(c.N)) for c in net.curves])


def aniso_lengths(net: TriodNetwork, a: Anisotropy, delta_reg=1e-8):
    out = []
    for c in net.curves:
        d = frenet(c, delta_reg)
        out.append(_aniso_length(d, phi_theta(a, d.theta)[0], _grid(c.N)))
    return np.array(out)


def curve_kphi_norms(c: DiscreteCurve, a: Anisotropy, delta_reg=1e-8):
    """(int kappa_phi^2 phi ds, int ((kappa_phi)_s)^2 ds) for one open curve."""
    d = curve_data(c, a, delta_reg)
    return _kphi_parts(d, phi_theta(a, d.theta)[0], _grid(c.N))


def kphi_norms(net: TriodNetwork, a: Anisotropy, delta_reg=1e-8):
    parts = [curve_kphi_norms(c, a, delta_reg) for c in net.curves]
    l2 = sum(p[0] for p in parts)
    return l2, l2 + sum(p[1] for p in parts)


def closed_kphi_norms(nodes, a: Anisotropy):
    """The same norms for a closed loop sampled uniformly (last node not repeated)."""
    u = np.asarray(nodes, dtype=float)
    n = u.shape[0]
    fwd, bwd = np.roll(u, -1, axis=0), np.roll(u, 1, axis=0)
    ux = (fwd - bwd) * (0.5 * n)
    uxx = (fwd - 2.0 * u + bwd) * n * n
    speed = np.hypot(ux[:, 0], ux[:, 1])
    nu = perp(ux / speed[:, None])
    theta = np.arctan2(nu[:, 1], nu[:, 0])
    kappa = np.einsum("ij,ij->i", uxx, nu) / speed ** 2
    phi, _, phi2 = phi_theta(a, theta)
    kphi = (phi + phi2) * kappa
    ks = (np.roll(kphi, -1) - np.roll(kphi, 1)) * (0.5 * n) / speed
    l2 = float(np.sum(kphi ** 2 * phi * speed) / n)
    return l2, l2 + float(np.sum(ks ** 2 * speed) / n)


def length_rates(net: TriodNetwork, a: Anisotropy, delta_reg=1e-8):
    """Predicted d/dt L and d/dt L_phi per curve under the special flow.

    Both carry the boundary terms [lambda] and [phi lambda - psi kappa (tau . N)]
    evaluated between the junction and the fixed endpoint.
    """
    rates_L, rates_Lphi = [], []
    for c in net.curves:
        d = curve_data(c, a, delta_reg)
        x = _grid(c.N)
        phi, _, phi2 = phi_theta(a, d.theta)
        psi = phi * (phi + phi2)
        lam = psi * np.einsum("ij,ij->i", d.u_xx, d.tau) / d.speed ** 2
        tn = np.einsum("ij,ij->i", d.tau, polar_grad_theta(a, d.theta))
        boundary = phi * lam - psi * d.kappa * tn
        rates_L.append(-trapezoid(psi * d.kappa ** 2 * d.speed, x) + lam[-1] - lam[0])
        rates_Lphi.append(-trapezoid(d.kappa_phi ** 2 * phi * d.speed, x) + boundary[-1] - boundary[0])
    return np.array(rates_L), np.array(rates_Lphi)


def interpolation_ratio(f, speed, length=None):
    """||f_s|| / (||f_ss||^(3/4) ||f||^(1/4) + ||f|| / L^(3/2)) in the sup norm."""
    f = np.asarray(f, dtype=float)
    speed = np.asarray(speed, dtype=float)
    x = _grid(f.size - 1)
    if length is None:
        length = trapezoid(speed, x)
    fs = np.gradient(f, x, edge_order=2) / speed
    fss = np.gradient(fs, x, edge_order=2) / speed
    norm = np.abs(f).max()
    denom = np.abs(fss).max() ** 0.75 * norm ** 0.25 + norm / length ** 1.5
    if denom == 0.0:
        return 0.0
    return float(np.abs(fs).max() / denom)


@dataclass
class DiagnosticsRecord:
    t: float
    L: List[float]
    Lphi: List[float]
    kphi_l2sq: float
    kphi_h1sq: float
    herring_res: float
    junction: List[float]
    a0_min: float
    lambda_mismatch: float
    step: int = 0
    dt: Optional[float] = None
    kphi_end_max: float = 0.0
    v_max: float = 0.0
    dissipation_rate: float = 0.0
    identity_residual: float = 0.0
    initial_projection: bool = False
    resampled: bool = False

    @property
    def total_Lphi(self):
        return float(sum(self.Lphi))

    def csv_values(self):
        return [self.t, *self.L, *self.Lphi, self.kphi_l2sq, self.kphi_h1sq,
                self.herring_res, *self.junction, self.a0_min, self.lambda_mismatch]

    def to_dict(self):
        return asdict(self)


def compute_record(
    net: TriodNetwork,
    a: Anisotropy,
    t=0.0,
    step=0,
    dt=None,
    delta_reg=1e-8,
    a0_floor=0.05,
    resampled=False,
    initial_projection=False,
) -> DiagnosticsRecord:
    L, Lphi, l2, h1, v_max = [], [], 0.0, 0.0, 0.0
    data = [curve_data(c, a, delta_reg) for c in net.curves]
    for c, d in zip(net.curves, data):
        x = _grid(c.N)
        phi, _, phi2 = phi_theta(a, d.theta)
        psi = phi * (phi + phi2)
        L.append(_length(d, x))
        Lphi.append(_aniso_length(d, phi, x))
        part, slope = _kphi_parts(d, phi, x)
        l2 += part
        h1 += part + slope
        lam = psi * np.einsum("ij,ij->i", d.u_xx, d.tau) / d.speed ** 2
        v_max = max(v_max, float(np.hypot(psi * d.kappa, lam).max()))

    frame = junction_frame(net, a, delta_reg, data)
    dots = np.abs(frame.nu @ frame.tau.T)
    a0 = float(min(dots[i, j] for i in range(3) for j in range(3) if i != j))
    try:
        lam = lambdas_from_frame(frame, a0_floor)
        mismatch = lam.mismatch
        identity = junction_identities(frame, lam.lambdas)[1]
    except DegenerateJunction as err:
        logger.warning("Degenerate junction at t=%.6g: %s", t, err)
        mismatch = float("nan")
        identity = float("nan")

    return DiagnosticsRecord(
        t=float(t),
        L=L,
        Lphi=Lphi,
        kphi_l2sq=l2,
        kphi_h1sq=h1,
        herring_res=float(np.hypot(*frame.cahn_hoffman.sum(axis=0))),
        junction=[float(v) for v in net.junction],
        a0_min=a0,
        lambda_mismatch=mismatch,
        step=step,
        dt=dt,
        kphi_end_max=float(np.abs(frame.kappa_phi_end).max()),
        v_max=v_max,
        dissipation_rate=l2,
        identity_residual=identity,
        initial_projection=initial_projection,
        resampled=resampled,
    )


def check_dissipation(records, initial_total=None, slack=1e-6):
    """Steps whose total anisotropic length grew by more than slack * dt."""
    violations = []
    previous = initial_total
    for record in records:
        total = record.total_Lphi
        skip = record.resampled or record.initial_projection or previous is None
        if not skip and total - previous > slack * (record.dt or 0.0):
            violations.append(record.step)
        previous = total
    return violations
