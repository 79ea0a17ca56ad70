"""Junction algebra: Herring residual, tangential velocities and admissibility."""
import logging
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from ..anisotropy import Anisotropy, phi_theta, polar_grad_theta
from ..errors import Degenerate, DegenerateJunction
from .curve import curve_data
from .triod import TriodNetwork

logger = logging.getLogger(__name__)


@dataclass
class JunctionFrame:
    tau: np.ndarray
    nu: np.ndarray
    theta: np.ndarray
    kappa: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    cahn_hoffman: np.ndarray
    kappa_phi_end: np.ndarray


def junction_frame(net: TriodNetwork, a: Anisotropy, delta_reg: float = 1e-8, data=None) -> JunctionFrame:
    """Node-0 frame of every curve; ``data`` may carry curve_data(c, a) already computed."""
    if data is None:
        data = [curve_data(c, a, delta_reg) for c in net.curves]
    theta = np.array([d.theta[0] for d in data])
    phi, _, phi2 = phi_theta(a, theta)
    return JunctionFrame(
        tau=np.array([d.tau[0] for d in data]),
        nu=np.array([d.nu[0] for d in data]),
        theta=theta,
        kappa=np.array([d.kappa[0] for d in data]),
        phi=phi,
        psi=phi * (phi + phi2),
        cahn_hoffman=polar_grad_theta(a, theta),
        kappa_phi_end=np.array([d.kappa_phi[-1] for d in data]),
    )


@dataclass
class JunctionLambdas:
    lambdas: np.ndarray
    mismatch: float
    plus: np.ndarray
    minus: np.ndarray


def lambdas_from_frame(frame: JunctionFrame, a0_floor: float = 0.05) -> JunctionLambdas:
    tau, nu = frame.tau, frame.nu
    w = frame.psi * frame.kappa
    plus = np.empty(3)
    minus = np.empty(3)
    for i in range(3):
        ip, im = (i + 1) % 3, (i - 1) % 3
        alpha, beta = nu[ip] @ nu[i], tau[ip] @ nu[i]
        gamma, delta = nu[im] @ nu[i], tau[im] @ nu[i]
        if abs(beta) < a0_floor or abs(delta) < a0_floor:
            raise DegenerateJunction(
                f"junction frame of curve {i + 1} is nearly tangential "
                f"(|beta|={abs(beta):.3g}, |delta|={abs(delta):.3g}, floor {a0_floor})"
            )
        plus[i] = (alpha / beta) * w[i] - w[ip] / beta
        minus[i] = (gamma / delta) * w[i] - w[im] / delta
    return JunctionLambdas(
        lambdas=0.5 * (plus + minus),
        mismatch=float(np.max(np.abs(plus - minus))),
        plus=plus,
        minus=minus,
    )


def junction_lambdas(
    net: TriodNetwork, a: Anisotropy, a0_floor: float = 0.05, delta_reg: float = 1e-8
) -> JunctionLambdas:
    """Tangential junction velocities that make the three normal velocities compatible."""
    return lambdas_from_frame(junction_frame(net, a, delta_reg), a0_floor)


def herring_residual(net: TriodNetwork, a: Anisotropy, delta_reg: float = 1e-8):
    return junction_frame(net, a, delta_reg).cahn_hoffman.sum(axis=0)


def a0_min(net: TriodNetwork, delta_reg: float = 1e-8):
    frame = junction_frame(net, Anisotropy.isotropic(), delta_reg)
    return _a0_from_frame(frame)


def _a0_from_frame(frame):
    dots = np.abs(frame.nu @ frame.tau.T)
    return float(min(dots[i, j] for i in range(3) for j in range(3) if i != j))


def junction_identities(frame: JunctionFrame, lambdas):
    """Residuals of the two scalar identities implied by velocity matching and Herring.

    Returns (energy, tension):
    sum psi phi kappa + lambda (tau . N) and sum phi lambda - psi kappa (tau . N).
    """
    lam = np.asarray(lambdas, dtype=float)
    tn = np.einsum("ij,ij->i", frame.tau, frame.cahn_hoffman)
    w = frame.psi * frame.kappa
    energy = float(np.sum(w * frame.phi + lam * tn))
    tension = float(np.sum(frame.phi * lam - w * tn))
    return energy, tension


def velocity_mismatch(frame: JunctionFrame, lambdas):
    w = frame.psi * frame.kappa
    v = w[:, None] * frame.nu + np.asarray(lambdas)[:, None] * frame.tau
    return float(max(np.hypot(*(v[i] - v[j])) for i in range(3) for j in range(3) if i < j))


@dataclass
class AdmissibilityReport:
    tol: float
    concurrency: float = 0.0
    herring: float = float("inf")
    kphi_end: List[float] = field(default_factory=lambda: [float("inf")] * 3)
    velocity_mismatch: float = float("inf")
    lambda_mismatch: float = float("inf")
    a0_min: float = 0.0
    identity_energy: float = float("inf")
    identity_tension: float = float("inf")
    note: Optional[str] = None

    @property
    def herring_ok(self):
        return self.herring <= self.tol

    @property
    def kphi_end_ok(self):
        return max(self.kphi_end) <= self.tol

    @property
    def velocity_ok(self):
        return self.velocity_mismatch <= self.tol

    @property
    def passed(self):
        return self.concurrency == 0.0 and self.herring_ok and self.kphi_end_ok and self.velocity_ok

    @property
    def geometric_ok(self):
        return self.herring_ok and self.kphi_end_ok

    def to_dict(self):
        out = asdict(self)
        out["passed"] = self.passed
        return out

    def format(self):
        def mark(ok):
            return "ok" if ok else "FAIL"

        lines = [
            f"concurrency        {self.concurrency:.3e}  {mark(self.concurrency == 0.0)}",
            f"herring            {self.herring:.3e}  {mark(self.herring_ok)}",
        ]
        for i, value in enumerate(self.kphi_end):
            lines.append(f"kphi_end[{i + 1}]        {value:.3e}  {mark(value <= self.tol)}")
        lines += [
            f"velocity_mismatch  {self.velocity_mismatch:.3e}  {mark(self.velocity_ok)}",
            f"lambda_mismatch    {self.lambda_mismatch:.3e}",
            f"a0_min             {self.a0_min:.3e}",
            f"identity_energy    {self.identity_energy:.3e}",
            f"identity_tension   {self.identity_tension:.3e}",
        ]
        if self.note:
            lines.append(f"note: {self.note}")
        lines.append(f"tol {self.tol:g}: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def admissibility_report(
    net: TriodNetwork,
    a: Anisotropy,
    tol: float = 1e-6,
    a0_floor: float = 0.05,
    delta_reg: float = 1e-8,
) -> AdmissibilityReport:
    report = AdmissibilityReport(tol=tol)
    try:
        frame = junction_frame(net, a, delta_reg)
    except Degenerate as err:
        logger.warning("Admissibility check on a degenerate network: %s", err)
        report.note = str(err)
        return report
    report.herring = float(np.hypot(*frame.cahn_hoffman.sum(axis=0)))
    report.kphi_end = [float(abs(k)) for k in frame.kappa_phi_end]
    report.a0_min = _a0_from_frame(frame)
    try:
        lam = lambdas_from_frame(frame, a0_floor)
    except DegenerateJunction as err:
        logger.warning("Junction lambdas unavailable: %s", err)
        report.note = str(err)
        return report
    report.lambda_mismatch = lam.mismatch
    report.velocity_mismatch = velocity_mismatch(frame, lam.lambdas)
    report.identity_energy, report.identity_tension = junction_identities(frame, lam.lambdas)
    return report
