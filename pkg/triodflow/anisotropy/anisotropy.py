"""Smooth elliptic anisotropies described by their angle function.

An anisotropy is stored through phi(theta) = phi°(cos theta, sin theta) and
its first two derivatives. Everything the flow needs (phi°, its gradient,
psi) is expressed through those three values on the unit circle.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from ..errors import ConfigValidationError, NotElliptic, SpecViolation, ZeroVector

logger = logging.getLogger(__name__)

FAMILIES = ("isotropic", "fourier", "elliptic")


@dataclass(frozen=True)
class Anisotropy:
    family: str = "isotropic"
    a: float = 0.0
    k: int = 2
    theta0: float = 0.0
    A: Optional[Tuple[Tuple[float, float], Tuple[float, float]]] = field(default=None)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigValidationError("family", f"unknown anisotropy family '{self.family}'")
        if self.family == "fourier":
            if int(self.k) != self.k or self.k < 2:
                raise ConfigValidationError("k", "Fourier frequency k must be an integer >= 2")
            if not abs(self.a) < 1.0:
                raise ConfigValidationError("a", "Fourier amplitude must satisfy |a| < 1")
        if self.family == "elliptic":
            if self.A is None:
                raise ConfigValidationError("A", "elliptic anisotropy needs a matrix A")
            A = np.asarray(self.A, dtype=float)
            if A.shape != (2, 2) or A[0, 1] != A[1, 0]:
                raise ConfigValidationError("A", "A must be a symmetric 2x2 matrix")
            if np.linalg.eigvalsh(A).min() <= 0.0:
                raise ConfigValidationError("A", "A must be positive definite")

    @classmethod
    def isotropic(cls):
        return cls("isotropic")

    @classmethod
    def fourier(cls, a, k, theta0=0.0):
        return cls("fourier", a=float(a), k=int(k), theta0=float(theta0))

    @classmethod
    def elliptic(cls, A):
        A = tuple(tuple(float(x) for x in row) for row in A)
        return cls("elliptic", A=A)

    @classmethod
    def from_dict(cls, spec, check=True, samples=3600):
        """Build an anisotropy from its config dictionary.

        With ``check`` the ellipticity is certified on ``samples`` angles and
        NotElliptic propagates.
        """
        family = spec.get("family")
        needed = {"isotropic": (), "fourier": ("a", "k"), "elliptic": ("A",)}
        if family not in needed:
            raise ConfigValidationError("family", f"unknown anisotropy family '{family}'")
        for key in needed[family]:
            if key not in spec:
                raise ConfigValidationError(key, f"{family} anisotropy needs '{key}'")
        if family == "fourier":
            anisotropy = cls.fourier(spec["a"], spec["k"], spec.get("theta0", 0.0))
        elif family == "elliptic":
            anisotropy = cls.elliptic(spec["A"])
        else:
            anisotropy = cls.isotropic()
        if check:
            ellipticity_bounds(anisotropy, samples)
        return anisotropy

    def to_dict(self):
        if self.family == "fourier":
            return {"family": "fourier", "a": self.a, "k": self.k, "theta0": self.theta0}
        if self.family == "elliptic":
            return {"family": "elliptic", "A": [list(row) for row in self.A]}
        return {"family": "isotropic"}

    def rotated(self, omega):
        """The anisotropy seen in a frame rotated by ``omega``."""
        if self.family == "fourier":
            return Anisotropy.fourier(self.a, self.k, self.theta0 + omega)
        if self.family == "elliptic":
            c, s = np.cos(omega), np.sin(omega)
            R = np.array([[c, -s], [s, c]])
            A = R @ np.asarray(self.A) @ R.T
            A = 0.5 * (A + A.T)
            return Anisotropy.elliptic(A)
        return self

    @property
    def matrix(self):
        return np.asarray(self.A, dtype=float)


def _angles(theta):
    arr = np.asarray(theta, dtype=float)
    return arr, arr.ndim == 0


def _finish(values, scalar):
    if scalar:
        return tuple(float(v) for v in values)
    return values


def phi_theta(a: Anisotropy, theta):
    """Return (phi, phi', phi'') at ``theta``; accepts scalars or arrays."""
    t, scalar = _angles(theta)
    if a.family == "fourier":
        arg = a.k * (t - a.theta0)
        c, s = np.cos(arg), np.sin(arg)
        values = (1.0 + a.a * c, -a.a * a.k * s, -a.a * a.k ** 2 * c)
    elif a.family == "elliptic":
        (a11, a12), (_, a22) = a.A
        c, s = np.cos(t), np.sin(t)
        c2, s2 = np.cos(2 * t), np.sin(2 * t)
        g = a11 * c * c + 2.0 * a12 * c * s + a22 * s * s
        g1 = (a22 - a11) * s2 + 2.0 * a12 * c2
        g2 = 2.0 * (a22 - a11) * c2 - 4.0 * a12 * s2
        phi = np.sqrt(g)
        values = (phi, g1 / (2.0 * phi), g2 / (2.0 * phi) - g1 * g1 / (4.0 * phi ** 3))
    else:
        values = (np.ones_like(t), np.zeros_like(t), np.zeros_like(t))
    return _finish(values, scalar)


def psi(a: Anisotropy, theta):
    phi, _, phi2 = phi_theta(a, theta)
    return phi * (phi + phi2)


def polar_eval(a: Anisotropy, v):
    v = np.asarray(v, dtype=float)
    r = float(np.hypot(v[0], v[1]))
    if r == 0.0:
        return 0.0
    if a.family == "elliptic":
        return float(np.sqrt(v @ a.matrix @ v))
    if a.family == "isotropic":
        return r
    phi, _, _ = phi_theta(a, np.arctan2(v[1], v[0]))
    return r * phi


def polar_grad_theta(a: Anisotropy, theta):
    """Cahn-Hoffman vectors phi(theta) nu - phi'(theta) tau, one row per angle."""
    t = np.asarray(theta, dtype=float)
    phi, phi1, _ = phi_theta(a, t)
    nu = np.stack([np.cos(t), np.sin(t)], axis=-1)
    tau = np.stack([np.sin(t), -np.cos(t)], axis=-1)
    return np.asarray(phi)[..., None] * nu - np.asarray(phi1)[..., None] * tau


def polar_grad(a: Anisotropy, v):
    v = np.asarray(v, dtype=float)
    r = float(np.hypot(v[0], v[1]))
    if r == 0.0:
        raise ZeroVector("the gradient of the polar norm is undefined at the origin")
    if a.family == "isotropic":
        return v / r
    if a.family == "elliptic":
        Av = a.matrix @ v
        return Av / np.sqrt(v @ Av)
    return polar_grad_theta(a, np.arctan2(v[1], v[0]))


@lru_cache(maxsize=64)
def ellipticity_bounds(a: Anisotropy, n_samples: int = 3600):
    """Sample psi on a uniform grid and return its (min, max)."""
    if n_samples < 360:
        raise SpecViolation(f"ellipticity_bounds needs at least 360 samples, got {n_samples}")
    theta = 2.0 * np.pi * np.arange(n_samples) / n_samples
    phi, _, phi2 = phi_theta(a, theta)
    values = phi * (phi + phi2)
    j = int(np.argmin(values))
    if values[j] <= 0.0 or np.min(phi) <= 0.0:
        logger.debug("Anisotropy %s fails ellipticity at theta=%.6f", a, theta[j])
        raise NotElliptic(
            f"psi(theta) = {values[j]:.6g} <= 0 at theta = {theta[j]:.6f}", theta=float(theta[j])
        )
    return float(values.min()), float(values.max())


def dual_eval(a: Anisotropy, xi, samples=3600):
    """The anisotropy phi itself, the dual of the polar norm."""
    xi = np.asarray(xi, dtype=float)
    if a.family == "isotropic":
        return float(np.hypot(xi[0], xi[1]))
    if a.family == "elliptic":
        return float(np.sqrt(xi @ np.linalg.solve(a.matrix, xi)))

    def support(t):
        phi, _, _ = phi_theta(a, t)
        return (xi[0] * np.cos(t) + xi[1] * np.sin(t)) / phi

    theta = 2.0 * np.pi * np.arange(samples) / samples
    values = support(theta)
    j = int(np.argmax(values))
    h = 2.0 * np.pi / samples
    res = minimize_scalar(
        lambda t: -support(t),
        bounds=(theta[j] - h, theta[j] + h),
        method="bounded",
        options={"xatol": 1e-14},
    )
    return float(max(values[j], -res.fun))
