"""End reparametrizations that prescribe the tangential second derivative.

Near an end the arc-length parameter s is replaced by phi(s) = s + h(s) where
h'' is a bump of height mu supported on [0, delta]. The bump

    p(t) = (1 - t)^3 (1 - 12 t + 21 t^2),   0 <= t <= 1

has p(0) = 1, vanishes to second order at t = 1 and has zero mean and zero
first moment, so h and h' vanish at both ends of the support and
phi''(0) / phi'(0)^2 = mu.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial

from ..errors import SpecViolation
from ..network.curve import DiscreteCurve
from .resample import _chords, curve_spline, parameter_grid

logger = logging.getLogger(__name__)

BUMP = Polynomial([1.0, -1.0]) ** 3 * Polynomial([1.0, -12.0, 21.0])
BUMP_1 = BUMP.integ()
BUMP_2 = BUMP_1.integ()


@dataclass(frozen=True)
class ReparamSpec:
    mu: float
    delta: float
    N: int

    def __post_init__(self):
        if self.N < 4:
            raise SpecViolation(f"ReparamSpec needs N >= 4, got {self.N}")
        if not self.delta > 0.0:
            raise SpecViolation("ReparamSpec needs a positive support width delta")

    def check(self, length):
        bound = length / 2.0
        if self.mu != 0.0:
            bound = min(bound, 1.0 / (2.0 * abs(self.mu)))
        if self.delta > bound:
            raise SpecViolation(
                f"support width {self.delta:g} exceeds min(L/2, 1/(2|mu|)) = {bound:g}"
            )


@dataclass(frozen=True)
class LemparaMap:
    """phi(s) = s + h(s) on [0, L] for one end."""

    mu: float
    delta: float
    length: float

    def _t(self, s):
        return np.clip(np.asarray(s, dtype=float) / self.delta, 0.0, 1.0)

    def h(self, s):
        s = np.asarray(s, dtype=float)
        return np.where(s < self.delta, self.mu * self.delta ** 2 * BUMP_2(self._t(s)), 0.0)

    def phi(self, s):
        return np.asarray(s, dtype=float) + self.h(s)

    def dphi(self, s):
        s = np.asarray(s, dtype=float)
        return 1.0 + np.where(s < self.delta, self.mu * self.delta * BUMP_1(self._t(s)), 0.0)

    def ddphi(self, s):
        s = np.asarray(s, dtype=float)
        return np.where(s < self.delta, self.mu * BUMP(self._t(s)), 0.0)

    def sigma(self, x):
        """The same map on the unit parameter interval."""
        return self.phi(self.length * np.asarray(x, dtype=float)) / self.length


def end_parameters(N, length, start: Optional[LemparaMap] = None, end: Optional[LemparaMap] = None):
    """Sample parameters x_k moved by the start map and the mirrored end map."""
    x = parameter_grid(N)
    sigma = x.copy()
    if start is not None and start.mu != 0.0:
        sigma += start.h(length * x) / length
    if end is not None and end.mu != 0.0:
        sigma -= end.h(length * (1.0 - x)) / length
    sigma[0], sigma[-1] = 0.0, 1.0
    return sigma


def reparametrize(c: DiscreteCurve, N, start=None, end=None, spline=None):
    spline = curve_spline(c) if spline is None else spline
    length = c.polyline_length()
    nodes = spline(end_parameters(N, length, start, end))
    nodes[0] = c.nodes[0]
    nodes[-1] = c.nodes[-1]
    return DiscreteCurve(nodes)


def lempara_reparam(c: DiscreteCurve, spec: ReparamSpec, end=0, speed_tol=1e-3) -> DiscreteCurve:
    """Reparametrize a constant-speed curve so that at the chosen end
    (u_xx . tau) / |u_x|^2 = mu, leaving its image unchanged.
    """
    chords = _chords(c.nodes)
    if chords.max() - chords.min() > speed_tol * chords.mean():
        raise SpecViolation("lempara_reparam expects a constant-speed curve")
    length = c.polyline_length()
    spec.check(length)
    if spec.mu == 0.0 and spec.N == c.N:
        return DiscreteCurve(c.nodes)
    if end == 0:
        return reparametrize(c, spec.N, start=LemparaMap(spec.mu, spec.delta, length))
    # the tangent flips under reversal, so the target changes sign
    return reparametrize(c, spec.N, end=LemparaMap(-spec.mu, spec.delta, length))
