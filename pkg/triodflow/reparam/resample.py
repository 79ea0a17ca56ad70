import logging

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import CubicSpline

from ..errors import Degenerate, SpecViolation
from ..network.curve import DiscreteCurve, frenet

logger = logging.getLogger(__name__)

DENSE_FACTOR = 16


def parameter_grid(N):
    return np.arange(N + 1) / N


def curve_spline(c: DiscreteCurve):
    return CubicSpline(parameter_grid(c.N), c.nodes, axis=0)


def _chords(nodes):
    return np.hypot(*np.diff(nodes, axis=0).T)


def to_constant_speed(c: DiscreteCurve, N_out=None, kind="linear", delta_reg=1e-8) -> DiscreteCurve:
    """Resample ``c`` at equal arc-length spacing.

    ``kind="linear"`` walks the polyline itself; ``kind="cubic"`` walks a
    cubic spline through the nodes, measured with a dense quadrature.
    Endpoints are carried over exactly.
    """
    N_out = c.N if N_out is None else int(N_out)
    if N_out < 4:
        raise SpecViolation(f"output node count must satisfy N >= 4, got {N_out}")
    frenet(c, delta_reg)
    chords = _chords(c.nodes)
    if chords.min() <= 0.0:
        raise Degenerate("curve has repeated consecutive nodes")

    if kind == "linear":
        s = np.concatenate([[0.0], np.cumsum(chords)])
        targets = s[-1] * parameter_grid(N_out)
        nodes = np.stack(
            [np.interp(targets, s, c.nodes[:, 0]), np.interp(targets, s, c.nodes[:, 1])], axis=-1
        )
    elif kind == "cubic":
        spline = curve_spline(c)
        x = np.linspace(0.0, 1.0, DENSE_FACTOR * c.N + 1)
        speed = np.hypot(*spline(x, 1).T)
        if speed.min() < delta_reg:
            raise Degenerate("spline through the nodes is not regular")
        s = cumulative_trapezoid(speed, x, initial=0.0)
        params = np.interp(s[-1] * parameter_grid(N_out), s, x)
        nodes = spline(params)
    else:
        raise SpecViolation(f"unknown resampling kind '{kind}'")

    nodes[0] = c.nodes[0]
    nodes[-1] = c.nodes[-1]
    return DiscreteCurve(nodes)
