import numpy as np
import pytest

from triodflow.anisotropy import Anisotropy
from triodflow.network import DiscreteCurve, TriodNetwork

FAMILIES = {
    "isotropic": Anisotropy.isotropic(),
    "fourier": Anisotropy.fourier(0.1, 3, 0.0),
    "elliptic": Anisotropy.elliptic([[1.0, 0.0], [0.0, 2.0]]),
}


def unit_directions(degrees):
    rad = np.radians(np.asarray(degrees, dtype=float))
    return np.stack([np.cos(rad), np.sin(rad)], axis=-1)


@pytest.fixture(params=sorted(FAMILIES))
def anisotropy(request):
    return FAMILIES[request.param]


@pytest.fixture
def families():
    return FAMILIES


@pytest.fixture
def symmetric_endpoints():
    # arm normals sit where the Fourier(0.1, 3, 0) psi is largest
    return unit_directions([90.0, 210.0, 330.0])


@pytest.fixture
def make_bent_triod():
    """Triod whose arms carry a bump A x^2 (1 - x/s)^3 on [0, s], straight beyond.

    The bump leaves the junction tangents and the straight end pieces
    untouched, so Herring and the endpoint curvature condition survive.
    """

    def build(q, P, amplitudes, N, support=0.6):
        q = np.asarray(q, dtype=float)
        P = np.asarray(P, dtype=float)
        x = np.arange(N + 1) / N
        bump = np.where(x < support, x ** 2 * (1.0 - x / support) ** 3, 0.0)
        curves = []
        for i in range(3):
            d = P[i] - q
            n = np.array([-d[1], d[0]]) / np.hypot(*d)
            nodes = q + x[:, None] * d + amplitudes[i] * bump[:, None] * n
            nodes[0] = q
            nodes[-1] = P[i]
            curves.append(DiscreteCurve(nodes))
        return TriodNetwork(tuple(curves), P)

    return build


@pytest.fixture
def make_arc():
    """Circular arc of radius 1/c leaving ``start`` in direction ``angle``, turning left."""

    def build(start, angle, curvature, length, N):
        start = np.asarray(start, dtype=float)
        d = np.array([np.cos(angle), np.sin(angle)])
        n = np.array([-d[1], d[0]])
        s = length * np.arange(N + 1) / N
        if curvature == 0.0:
            return start + s[:, None] * d
        rho = 1.0 / curvature
        return start + rho * (np.sin(s / rho)[:, None] * d + (1.0 - np.cos(s / rho))[:, None] * n)

    return build
