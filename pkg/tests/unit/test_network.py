import numpy as np
import pytest

from triodflow.anisotropy import Anisotropy, polar_grad_theta
from triodflow.errors import DegenerateJunction, SpecViolation
from triodflow.network import (
    DiscreteCurve,
    TriodNetwork,
    a0_min,
    admissibility_report,
    herring_residual,
    junction_frame,
    junction_identities,
    junction_lambdas,
    lambdas_from_frame,
    velocity_mismatch,
)
from triodflow.network.check import AdmissibilityCheck
from triodflow.network.junction import JunctionFrame


def unit_directions(degrees):
    rad = np.radians(np.asarray(degrees, dtype=float))
    return np.stack([np.cos(rad), np.sin(rad)], axis=-1)


def rotation(omega):
    return np.array([[np.cos(omega), -np.sin(omega)], [np.sin(omega), np.cos(omega)]])


def synthetic_frame(arm_degrees, V):
    """Isotropic junction frame whose normal velocities come from one common velocity V."""
    tau = unit_directions(arm_degrees)
    nu = np.stack([-tau[:, 1], tau[:, 0]], axis=-1)
    theta = np.arctan2(nu[:, 1], nu[:, 0])
    ones = np.ones(3)
    return JunctionFrame(
        tau=tau,
        nu=nu,
        theta=theta,
        kappa=nu @ np.asarray(V, dtype=float),
        phi=ones,
        psi=ones,
        cahn_hoffman=polar_grad_theta(Anisotropy.isotropic(), theta),
        kappa_phi_end=np.zeros(3),
    )


def test_straight_triod_shares_junction_and_endpoints():
    P = unit_directions([0.0, 120.0, 240.0])
    net = TriodNetwork.straight((0.1, -0.2), P, 8)
    q = net.junction
    for i, c in enumerate(net.curves):
        assert np.array_equal(c.nodes[0], q)
        assert np.array_equal(c.nodes[-1], P[i])
    assert net.N == 8


def test_triod_rejects_split_junction():
    P = unit_directions([0.0, 120.0, 240.0])
    net = TriodNetwork.straight((0.0, 0.0), P, 8)
    moved = net.curves[1].nodes.copy()
    moved[0] += 1e-9
    with pytest.raises(SpecViolation):
        TriodNetwork((net.curves[0], DiscreteCurve(moved), net.curves[2]), P)
    with pytest.raises(SpecViolation):
        TriodNetwork.from_polylines([net.curves[0].nodes, moved, net.curves[2].nodes])


def test_from_polylines_unifies_nearby_junction_nodes():
    P = unit_directions([0.0, 120.0, 240.0])
    polylines = [c.nodes.copy() for c in TriodNetwork.straight((0.0, 0.0), P, 8).curves]
    polylines[2][0] += 1e-14
    net = TriodNetwork.from_polylines(polylines)
    assert np.array_equal(net.curves[2].nodes[0], net.junction)


def test_triod_rejects_wrong_endpoint():
    P = unit_directions([0.0, 120.0, 240.0])
    net = TriodNetwork.straight((0.0, 0.0), P, 8)
    with pytest.raises(SpecViolation):
        TriodNetwork(net.curves, P + 0.5)


def test_diameter():
    P = np.array([[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]])
    assert TriodNetwork.straight((1.0, 1.0), P, 4).diameter == pytest.approx(5.0)


def test_herring_of_isotropic_120_degree_triod():
    net = TriodNetwork.straight((0.0, 0.0), unit_directions([0.0, 120.0, 240.0]), 16)
    assert np.hypot(*herring_residual(net, Anisotropy.isotropic())) <= 1e-12


def test_herring_of_right_angled_triod():
    net = TriodNetwork.straight((0.0, 0.0), unit_directions([0.0, 90.0, 180.0]), 16)
    assert np.allclose(herring_residual(net, Anisotropy.isotropic()), (-1.0, 0.0), atol=1e-12)


def test_herring_is_translation_invariant(anisotropy):
    P = np.array([[1.0, 0.2], [-0.7, 0.9], [-0.3, -1.1]])
    net = TriodNetwork.straight((0.05, 0.02), P, 16)
    moved = net.translated((3.25, -1.5))
    assert np.allclose(herring_residual(moved, anisotropy), herring_residual(net, anisotropy), atol=1e-12)


def test_herring_is_rotation_equivariant(anisotropy):
    omega = 0.8
    P = np.array([[1.0, 0.2], [-0.7, 0.9], [-0.3, -1.1]])
    net = TriodNetwork.straight((0.05, 0.02), P, 16)
    rotated = herring_residual(net.rotated(omega), anisotropy.rotated(omega))
    assert np.allclose(rotated, rotation(omega) @ herring_residual(net, anisotropy), atol=1e-10)


def test_rotation_keeps_shared_junction():
    P = np.array([[1.0, 0.2], [-0.7, 0.9], [-0.3, -1.1]])
    net = TriodNetwork.straight((0.05, 0.02), P, 8).rotated(1.1)
    assert all(np.array_equal(c.nodes[0], net.junction) for c in net.curves)


def test_straight_triod_lambdas_vanish(anisotropy):
    net = TriodNetwork.straight((0.0, 0.0), unit_directions([0.0, 120.0, 240.0]), 16)
    lam = junction_lambdas(net, anisotropy)
    assert np.allclose(lam.lambdas, 0.0, atol=1e-12)
    assert lam.mismatch <= 1e-12


def test_symmetric_curved_triod_lambdas(make_arc):
    c = 0.5
    polylines = [make_arc((0.0, 0.0), np.radians(90.0 + 120.0 * i), c, 1.0, 128) for i in range(3)]
    net = TriodNetwork.from_polylines(polylines)
    lam = junction_lambdas(net, Anisotropy.isotropic())
    expected = 2.0 * c * 1.5 / np.sin(np.radians(120.0))
    assert lam.mismatch == pytest.approx(expected, rel=1e-2)
    assert np.allclose(lam.lambdas, 0.0, atol=1e-6)


def test_lambdas_recover_common_velocity():
    V = np.array([0.3, -0.7])
    frame = synthetic_frame([20.0, 140.0, 260.0], V)
    lam = lambdas_from_frame(frame)
    assert lam.mismatch <= 1e-12
    assert np.allclose(lam.lambdas, frame.tau @ V, atol=1e-12)
    assert velocity_mismatch(frame, lam.lambdas) <= 1e-12


def test_junction_identities_hold_for_matched_velocities():
    frame = synthetic_frame([20.0, 140.0, 260.0], (0.3, -0.7))
    energy, tension = junction_identities(frame, lambdas_from_frame(frame).lambdas)
    assert abs(energy) <= 1e-12
    assert abs(tension) <= 1e-12


def test_nearly_tangential_junction_is_degenerate():
    frame = synthetic_frame([0.0, 1.0, 180.0], (0.3, -0.7))
    with pytest.raises(DegenerateJunction):
        lambdas_from_frame(frame, a0_floor=0.05)


def test_a0_min_of_symmetric_triod():
    net = TriodNetwork.straight((0.0, 0.0), unit_directions([0.0, 120.0, 240.0]), 16)
    assert a0_min(net) == pytest.approx(np.sin(np.radians(120.0)))


def test_junction_frame_fields(anisotropy):
    net = TriodNetwork.straight((0.0, 0.0), unit_directions([0.0, 120.0, 240.0]), 16)
    frame = junction_frame(net, anisotropy)
    assert frame.tau.shape == (3, 2)
    assert np.allclose(frame.kappa, 0.0, atol=1e-12)
    assert np.allclose(frame.kappa_phi_end, 0.0, atol=1e-12)


def test_admissibility_of_symmetric_straight_triod():
    net = TriodNetwork.straight((0.0, 0.0), unit_directions([0.0, 120.0, 240.0]), 16)
    report = admissibility_report(net, Anisotropy.isotropic())
    assert report.passed
    assert report.geometric_ok
    assert "PASS" in report.format()


def test_admissibility_flags_herring_violation():
    net = TriodNetwork.straight((0.3, 0.0), unit_directions([0.0, 120.0, 240.0]), 16)
    report = admissibility_report(net, Anisotropy.isotropic())
    assert not report.herring_ok
    assert report.kphi_end_ok
    assert not report.passed
    assert report.to_dict()["passed"] is False


def test_admissibility_flags_curvature_at_endpoint():
    P = unit_directions([0.0, 120.0, 240.0])
    net = TriodNetwork.straight((0.0, 0.0), P, 32)
    x = np.arange(33) / 32
    bend = np.clip(x - 0.6, 0.0, None) ** 3 * (1.0 - x)
    nodes = net.curves[0].nodes + 0.2 * bend[:, None] * np.array([0.0, 1.0])
    nodes[-1] = P[0]
    bent = net.with_curves((DiscreteCurve(nodes), net.curves[1], net.curves[2]))
    report = admissibility_report(bent, Anisotropy.isotropic())
    assert report.herring_ok
    assert not report.kphi_end_ok
    assert report.kphi_end[0] > 1e-3


def test_admissibility_of_degenerate_junction():
    P = unit_directions([0.0, 2.0, 180.0])
    net = TriodNetwork.straight((0.0, 0.0), P, 16)
    report = admissibility_report(net, Anisotropy.isotropic())
    assert not report.passed
    assert report.note


def test_admissibility_tool():
    P = unit_directions([0.0, 120.0, 240.0])
    curves = TriodNetwork.straight((0.0, 0.0), P, 8).to_lists()
    output = AdmissibilityCheck().fn(anisotropy={"family": "isotropic"}, curves=curves)
    assert output["passed"]
    assert output["ellipticity"] == {"m": 1.0, "M": 1.0}
    assert output["report"]["herring"] <= 1e-12
