import numpy as np
import pytest

from triodflow.anisotropy import (
    Anisotropy,
    WulffBoundary,
    dual_eval,
    ellipticity_bounds,
    phi_theta,
    polar_eval,
    polar_grad,
    polygon_is_convex,
    psi,
    wulff_boundary,
)
from triodflow.base import WorkflowContext
from triodflow.errors import ConfigValidationError, NotElliptic, SpecViolation, ZeroVector


def random_vectors(count=100, seed=0):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(count, 2))


def test_phi_theta_closed_forms():
    assert phi_theta(Anisotropy.isotropic(), 1.234) == (1.0, 0.0, 0.0)

    phi, phi1, phi2 = phi_theta(Anisotropy.fourier(0.1, 3, 0.0), 0.0)
    assert phi == pytest.approx(1.1)
    assert phi1 == pytest.approx(0.0, abs=1e-15)
    assert phi2 == pytest.approx(-0.9)

    phi, _, _ = phi_theta(Anisotropy.elliptic([[1, 0], [0, 2]]), np.pi / 2)
    assert phi == pytest.approx(np.sqrt(2.0))


def test_phi_theta_accepts_arrays():
    theta = np.linspace(0.0, 2.0 * np.pi, 7)
    phi, phi1, phi2 = phi_theta(Anisotropy.fourier(0.1, 3, 0.0), theta)
    assert phi.shape == (7,)
    assert np.allclose(phi, 1.0 + 0.1 * np.cos(3 * theta))


def test_polar_eval_examples():
    assert polar_eval(Anisotropy.isotropic(), (3.0, 4.0)) == pytest.approx(5.0)
    assert polar_eval(Anisotropy.elliptic([[1, 0], [0, 2]]), (0.0, 2.0)) == pytest.approx(2.0 * np.sqrt(2.0))
    assert polar_eval(Anisotropy.fourier(0.1, 3, 0.0), (2.0, 0.0)) == pytest.approx(2.2)
    assert polar_eval(Anisotropy.fourier(0.1, 3, 0.0), (0.0, 0.0)) == 0.0


def test_polar_grad_examples():
    assert np.allclose(polar_grad(Anisotropy.isotropic(), (3.0, 4.0)), (0.6, 0.8))
    assert np.allclose(polar_grad(Anisotropy.elliptic([[1, 0], [0, 2]]), (1.0, 0.0)), (1.0, 0.0))


def test_polar_grad_matches_finite_differences(anisotropy):
    h = 1e-6
    for v in random_vectors(20, seed=3):
        fd = np.array(
            [
                (polar_eval(anisotropy, v + h * e) - polar_eval(anisotropy, v - h * e)) / (2 * h)
                for e in np.eye(2)
            ]
        )
        assert np.allclose(polar_grad(anisotropy, v), fd, atol=1e-6)


def test_polar_grad_at_origin_raises():
    with pytest.raises(ZeroVector):
        polar_grad(Anisotropy.fourier(0.1, 3, 0.0), (0.0, 0.0))


def test_psi_examples():
    assert psi(Anisotropy.isotropic(), 0.7) == 1.0
    assert psi(Anisotropy.fourier(0.1, 3, 0.0), 0.0) == pytest.approx(0.22)


def test_polar_norm_is_positively_homogeneous(anisotropy):
    for v in random_vectors():
        for lam in (1e-3, 0.5, 7.0, 1e3):
            expected = lam * polar_eval(anisotropy, v)
            assert abs(polar_eval(anisotropy, lam * v) - expected) <= 1e-12 * expected


def test_euler_identity(anisotropy):
    for v in random_vectors():
        value = polar_eval(anisotropy, v)
        assert abs(polar_grad(anisotropy, v) @ v - value) <= 1e-10 * value


def test_angle_derivatives_match_finite_differences(anisotropy):
    theta = np.random.default_rng(1).uniform(0.0, 2.0 * np.pi, 50)
    phi, phi1, phi2 = phi_theta(anisotropy, theta)
    h1, h2 = 1e-5, 1e-4
    fd1 = (phi_theta(anisotropy, theta + h1)[0] - phi_theta(anisotropy, theta - h1)[0]) / (2 * h1)
    fd2 = (phi_theta(anisotropy, theta + h2)[0] - 2 * phi + phi_theta(anisotropy, theta - h2)[0]) / h2 ** 2
    assert np.max(np.abs(fd1 - phi1)) <= 1e-6
    assert np.max(np.abs(fd2 - phi2)) <= 1e-6


def test_psi_equals_polar_norm_times_hessian(anisotropy):
    h = 1e-4
    for theta in np.random.default_rng(2).uniform(0.0, 2.0 * np.pi, 30):
        nu = np.array([np.cos(theta), np.sin(theta)])
        tau = np.array([np.sin(theta), -np.cos(theta)])
        second = (
            polar_eval(anisotropy, nu + h * tau) - 2 * polar_eval(anisotropy, nu) + polar_eval(anisotropy, nu - h * tau)
        ) / h ** 2
        expected = polar_eval(anisotropy, nu) * second
        assert psi(anisotropy, theta) == pytest.approx(expected, rel=1e-5)


def test_ellipticity_bounds():
    assert ellipticity_bounds(Anisotropy.isotropic()) == (1.0, 1.0)
    m, M = ellipticity_bounds(Anisotropy.fourier(0.1, 3, 0.0))
    assert m == pytest.approx(0.22, abs=1e-4)
    assert M == pytest.approx(1.62, abs=1e-4)
    m, M = ellipticity_bounds(Anisotropy.elliptic([[1, 0], [0, 2]]))
    assert m == pytest.approx(1.0)
    assert M == pytest.approx(2.0)


def test_psi_lies_within_bounds(anisotropy):
    m, M = ellipticity_bounds(anisotropy)
    values = psi(anisotropy, np.linspace(0.0, 2.0 * np.pi, 1001))
    assert np.all(values >= m - 1e-12)
    assert np.all(values <= M + 1e-12)


def test_non_elliptic_fourier_reports_angle():
    with pytest.raises(NotElliptic) as excinfo:
        ellipticity_bounds(Anisotropy.fourier(0.2, 3, 0.0))
    theta = excinfo.value.theta
    assert theta is not None
    assert psi(Anisotropy.fourier(0.2, 3, 0.0), theta) <= 0.0


def test_ellipticity_bounds_needs_enough_samples():
    with pytest.raises(SpecViolation):
        ellipticity_bounds(Anisotropy.isotropic(), 100)


def test_dual_eval_is_one_on_wulff_boundary(anisotropy):
    for point in wulff_boundary(anisotropy, 64):
        assert dual_eval(anisotropy, point) == pytest.approx(1.0, abs=1e-8)


def test_rotated_anisotropy_is_equivariant(anisotropy):
    omega = 0.37
    R = np.array([[np.cos(omega), -np.sin(omega)], [np.sin(omega), np.cos(omega)]])
    rotated = anisotropy.rotated(omega)
    for v in random_vectors(20):
        assert polar_eval(rotated, R @ v) == pytest.approx(polar_eval(anisotropy, v), rel=1e-12)
        assert np.allclose(polar_grad(rotated, R @ v), R @ polar_grad(anisotropy, v), atol=1e-12)


def test_anisotropy_from_dict_round_trip(anisotropy):
    assert Anisotropy.from_dict(anisotropy.to_dict()) == anisotropy


def test_anisotropy_validation():
    with pytest.raises(ConfigValidationError) as excinfo:
        Anisotropy.from_dict({"family": "fourier", "a": 0.1})
    assert excinfo.value.field == "k"
    with pytest.raises(ConfigValidationError):
        Anisotropy.from_dict({"family": "hexagonal"})
    with pytest.raises(ConfigValidationError):
        Anisotropy.elliptic([[1, 2], [2, 1]])
    with pytest.raises(ConfigValidationError):
        Anisotropy.fourier(1.5, 3)
    with pytest.raises(NotElliptic):
        Anisotropy.from_dict({"family": "fourier", "a": 0.2, "k": 3, "theta0": 0.0})


def test_wulff_boundary_of_circle():
    points = wulff_boundary(Anisotropy.isotropic(), 4)
    assert np.allclose(points, [[1, 0], [0, 1], [-1, 0], [0, -1]], atol=1e-15)


def test_wulff_boundary_is_convex(anisotropy):
    assert polygon_is_convex(wulff_boundary(anisotropy, 720))


def test_wulff_boundary_rejects_bad_input():
    with pytest.raises(SpecViolation):
        wulff_boundary(Anisotropy.isotropic(), 3)
    with pytest.raises(NotElliptic):
        wulff_boundary(Anisotropy.fourier(0.2, 3, 0.0), 16)


def test_wulff_tool():
    tool = WulffBoundary()
    output = tool.fn(anisotropy={"family": "elliptic", "A": [[1, 0], [0, 2]]}, n=8)
    assert len(output["points"]) == 8
    assert output["convex"]

    result = tool.execute(WorkflowContext(), anisotropy={"family": "isotropic"}, n=2)
    assert not result.success
    assert result.error_type == "ConfigValidationError"
