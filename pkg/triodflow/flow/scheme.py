"""Semi-implicit time stepping of the special anisotropic flow of a triod.

Each step freezes the coefficients psi(theta) / |u_x|^2 at the old state and
treats the second difference implicitly, which leaves one tridiagonal
system per curve. The systems are linear in the junction position q, so each
curve is solved once for its particular part w and its response g to a unit
junction value; the interior after the step is w + g q. The Herring
condition then closes the step as two equations in q, solved by Newton.
"""
import logging

import numpy as np
from scipy.linalg import LinAlgError, solve_banded

from ..anisotropy import Anisotropy, ellipticity_bounds, phi_theta, polar_grad_theta
from ..diagnostics import compute_record
from ..errors import Degenerate, GeometricObstruction, IoError, SolverFailure
from ..network import DiscreteCurve, TriodNetwork, admissibility_report, frenet
from ..network.curve import perp
from ..reparam import to_constant_speed
from .config import FlowConfig, FlowState, StopReason

logger = logging.getLogger(__name__)

STALL_LIMIT = 5
MAX_HALVINGS = 30
MAX_RETRIES = 20
# refresh the junction Jacobian when a step reduces |HC| by less than this
CHORD_CONTRACTION = 0.25


def cfl_dt(s: FlowState, a: Anisotropy, cfl: float, delta_reg=1e-8, samples=3600, M=None):
    """Parabolic mesh constraint cfl * min (|u_x| / N)^2 / max psi.

    Pass ``M`` to reuse an upper ellipticity bound already computed.
    """
    if M is None:
        _, M = ellipticity_bounds(a, samples)
    h2 = min(float(np.min((frenet(c, delta_reg).speed / c.N) ** 2)) for c in s.net.curves)
    return cfl * h2 / M


class _CurveSystem:
    """Implicit system of one curve, reduced to w + g q on the interior."""

    def __init__(self, curve: DiscreteCurve, endpoint, a: Anisotropy, dt, delta_reg):
        data = frenet(curve, delta_reg)
        phi, _, phi2 = phi_theta(a, data.theta)
        N = curve.N
        r = dt * (phi * (phi + phi2) / data.speed ** 2)[1:-1] * N * N
        n = N - 1
        ab = np.zeros((3, n))
        ab[0, 1:] = -r[:-1]
        ab[1, :] = 1.0 + 2.0 * r
        ab[2, :-1] = -r[1:]
        rhs = np.zeros((n, 3))
        rhs[:, :2] = curve.nodes[1:-1]
        rhs[-1, :2] += r[-1] * np.asarray(endpoint)
        rhs[0, 2] = r[0]
        try:
            sol = solve_banded((1, 1), ab, rhs, check_finite=False)
        except (LinAlgError, ValueError) as err:
            raise SolverFailure(f"tridiagonal solve failed: {err}") from err
        if not np.all(np.isfinite(sol)):
            raise SolverFailure("tridiagonal solve produced non-finite values")
        self.w = sol[:, :2]
        self.g = sol[:, 2]
        self.endpoint = np.asarray(endpoint)

    def junction_direction(self, q):
        u1 = self.w[0] + self.g[0] * q
        u2 = self.w[1] + self.g[1] * q
        return -3.0 * q + 4.0 * u1 - u2

    def nodes(self, q):
        interior = self.w + self.g[:, None] * q[None, :]
        return np.vstack([q[None, :], interior, self.endpoint[None, :]])


def _herring(systems, a, q, floor):
    d = np.array([s.junction_direction(q) for s in systems])
    norm = np.hypot(d[:, 0], d[:, 1])
    if norm.min() < floor:
        raise Degenerate("junction tangent vanished during the Newton solve")
    nu = perp(d / norm[:, None])
    return polar_grad_theta(a, np.arctan2(nu[:, 1], nu[:, 0])).sum(axis=0)


def _jacobian(systems, a, q, r, h, floor):
    J = np.empty((2, 2))
    for j in range(2):
        e = np.zeros(2)
        e[j] = h
        J[:, j] = (_herring(systems, a, q + e, floor) - r) / h
    return J


def _newton(systems, a, q, cfg: FlowConfig, diameter):
    """Damped Newton on the Herring residual.

    The finite-difference Jacobian is kept between iterations while each
    iteration cuts |HC| by at least CHORD_CONTRACTION.
    """
    floor = cfg.delta_reg / max(s.g.size + 1 for s in systems)
    h = cfg.fd_step * diameter
    r = _herring(systems, a, q, floor)
    norm = float(np.hypot(*r))
    best = norm
    stalled = 0
    J = None
    for it in range(1, cfg.newton_max_iter + 1):
        if norm <= cfg.newton_tol:
            return q, it - 1
        if J is None:
            J = _jacobian(systems, a, q, r, h, floor)
        try:
            dq = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError as err:
            raise SolverFailure(f"singular junction Jacobian: {err}") from err
        for _ in range(MAX_HALVINGS):
            trial = q + dq
            r_trial = _herring(systems, a, trial, floor)
            if np.hypot(*r_trial) < norm:
                break
            dq = 0.5 * dq
        previous = norm
        q, r, norm = trial, r_trial, float(np.hypot(*r_trial))
        if norm > CHORD_CONTRACTION * previous:
            J = None
        logger.debug("Newton iteration %d: |HC| = %.3e", it, norm)
        if norm < best:
            best, stalled = norm, 0
        else:
            stalled += 1
            if stalled >= STALL_LIMIT:
                raise SolverFailure(f"Newton stalled at |HC| = {norm:.3e}")
    if norm <= cfg.newton_tol:
        return q, cfg.newton_max_iter
    raise SolverFailure(f"Newton did not reach {cfg.newton_tol:g} in {cfg.newton_max_iter} iterations (|HC| = {norm:.3e})")


def resample(net: TriodNetwork, N, delta_reg=1e-8):
    return net.with_curves(to_constant_speed(c, N, kind="cubic", delta_reg=delta_reg) for c in net.curves)


def step(s: FlowState, a: Anisotropy, cfg: FlowConfig, dt=None) -> FlowState:
    net = s.net
    resampled = bool(cfg.reparam_every) and s.step_index > 0 and s.step_index % cfg.reparam_every == 0
    if resampled:
        logger.debug("Resampling to constant speed before step %d", s.step_index + 1)
        net = resample(net, cfg.N, cfg.delta_reg)
    if dt is None:
        dt = cfl_dt(FlowState(net, s.t, s.step_index), a, cfg.cfl, cfg.delta_reg, cfg.ellipticity_samples)
    logger.debug("Step %d: t=%.6g dt=%.3e", s.step_index + 1, s.t, dt)

    systems = [_CurveSystem(c, net.endpoints[i], a, dt, cfg.delta_reg) for i, c in enumerate(net.curves)]
    q, iterations = _newton(systems, a, net.junction, cfg, net.diameter)
    new = TriodNetwork(tuple(DiscreteCurve(sys.nodes(q)) for sys in systems), net.endpoints)
    return FlowState(new, s.t + dt, s.step_index + 1, resampled=resampled, newton_iterations=iterations)


def _advance(state: FlowState, a: Anisotropy, cfg: FlowConfig, dt):
    """One accepted step, halving dt up to MAX_RETRIES times while the junction solve fails."""
    for attempt in range(MAX_RETRIES + 1):
        try:
            return step(state, a, cfg, dt), dt
        except (SolverFailure, Degenerate) as err:
            if attempt == MAX_RETRIES:
                raise
            logger.debug("Step %d failed at dt=%.3e (%s); retrying with dt/2", state.step_index + 1, dt, err)
            dt *= 0.5


def run(net0: TriodNetwork, a: Anisotropy, cfg: FlowConfig, sink=None):
    """Integrate until the time horizon or one of the stopping criteria.

    ``sink(state, record)`` is called once per accepted step, in order.
    Returns (final state, StopReason).
    """
    _, M = ellipticity_bounds(a, cfg.ellipticity_samples)
    if any(c.N != cfg.N for c in net0.curves):
        net0 = resample(net0, cfg.N, cfg.delta_reg)

    report = admissibility_report(net0, a, cfg.admissibility_tol, cfg.a0_floor, cfg.delta_reg)
    if not report.passed:
        if cfg.strict:
            raise GeometricObstruction("initial network is not admissible", report=report)
        logger.warning("Initial network is not admissible at tol %g; continuing\n%s", cfg.admissibility_tol, report.format())
    projection = report.herring > cfg.newton_tol
    if projection:
        logger.warning("Initial Herring residual %.3e will be projected out by the first step", report.herring)

    state = FlowState(net0)
    logger.info("Starting run: N=%d t_max=%g family=%s", cfg.N, cfg.t_max, a.family)
    while True:
        try:
            dt = cfl_dt(state, a, cfg.cfl, cfg.delta_reg, M=M)
            state, dt = _advance(state, a, cfg, min(dt, cfg.t_max - state.t))
            record = compute_record(
                state.net, a, state.t, state.step_index, dt,
                cfg.delta_reg, cfg.a0_floor,
                resampled=state.resampled,
                initial_projection=projection and state.step_index == 1,
            )
        except SolverFailure as err:
            stop = StopReason.solver_failure(err.detail)
            break
        except Degenerate as err:
            stop = StopReason.solver_failure(str(err))
            break
        if sink is not None:
            try:
                sink(state, record)
            except (IoError, OSError) as err:
                logger.error("Writing step %d failed: %s", state.step_index, err)
                stop = StopReason.solver_failure("io")
                break

        short = [i for i, L in enumerate(record.L) if L <= cfg.L_min]
        if short:
            stop = StopReason.length_vanishing(short[0] + 1)
            break
        if record.kphi_l2sq >= cfg.K_max:
            stop = StopReason.curvature_blowup()
            break
        if state.t >= cfg.t_max * (1.0 - 1e-12):
            stop = StopReason.max_time()
            break

    logger.info("Run stopped at t=%.6g after %d steps: %s", state.t, state.step_index, stop)
    return state, stop
