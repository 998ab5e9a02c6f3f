"""Open-loop validation of planned trajectories.

A plan is only as good as the physics it claims to satisfy, so the planned
input schedule is replayed through the forward dynamics with an adaptive
Runge-Kutta 4(5) integrator (Dormand-Prince pair, dense output) and the
resulting tip trace is compared against the reference path.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .dynamics import _forward_dynamics
from .errors import IntegrationError
from .kinematics import _as_finite_array, tip_position

DEFAULT_RTOL = 1e-8
DEFAULT_ATOL = 1e-10


@dataclass(frozen=True)
class RolloutResult:
    """Integrated state and tip traces with pointwise tracking errors.

    tip_errors[t] = ||tip_ref[t] - tips[t]|| and e_avg is its mean over
    the rollout.
    """

    times: np.ndarray
    q: np.ndarray
    q_dot: np.ndarray
    tips: np.ndarray
    tip_ref: np.ndarray
    tip_errors: np.ndarray
    e_avg: float


def input_schedule(traj, hold="linear"):
    """Continuous-time input u(t) from trajectory samples.

    ``linear`` interpolates between samples, which keeps the integrator's
    right-hand side continuous; ``zoh`` holds each sample until the next.
    Outside the sampled span the boundary sample is held.
    """
    u = traj.u
    dt = traj.dt
    last = u.shape[0] - 1
    if hold == "linear":
        slopes = np.diff(u, axis=0) / dt

        def u_of_t(t):
            if t <= 0.0:
                return u[0]
            idx = int(t / dt)
            if idx >= last:
                return u[last]
            return u[idx] + (t - idx * dt) * slopes[idx]

    elif hold == "zoh":

        def u_of_t(t):
            idx = int(t / dt)
            if idx < 0:
                return u[0]
            return u[min(idx, last)]

    else:
        raise ValueError(f"unknown hold mode {hold!r} (expected 'linear' or 'zoh')")
    return u_of_t


def integrate(x0, u_of_t, t_span, params, t_eval=None,
              rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """Integrate xdot = [q_dot; forward_dynamics(x, u(t))] over t_span.

    Returns (times, states) with one 2n state row per output time; output
    times are t_eval when given (evaluated on the solver's dense output),
    the solver's own steps otherwise. Step-size failure raises
    IntegrationError carrying the last time reached.
    """
    n = params.n
    x0_vec = _as_finite_array(x0.as_vector(), "x0")

    def rhs(t, x):
        return np.concatenate((x[n:], _forward_dynamics(x[:n], x[n:], u_of_t(t), params)))

    sol = solve_ivp(rhs, t_span, x0_vec, method="RK45", t_eval=t_eval,
                    rtol=rtol, atol=atol)
    if not sol.success:
        t_fail = float(sol.t[-1]) if sol.t.size else float(t_span[0])
        raise IntegrationError(
            f"integration failed at t={t_fail:.6g} s: {sol.message}", t_fail=t_fail)
    return sol.t, sol.y.T


def rollout_open_loop(traj, x0, path, params, hold="linear",
                      rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """Replay a planned input schedule open loop and score tip tracking."""
    if traj.dt != path.dt:
        raise ValueError(f"trajectory dt {traj.dt!r} != path dt {path.dt!r}")
    if traj.q.shape[0] != path.samples.shape[0]:
        raise ValueError(
            f"trajectory has {traj.q.shape[0]} samples, path has {path.samples.shape[0]}")

    times, states = integrate(
        x0, input_schedule(traj, hold), (0.0, path.total_time), params,
        t_eval=traj.times, rtol=rtol, atol=atol)

    n = params.n
    tips = np.empty((times.size, 2))
    for t in range(times.size):
        tips[t] = tip_position(states[t, :n], params)
    errors = np.linalg.norm(path.samples - tips, axis=1)
    return RolloutResult(
        times=times,
        q=states[:, :n],
        q_dot=states[:, n:],
        tips=tips,
        tip_ref=path.samples.copy(),
        tip_errors=errors,
        e_avg=float(np.mean(errors)),
    )
