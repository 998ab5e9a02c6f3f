"""Kinematic plans to dynamically feasible trajectories.

The pipeline: sample a tip path from a cubic spline, invert the kinematics
at every sample (warm-started along the path), lift curvature samples to
rates and accelerations by backward finite differences, and evaluate the
flatness input map at each sample. The loop is sequential by nature (warm
starts) and its per-iteration wall time is recorded, since planning faster
than the sample period is the point.
"""

import time
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import SingularityError, UnreachableTargetError
from .flatness import FlatOutputPoint, flat_input
from .ik import ConcavityBranch, IkProblem, seed_for_branch, solve_ik
from .kinematics import _as_finite_array


def _check_grid(dt, total_time):
    if dt <= 0.0 or total_time <= 0.0:
        raise ValueError("dt and total_time must be positive")
    steps = total_time / dt
    n_steps = int(round(steps))
    if n_steps < 2 or abs(steps - n_steps) > 1e-6 * max(1.0, steps):
        raise ValueError(
            f"total_time {total_time!r} must be an integer multiple (>= 2) of dt {dt!r}")
    return n_steps


@dataclass(frozen=True)
class TipPath:
    """Uniformly sampled planar tip targets: samples[t] is wanted at t*dt."""

    samples: np.ndarray
    dt: float
    total_time: float

    def __post_init__(self):
        samples = _as_finite_array(self.samples, "samples")
        if samples.ndim != 2 or samples.shape[1] != 2:
            raise ValueError("samples must have shape (T+1, 2)")
        n_steps = _check_grid(self.dt, self.total_time)
        if samples.shape[0] != n_steps + 1:
            raise ValueError(
                f"expected {n_steps + 1} samples for total_time/dt, got {samples.shape[0]}")
        object.__setattr__(self, "samples", samples)

    @property
    def times(self):
        return self.dt * np.arange(self.samples.shape[0])


@dataclass(frozen=True)
class SplineSpec:
    """Control points and timing for a spline-generated tip path."""

    control_points: np.ndarray
    branch: ConcavityBranch
    dt: float
    total_time: float

    def __post_init__(self):
        pts = _as_finite_array(self.control_points, "control_points")
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
            raise ValueError("control_points must have shape (>=2, 2)")
        if not isinstance(self.branch, ConcavityBranch):
            raise ValueError(f"branch must be a ConcavityBranch, got {self.branch!r}")
        _check_grid(self.dt, self.total_time)
        object.__setattr__(self, "control_points", pts)


@dataclass(frozen=True)
class FlatTrajectory:
    """Synchronized curvature, rate, acceleration and input sequences.

    iteration_times holds the planning wall time of each loop iteration
    (seconds); it is diagnostic, not part of the trajectory proper.
    """

    times: np.ndarray
    q: np.ndarray
    q_dot: np.ndarray
    q_ddot: np.ndarray
    u: np.ndarray
    dt: float
    iteration_times: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        times = _as_finite_array(self.times, "times").reshape(-1)
        names = ("q", "q_dot", "q_ddot", "u")
        arrays = [_as_finite_array(getattr(self, a), a) for a in names]
        for name, arr in zip(names, arrays):
            if arr.ndim != 2 or arr.shape[0] != times.size:
                raise ValueError(f"{name} must have one row per timestep")
            object.__setattr__(self, name, arr)
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        object.__setattr__(self, "times", times)

    @property
    def n(self):
        return self.q.shape[1]


def sample_spline(spec):
    """Sample a natural cubic spline through the control points.

    The spline is parameterized uniformly by control-point index and
    sampled at evenly spaced parameter values, total_time/dt + 1 of them.
    """
    n_steps = _check_grid(spec.dt, spec.total_time)
    pts = spec.control_points
    if pts.shape[0] == 2:
        # Degenerate interpolation: a natural cubic through two points is
        # the straight line between them.
        frac = np.linspace(0.0, 1.0, n_steps + 1)[:, None]
        samples = (1.0 - frac) * pts[0] + frac * pts[1]
    else:
        spline = CubicSpline(np.arange(pts.shape[0]), pts, axis=0, bc_type="natural")
        samples = spline(np.linspace(0.0, pts.shape[0] - 1.0, n_steps + 1))
    return TipPath(samples=samples, dt=spec.dt, total_time=spec.total_time)


def finite_diff(q_seq, dt):
    """Backward-difference rates and accelerations of a sample sequence.

    Sample 0 is taken to start at rest (zero rate and acceleration), so
    qd[t] = (q[t] - q[t-1])/dt and qdd[t] = (qd[t] - qd[t-1])/dt for t >= 1.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    q = _as_finite_array(q_seq, "q_seq")
    if q.ndim == 1:
        q = q[:, None]
    if q.shape[0] < 1:
        raise ValueError("need at least one sample")
    q_dot = np.zeros_like(q)
    q_ddot = np.zeros_like(q)
    q_dot[1:] = (q[1:] - q[:-1]) / dt
    q_ddot[1:] = (q_dot[1:] - q_dot[:-1]) / dt
    return q_dot, q_ddot


def generate(path, branch, params, ik_tolerance=1e-10, max_iterations=50):
    """Plan a dynamically feasible trajectory along a tip path.

    Per sample: inverse kinematics warm-started from the previous solution
    (the branch seed at t = 0), backward finite differences for the rates,
    and the flatness map for the input. IK failures abort the plan and are
    re-raised tagged with the offending timestep.
    """
    n = params.n
    samples = path.samples
    count = samples.shape[0]
    dt = path.dt

    q = np.empty((count, n))
    q_dot = np.zeros((count, n))
    q_ddot = np.zeros((count, n))
    u = np.empty((count, n))
    iter_times = np.empty(count)

    q_prev = seed_for_branch(branch)
    qd_prev = np.zeros(n)
    clock = time.perf_counter

    for t in range(count):
        tic = clock()
        try:
            q_t = solve_ik(
                IkProblem(
                    target=samples[t],
                    seed=q_prev,
                    tolerance=ik_tolerance,
                    max_iterations=max_iterations,
                ),
                params,
            )
        except UnreachableTargetError as exc:
            raise UnreachableTargetError(
                f"timestep {t}: {exc}", best_residual=exc.best_residual,
                timestep=t) from exc
        except SingularityError as exc:
            raise SingularityError(f"timestep {t}: {exc}", timestep=t) from exc

        if t == 0:
            qd_t = np.zeros(n)
            qdd_t = np.zeros(n)
        else:
            qd_t = (q_t - q_prev) / dt
            qdd_t = (qd_t - qd_prev) / dt
        u_t = flat_input(FlatOutputPoint(q_t, qd_t, qdd_t), params)
        iter_times[t] = clock() - tic

        q[t] = q_t
        q_dot[t] = qd_t
        q_ddot[t] = qdd_t
        u[t] = u_t
        q_prev, qd_prev = q_t, qd_t

    return FlatTrajectory(
        times=path.times,
        q=q,
        q_dot=q_dot,
        q_ddot=q_ddot,
        u=u,
        dt=dt,
        iteration_times=iter_times,
    )
