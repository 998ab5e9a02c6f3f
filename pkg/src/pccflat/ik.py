"""Inverse kinematics: curvatures matching a desired planar tip position.

A damped Newton iteration on the tip residual, with backtracking on the
residual norm. The two-segment arm has a two-by-two square system with an
analytic Jacobian, so Newton converges in a handful of steps from any
reasonable seed. Along a trajectory the caller warm-starts each solve from
the previous solution, which also pins the concavity branch chosen at the
first sample.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularityError, UnreachableTargetError
from .kinematics import _as_finite_array, _tip2, _tip_jac2, tip_position

# Jacobian condition number (Frobenius sense, ||J||_F^2 / |det J|) beyond
# which an iterate is treated as singular (straight-arm / branch-merge
# boundary).
_COND_LIMIT = 1e12

# Smallest backtracking step before the iteration is declared stalled.
_MIN_STEP_SCALE = 1.0 / 64.0


class ConcavityBranch(enum.Enum):
    """Which way the arm curls; fixes the IK solution family."""

    COUNTERCLOCKWISE = "counterclockwise"
    CLOCKWISE = "clockwise"


def seed_for_branch(branch):
    """Initial IK guess for a branch: both segments curled a quarter turn."""
    if branch is ConcavityBranch.COUNTERCLOCKWISE:
        return np.array([np.pi / 2.0, np.pi / 2.0])
    if branch is ConcavityBranch.CLOCKWISE:
        return np.array([-np.pi / 2.0, -np.pi / 2.0])
    raise ValueError(f"unknown branch {branch!r}")


@dataclass(frozen=True)
class IkProblem:
    """Target tip position with solver seed and stopping controls."""

    target: np.ndarray
    seed: np.ndarray
    tolerance: float = 1e-10
    max_iterations: int = 50

    def __post_init__(self):
        target = _as_finite_array(self.target, "target").reshape(2)
        seed = _as_finite_array(self.seed, "seed").reshape(-1)
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "seed", seed)


def tip_residual(q, r_target, params):
    """Remaining tip error d(q) = r_target - tip_position(q)."""
    r_target = _as_finite_array(r_target, "r_target").reshape(2)
    return r_target - tip_position(q, params)


def solve_ik(problem, params):
    """Solve tip_position(q) = target by damped Newton iteration.

    Returns the curvature vector whose tip residual norm is at or below the
    problem tolerance. Raises UnreachableTargetError when the iteration
    cannot reach the tolerance (carrying the best residual norm seen) and
    SingularityError when an iterate's Jacobian is too ill-conditioned to
    invert, which happens at the straight-arm boundary where the two
    concavity branches merge.
    """
    if params.n != 2:
        raise ValueError("solve_ik supports the two-segment arm only")
    target = problem.target
    lengths = params.lengths

    reach = float(np.sum(lengths))
    dist = float(np.hypot(target[0], target[1]))
    if dist > reach:
        raise UnreachableTargetError(
            f"target {target.tolist()} lies {dist - reach:.3e} m outside the "
            f"reachable radius {reach:.3e} m",
            best_residual=dist - reach,
        )

    rx_t, ry_t = float(target[0]), float(target[1])
    l0, l1 = float(lengths[0]), float(lengths[1])
    q0, q1 = float(problem.seed[0]), float(problem.seed[1])

    rx, ry, j00, j01, j10, j11 = _tip_jac2(q0, q1, l0, l1)
    dx, dy = rx_t - rx, ry_t - ry
    res_norm = math.hypot(dx, dy)
    best_norm = res_norm

    for _ in range(problem.max_iterations):
        if res_norm <= problem.tolerance:
            return np.array([q0, q1])
        det = j00 * j11 - j01 * j10
        frob2 = j00 * j00 + j01 * j01 + j10 * j10 + j11 * j11
        if abs(det) * _COND_LIMIT <= frob2:
            raise SingularityError(
                f"tip Jacobian is singular at iterate q=[{q0}, {q1}]")
        step0 = (j11 * dx - j01 * dy) / det
        step1 = (j00 * dy - j10 * dx) / det

        scale = 1.0
        while True:
            q0_try = q0 + scale * step0
            q1_try = q1 + scale * step1
            tx, ty = _tip2(q0_try, q1_try, l0, l1)
            if math.hypot(rx_t - tx, ry_t - ty) < res_norm:
                break
            scale *= 0.5
            if scale < _MIN_STEP_SCALE:
                raise UnreachableTargetError(
                    f"IK stalled at residual {res_norm:.3e} m for target "
                    f"{target.tolist()}",
                    best_residual=best_norm,
                )
        q0, q1 = q0_try, q1_try
        rx, ry, j00, j01, j10, j11 = _tip_jac2(q0, q1, l0, l1)
        dx, dy = rx_t - rx, ry_t - ry
        res_norm = math.hypot(dx, dy)
        best_norm = min(best_norm, res_norm)

    if res_norm <= problem.tolerance:
        return np.array([q0, q1])
    raise UnreachableTargetError(
        f"IK did not converge within {problem.max_iterations} iterations for "
        f"target {target.tolist()} (best residual {best_norm:.3e} m)",
        best_residual=best_norm,
    )
