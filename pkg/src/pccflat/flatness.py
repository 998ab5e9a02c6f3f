"""Algebraic state/input maps from the flat output (the curvature vector).

With one bidirectional actuator per segment the arm's dynamics are
differentially flat in q: the state is just (y, ydot) stacked, and the
input follows from the manipulator equation evaluated along the output
trajectory. No differential equation is solved anywhere in this module;
derivatives of y must be supplied by the caller (exact ones for analytic
references, finite differences for sampled plans).
"""

from dataclasses import dataclass

import numpy as np

from .dynamics import _inertia_and_partials, _coriolis_from_partials
from .kinematics import ConfigurationState, _as_finite_array


@dataclass(frozen=True)
class FlatOutputPoint:
    """One sample of the flat output and its first two derivatives."""

    y: np.ndarray
    y_dot: np.ndarray
    y_ddot: np.ndarray

    def __post_init__(self):
        y = _as_finite_array(self.y, "y").reshape(-1)
        y_dot = _as_finite_array(self.y_dot, "y_dot").reshape(-1)
        y_ddot = _as_finite_array(self.y_ddot, "y_ddot").reshape(-1)
        if not (y.size == y_dot.size == y_ddot.size):
            raise ValueError("y, y_dot, y_ddot must share a length")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "y_dot", y_dot)
        object.__setattr__(self, "y_ddot", y_ddot)


def flat_state(point):
    """State realizing a flat-output sample: q = y, q_dot = y_dot."""
    return ConfigurationState(q=point.y.copy(), q_dot=point.y_dot.copy())


def flat_input(point, params):
    """Input realizing a flat-output sample.

    Evaluates u = (Jl^T)^-1 (B(y) yddot + C(y, ydot) ydot + K y + D ydot);
    with the identity calibration this is the generalized torque that makes
    the trajectory dynamically feasible.
    """
    y, y_dot, y_ddot = point.y, point.y_dot, point.y_ddot
    if y.size != params.n:
        raise ValueError(f"expected {params.n}-vector output, got {y.size}")
    B, dB = _inertia_and_partials(y, params)
    C = _coriolis_from_partials(dB, y_dot)
    torque = (
        B @ y_ddot
        + C @ y_dot
        + params.stiffness @ y
        + params.damping @ y_dot
    )
    # j_lambda is diagonal by construction, so the transpose solve is a
    # per-channel division.
    return torque / np.diag(params.j_lambda)
