"""Configuration-space dynamics of the arm: B(q) qdd + C(q, qd) qd + K q + D qd.

The inertia is assembled directly from the lumped-mass Jacobians in
curvature space; an independent route projecting the rigid RPPR chain's
joint-space inertia through the constraint Jacobian is kept for
cross-checking. Coriolis terms come from Christoffel symbols of the exact
inertia partials, which makes Bdot - 2C skew-symmetric by construction.
Gravity is identically zero: the arm moves in a horizontal plane.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import SingularDynamicsError
from .kinematics import _arc_terms_scalar, _as_finite_array
from .rigid import (
    _mass_point_states,
    joint_map,
    joint_map_jacobian,
    rigid_inertia,
)


@dataclass(frozen=True)
class DynamicsTerms:
    """Inertia B, Coriolis C, and the stacked partials dB_dq[k] = dB/dq_k."""

    B: np.ndarray
    C: np.ndarray
    dB_dq: np.ndarray


def _check_pair(q, q_dot, params):
    q = _as_finite_array(q, "q").reshape(-1)
    q_dot = _as_finite_array(q_dot, "q_dot").reshape(-1)
    if q.size != params.n or q_dot.size != params.n:
        raise ValueError(f"expected {params.n}-vectors, got {q.size} and {q_dot.size}")
    return q, q_dot


def _inertia_and_partials_generic(q, params):
    _, jac, hess = _mass_point_states(q, params.lengths)
    m = params.masses
    B = np.einsum("s,sxi,sxj->ij", m, jac, jac)
    half = np.einsum("s,sxik,sxj->kij", m, hess, jac)
    return B, half + half.transpose(0, 2, 1)


def _inertia_and_partials2(q0, q1, l0, l1, m0, m1):
    """Scalar two-segment evaluation of B and dB/dq (hot path).

    Same mass-point construction as the generic route, written out: a/b are
    the Jacobian columns of the two chord-midpoint masses, and the capital
    vectors are their partials. Terms that vanish identically (the
    perpendicular dot products and dB11/dq0) are dropped.
    """
    s0, v0, ds0, dv0, dds0, ddv0 = _arc_terms_scalar(q0)
    s1, v1, ds1, dv1, dds1, ddv1 = _arc_terms_scalar(q1)
    c, sn = math.cos(q0), math.sin(q0)

    w1x = c * l1 * s1 - sn * l1 * v1
    w1y = sn * l1 * s1 + c * l1 * v1
    td0x, td0y = l0 * ds0, l0 * dv0
    tdd0x, tdd0y = l0 * dds0, l0 * ddv0
    td1x = c * l1 * ds1 - sn * l1 * dv1
    td1y = sn * l1 * ds1 + c * l1 * dv1
    tdd1x = c * l1 * dds1 - sn * l1 * ddv1
    tdd1y = sn * l1 * dds1 + c * l1 * ddv1

    # Mass 0 (chord midpoint of segment 0): single Jacobian column td0/2.
    a0x, a0y = 0.5 * td0x, 0.5 * td0y
    # Mass 1 columns: b0 = S w1/2 + td0 (rotation of the distal half-chord
    # plus segment 0's shape term), b1 = td1/2.
    b0x, b0y = -0.5 * w1y + td0x, 0.5 * w1x + td0y
    b1x, b1y = 0.5 * td1x, 0.5 * td1y
    # Partials of the columns.
    h0x, h0y = -0.5 * w1x + tdd0x, -0.5 * w1y + tdd0y   # d b0 / d q0
    sx, sy = -b1y, b1x                                  # d b0/d q1 = d b1/d q0
    d1x, d1y = 0.5 * tdd1x, 0.5 * tdd1y                 # d b1 / d q1

    B00 = m0 * (a0x * a0x + a0y * a0y) + m1 * (b0x * b0x + b0y * b0y)
    B01 = m1 * (b0x * b1x + b0y * b1y)
    B11 = m1 * (b1x * b1x + b1y * b1y)

    dB0_00 = 0.5 * m0 * (td0x * tdd0x + td0y * tdd0y) \
        + 2.0 * m1 * (h0x * b0x + h0y * b0y)
    dB0_01 = m1 * (h0x * b1x + h0y * b1y + b0x * sx + b0y * sy)
    dB1_00 = 2.0 * m1 * (sx * b0x + sy * b0y)
    dB1_01 = m1 * (b0x * d1x + b0y * d1y)
    dB1_11 = 2.0 * m1 * (b1x * d1x + b1y * d1y)

    B = np.array([[B00, B01], [B01, B11]])
    dB = np.array([[[dB0_00, dB0_01], [dB0_01, 0.0]],
                   [[dB1_00, dB1_01], [dB1_01, dB1_11]]])
    return B, dB


def _inertia_and_partials(q, params):
    if params.n == 2:
        l0, l1 = params.lengths
        m0, m1 = params.masses
        return _inertia_and_partials2(q[0], q[1], l0, l1, m0, m1)
    return _inertia_and_partials_generic(q, params)


def inertia(q, params):
    """Inertia matrix B(q) from the mass-point Jacobians, (n x n)."""
    q = _as_finite_array(q, "q").reshape(-1)
    if q.size != params.n:
        raise ValueError(f"expected {params.n} curvatures, got {q.size}")
    return _inertia_and_partials(q, params)[0]


def inertia_projected(q, params):
    """B(q) via the rigid-chain route: Jm^T B_xi(m(q)) Jm.

    Must agree with :func:`inertia`; kept as an independent construction
    for validation.
    """
    q = _as_finite_array(q, "q").reshape(-1)
    if q.size != params.n:
        raise ValueError(f"expected {params.n} curvatures, got {q.size}")
    xi = joint_map(q, params).xi
    jac = joint_map_jacobian(q, params)
    return jac.T @ rigid_inertia(xi, params) @ jac


def inertia_partials(q, params):
    """Exact partials of the inertia, stacked as (n, n, n) with [k] = dB/dq_k."""
    q = _as_finite_array(q, "q").reshape(-1)
    if q.size != params.n:
        raise ValueError(f"expected {params.n} curvatures, got {q.size}")
    _, partials = _inertia_and_partials(q, params)
    return partials


def coriolis(q, q_dot, params):
    """Coriolis matrix from Christoffel symbols of the inertia partials."""
    q, q_dot = _check_pair(q, q_dot, params)
    _, dB = _inertia_and_partials(q, params)
    return _coriolis_from_partials(dB, q_dot)


def _coriolis_from_partials(dB, q_dot):
    # C_ij = 1/2 sum_k (dB_ij/dq_k + dB_ik/dq_j - dB_jk/dq_i) qd_k; with
    # G_ab = sum_k dB[a][b, k] qd_k this collapses to (Bdot + G^T - G)/2.
    b_dot = np.tensordot(q_dot, dB, axes=(0, 0))
    g = dB @ q_dot
    return 0.5 * (b_dot + g.T - g)


def dynamics_terms(q, q_dot, params):
    """B, C and dB/dq in one pass (shared geometry evaluation)."""
    q, q_dot = _check_pair(q, q_dot, params)
    B, dB = _inertia_and_partials(q, params)
    return DynamicsTerms(B=B, C=_coriolis_from_partials(dB, q_dot), dB_dq=dB)


def _forward_dynamics(q, q_dot, u, params):
    """qdd from the manipulator equation; raw-array hot path."""
    B, dB = _inertia_and_partials(q, params)
    C = _coriolis_from_partials(dB, q_dot)
    rhs = (
        params.j_lambda.T @ u
        - C @ q_dot
        - params.stiffness @ q
        - params.damping @ q_dot
    )
    if params.n == 2:
        # Closed-form SPD solve with an explicit Sylvester check.
        b00, b01, b11 = B[0, 0], B[0, 1], B[1, 1]
        det = b00 * b11 - b01 * b01
        if b00 <= 0.0 or det <= 0.0:
            raise SingularDynamicsError(f"inertia matrix is not SPD at q={q!r}")
        return np.array([
            (b11 * rhs[0] - b01 * rhs[1]) / det,
            (b00 * rhs[1] - b01 * rhs[0]) / det,
        ])
    try:
        return cho_solve(cho_factor(B, lower=True), rhs)
    except LinAlgError as exc:
        raise SingularDynamicsError(
            f"inertia matrix is not SPD at q={q!r}: {exc}") from exc


def forward_dynamics(state, u, params):
    """Curvature accelerations under input u (generalized torques).

    Solves B(q) qdd = Jl^T u - C(q, qd) qd - K q - D qd with an SPD
    factorization; a failed factorization raises SingularDynamicsError
    rather than regularizing silently.
    """
    u = _as_finite_array(u, "u").reshape(-1)
    if u.size != params.n:
        raise ValueError(f"expected {params.n} inputs, got {u.size}")
    return _forward_dynamics(state.q, state.q_dot, u, params)


def mechanical_energy(q, q_dot, params):
    """Kinetic plus elastic energy, the storage function for passivity."""
    q, q_dot = _check_pair(q, q_dot, params)
    B = inertia(q, params)
    return 0.5 * q_dot @ B @ q_dot + 0.5 * q @ params.stiffness @ q
