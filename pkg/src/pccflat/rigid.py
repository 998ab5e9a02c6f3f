"""Constrained rigid-chain equivalent of the constant-curvature arm.

Each arc segment is realized as a rotate/extend/extend/rotate (RPPR) chain:
rotate by q/2, slide half the chord, slide the other half, rotate by q/2.
Slaving the four joints to the single curvature q keeps the rigid chain's
lumped masses (one per segment, at the chord midpoint between the two
prismatic joints) moving exactly with the arc geometry. The mapping, its
Jacobian and Jacobian rate, and the mass-point geometry here feed the
projected dynamics assembly.
"""

from dataclasses import dataclass

import numpy as np

from .kinematics import (
    EPS_SING,
    _EPS_D1,
    _EPS_D2,
    PlanarTransform,
    _as_finite_array,
    _segment_frames,
)

# Joints per segment in the RPPR realization.
JOINTS_PER_SEGMENT = 4


@dataclass(frozen=True)
class RigidConfiguration:
    """Joint values of the RPPR chain: per segment [q/2, ext, ext, q/2].

    Rates are populated when the configuration is lifted from (q, q_dot,
    q_ddot) through the mapping's Jacobian.
    """

    xi: np.ndarray
    xi_dot: np.ndarray | None = None
    xi_ddot: np.ndarray | None = None

    def __post_init__(self):
        xi = _as_finite_array(self.xi, "xi").reshape(-1)
        if xi.size % JOINTS_PER_SEGMENT:
            raise ValueError("xi length must be a multiple of 4")
        object.__setattr__(self, "xi", xi)
        for name in ("xi_dot", "xi_ddot"):
            val = getattr(self, name)
            if val is not None:
                val = _as_finite_array(val, name).reshape(-1)
                if val.size != xi.size:
                    raise ValueError(f"{name} must match xi in length")
                object.__setattr__(self, name, val)

    @property
    def n_segments(self):
        return self.xi.size // JOINTS_PER_SEGMENT


def _half_chord_terms(q):
    """sin(q/2)/q and its first two derivatives, series-guarded.

    The half-chord of an arc with subtended angle q and unit arc length is
    sin(q/2)/q; each prismatic joint of a segment extends by L times this.
    The derivative quotients use the same widened guard radii as the arc
    terms in :mod:`pccflat.kinematics` (cancellation outpaces the series
    error well before EPS_SING).
    """
    a = np.asarray(q, dtype=float)
    a2 = a * a
    abs_a = np.abs(a)
    small0 = abs_a < EPS_SING
    small1 = abs_a < _EPS_D1
    small2 = abs_a < _EPS_D2

    x = np.where(small0, 1.0, a)
    sin_h, cos_h = np.sin(x / 2.0), np.cos(x / 2.0)
    x2, x3 = x * x, x * x * x

    h = np.where(small0, 0.5 - a2 / 48.0 + a2 * a2 / 3840.0, sin_h / x)
    dh = np.where(small1, a * (-1.0 / 24.0 + a2 * (1.0 / 960.0 - a2 / 107520.0)),
                  (x * cos_h - 2.0 * sin_h) / (2.0 * x2))
    ddh = np.where(
        small2,
        -1.0 / 24.0 + a2 * (1.0 / 320.0 - a2 / 21504.0),
        (4.0 * sin_h - 2.0 * x * cos_h - x2 / 2.0 * sin_h) / (2.0 * x3),
    )
    return h, dh, ddh


def _check_q(q, params):
    q = _as_finite_array(q, "q").reshape(-1)
    if q.size != params.n:
        raise ValueError(f"expected {params.n} curvatures, got {q.size}")
    return q


def joint_map(q, params, q_dot=None, q_ddot=None):
    """RPPR joint values realizing curvatures q; optionally lifted rates.

    With rates given, xi_dot = J q_dot and xi_ddot = Jdot q_dot + J q_ddot
    where J is the mapping's Jacobian.
    """
    q = _check_q(q, params)
    h, _, _ = _half_chord_terms(q)
    ext = params.lengths * h
    half = 0.5 * q
    xi = np.stack([half, ext, ext, half], axis=1).reshape(-1)

    xi_dot = xi_ddot = None
    if q_dot is not None:
        q_dot = _as_finite_array(q_dot, "q_dot").reshape(-1)
        jac = joint_map_jacobian(q, params)
        xi_dot = jac @ q_dot
        if q_ddot is not None:
            q_ddot = _as_finite_array(q_ddot, "q_ddot").reshape(-1)
            xi_ddot = joint_map_jacobian_rate(q, q_dot, params) @ q_dot + jac @ q_ddot
    elif q_ddot is not None:
        raise ValueError("q_ddot given without q_dot")
    return RigidConfiguration(xi, xi_dot, xi_ddot)


def joint_map_jacobian(q, params):
    """Block-diagonal (4n x n) Jacobian of the RPPR joint mapping."""
    q = _check_q(q, params)
    n = params.n
    _, dh, _ = _half_chord_terms(q)
    dext = params.lengths * dh
    jac = np.zeros((JOINTS_PER_SEGMENT * n, n))
    rows = JOINTS_PER_SEGMENT * np.arange(n)
    jac[rows, np.arange(n)] = 0.5
    jac[rows + 1, np.arange(n)] = dext
    jac[rows + 2, np.arange(n)] = dext
    jac[rows + 3, np.arange(n)] = 0.5
    return jac


def joint_map_jacobian_rate(q, q_dot, params):
    """Time derivative of joint_map_jacobian along (q, q_dot)."""
    q = _check_q(q, params)
    q_dot = _as_finite_array(q_dot, "q_dot").reshape(-1)
    if q_dot.size != params.n:
        raise ValueError(f"expected {params.n} rates, got {q_dot.size}")
    n = params.n
    _, _, ddh = _half_chord_terms(q)
    dext_rate = params.lengths * ddh * q_dot
    rate = np.zeros((JOINTS_PER_SEGMENT * n, n))
    rows = JOINTS_PER_SEGMENT * np.arange(n)
    rate[rows + 1, np.arange(n)] = dext_rate
    rate[rows + 2, np.arange(n)] = dext_rate
    return rate


def mass_point_position(q, segment, params):
    """World position of a segment's lumped mass (0-based segment index).

    The mass sits at the chord midpoint, the frame between the segment's
    two prismatic joints.
    """
    q = _check_q(q, params)
    if not 0 <= segment < params.n:
        raise IndexError(f"segment index {segment} out of range 0..{params.n - 1}")
    pts, _, w, _, _ = _segment_frames(q, params.lengths)
    return pts[segment] + 0.5 * w[segment]


def mass_point_jacobian(q, segment, params):
    """Exact partials of mass_point_position w.r.t. q, guarded at q_i -> 0."""
    q = _check_q(q, params)
    if not 0 <= segment < params.n:
        raise IndexError(f"segment index {segment} out of range 0..{params.n - 1}")
    _, jac, _ = _mass_point_states(q, params.lengths)
    return jac[segment]


def _mass_point_states(q, lengths):
    """Positions, Jacobians and Jacobian-partials of all lumped masses.

    Returns (mu, jac, hess): mu is (n, 2); jac[i] is the 2 x n Jacobian of
    mass i; hess[i][:, j, l] is d(jac[i][:, j])/dq_l. Column j < i of jac[i]
    rotates everything distal to joint j (lever arm about frame j+1) plus
    the shape term of segment j; column i carries half the segment's own
    shape sensitivity because the mass sits mid-chord.
    """
    n = q.size
    pts, _, w, td, tdd = _segment_frames(q, lengths)
    mu = pts[:-1] + 0.5 * w

    jac = np.zeros((n, 2, n))
    hess = np.zeros((n, 2, n, n))
    for i in range(n):
        jac[i, 0, i] = 0.5 * td[i, 0]
        jac[i, 1, i] = 0.5 * td[i, 1]
        hess[i, 0, i, i] = 0.5 * tdd[i, 0]
        hess[i, 1, i, i] = 0.5 * tdd[i, 1]
        for j in range(i):
            dx = mu[i, 0] - pts[j + 1, 0]
            dy = mu[i, 1] - pts[j + 1, 1]
            jac[i, 0, j] = -dy + td[j, 0]
            jac[i, 1, j] = dx + td[j, 1]
            hess[i, 0, j, j] = -dx + tdd[j, 0]
            hess[i, 1, j, j] = -dy + tdd[j, 1]
        # Mixed partials: differentiating column l>j w.r.t. q_j only spins
        # the column, so the entry is S @ jac[:, l] for both orderings.
        for j in range(i + 1):
            for l in range(j + 1, i + 1):
                sx, sy = -jac[i, 1, l], jac[i, 0, l]
                hess[i, 0, j, l] = hess[i, 0, l, j] = sx
                hess[i, 1, j, l] = hess[i, 1, l, j] = sy
    return mu, jac, hess


def _rigid_chain_states(xi, params):
    """Frame origins, axis angles and mass points of the RPPR chain for a
    general (unconstrained) joint vector xi."""
    xi = np.asarray(xi, dtype=float).reshape(-1)
    n = params.n
    if xi.size != JOINTS_PER_SEGMENT * n:
        raise ValueError(f"expected xi of length {JOINTS_PER_SEGMENT * n}, got {xi.size}")
    joints = xi.reshape(n, JOINTS_PER_SEGMENT)

    pts = np.zeros((n + 1, 2))
    mass_pts = np.zeros((n, 2))
    alpha = np.zeros(n)
    heading = 0.0
    for k in range(n):
        theta1, d1, d2, theta2 = joints[k]
        alpha[k] = heading + theta1
        axis = np.array([np.cos(alpha[k]), np.sin(alpha[k])])
        mass_pts[k] = pts[k] + d1 * axis
        pts[k + 1] = pts[k] + (d1 + d2) * axis
        heading = alpha[k] + theta2
    return pts, alpha, mass_pts, heading


def rigid_chain_transform(xi, params):
    """Base-to-tip transform of the RPPR chain at joint vector xi."""
    pts, _, _, heading = _rigid_chain_states(xi, params)
    c, s = np.cos(heading), np.sin(heading)
    return PlanarTransform(np.array([[c, -s], [s, c]]), pts[-1])


def rigid_mass_points(xi, params):
    """Lumped-mass positions of the RPPR chain at joint vector xi, (n, 2)."""
    _, _, mass_pts, _ = _rigid_chain_states(xi, params)
    return mass_pts


def rigid_inertia(xi, params):
    """Joint-space inertia of the RPPR chain, built from point masses.

    Kinetic energy is sum(m_k |mu_k_dot|^2)/2, so the (4n x 4n) inertia is
    the mass-weighted sum of squared mass-point Jacobians in xi space.
    """
    pts, alpha, mass_pts, _ = _rigid_chain_states(xi, params)
    n = params.n
    dof = JOINTS_PER_SEGMENT * n
    inertia = np.zeros((dof, dof))
    for k in range(n):
        jac = np.zeros((2, dof))
        for j in range(k + 1):
            base = JOINTS_PER_SEGMENT * j
            axis_x, axis_y = np.cos(alpha[j]), np.sin(alpha[j])
            dx, dy = mass_pts[k] - pts[j]
            jac[0, base] = -dy
            jac[1, base] = dx
            jac[0, base + 1] = axis_x
            jac[1, base + 1] = axis_y
            if j < k:
                jac[0, base + 2] = axis_x
                jac[1, base + 2] = axis_y
                dx2, dy2 = mass_pts[k] - pts[j + 1]
                jac[0, base + 3] = -dy2
                jac[1, base + 3] = dx2
        inertia += params.masses[k] * jac.T @ jac
    return inertia
