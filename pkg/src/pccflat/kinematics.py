"""Closed-form planar kinematics for constant-curvature arm segments.

Each segment bends as a circular arc of arc length L subtended by an angle
q, so its body-frame transform has rotation R(q) and translation
(L*sin(q)/q, L*(1-cos(q))/q). The 0/0 limits at a straight segment are
removable; every 1/q factor here goes through a Taylor-series guard below
``EPS_SING`` so values and derivatives stay smooth through q = 0.
"""

import math
from dataclasses import dataclass, field

import numpy as np

# Guard half-width for the removable sin(q)/q style singularities. Fifth
# order series keep the switch error far below double precision rounding.
EPS_SING = 1e-4

# The derivative quotients lose low bits to cancellation well before 1e-4
# (their numerators shrink like q^3 while their terms stay O(q)), so their
# series guards take over at wider radii: measured direct-formula noise at
# these switch points stays near 1e-14 (first derivatives) and 2e-13
# (second derivatives), keeping both branches in agreement to <1e-12.
_EPS_D1 = 1e-2
_EPS_D2 = 4e-2

# Subtended angles beyond a full turn are physically meaningless for an
# inextensible arc segment; state construction rejects them.
WORKING_BOUND = 2.0 * np.pi

# d/dtheta R(theta) at theta = 0; left-multiplying by _SPIN rotates by +90 deg.
_SPIN = np.array([[0.0, -1.0], [1.0, 0.0]])


def _as_finite_array(x, name):
    a = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} must be finite, got {x!r}")
    return a


def arc_sinc(q):
    """sin(q)/q, series-guarded near q = 0 (value 1 at the limit)."""
    a = _as_finite_array(q, "q")
    small = np.abs(a) < EPS_SING
    safe = np.where(small, 1.0, a)
    out = np.where(small, 1.0 - a * a / 6.0 + a**4 / 120.0, np.sin(safe) / safe)
    return float(out) if out.ndim == 0 else out


def arc_versinc(q):
    """(1 - cos(q))/q, series-guarded near q = 0 (value 0 at the limit).

    The direct branch uses 2*sin(q/2)^2 for 1 - cos(q), which has no
    cancellation and stays accurate down to the guard.
    """
    a = _as_finite_array(q, "q")
    small = np.abs(a) < EPS_SING
    safe = np.where(small, 1.0, a)
    sin_h = np.sin(safe / 2.0)
    out = np.where(small, a / 2.0 - a**3 / 24.0, 2.0 * sin_h * sin_h / safe)
    return float(out) if out.ndim == 0 else out


def _arc_terms(q):
    """Vectorized arc functions and their first two derivatives.

    Returns (s, v, ds, dv, dds, ddv) where s = sin(q)/q and
    v = (1-cos(q))/q. Every quotient is written as a single fraction with
    2*sin(q/2)^2 replacing 1-cos(q), and switches to its Taylor series
    inside the per-order guard radii above.
    """
    a = _as_finite_array(q, "q")
    a2 = a * a
    abs_a = np.abs(a)
    small0 = abs_a < EPS_SING
    small1 = abs_a < _EPS_D1
    small2 = abs_a < _EPS_D2

    x = np.where(small0, 1.0, a)
    sin_x, cos_x = np.sin(x), np.cos(x)
    sin_h = np.sin(x / 2.0)
    ver = 2.0 * sin_h * sin_h
    x2 = x * x
    x3 = x * x2

    s = np.where(small0, 1.0 - a2 / 6.0 + a2 * a2 / 120.0, sin_x / x)
    v = np.where(small0, a / 2.0 - a * a2 / 24.0, ver / x)
    ds = np.where(small1, a * (-1.0 / 3.0 + a2 * (1.0 / 30.0 - a2 / 840.0)),
                  (x * cos_x - sin_x) / x2)
    dv = np.where(small1, 0.5 + a2 * (-1.0 / 8.0 + a2 / 144.0),
                  (x * sin_x - ver) / x2)
    dds = np.where(small2,
                   -1.0 / 3.0 + a2 * (1.0 / 10.0 + a2 * (-1.0 / 168.0 + a2 / 6480.0)),
                   (2.0 * sin_x - 2.0 * x * cos_x - x2 * sin_x) / x3)
    ddv = np.where(small1, a * (-0.25 + a2 * (1.0 / 36.0 - a2 / 960.0)),
                   (x2 * cos_x - 2.0 * x * sin_x + 2.0 * ver) / x3)
    return s, v, ds, dv, dds, ddv


def _arc_terms_scalar(x):
    """Scalar twin of :func:`_arc_terms` for hot loops (same guards)."""
    ax = abs(x)
    x2 = x * x
    if ax < EPS_SING:
        s = 1.0 - x2 / 6.0 + x2 * x2 / 120.0
        v = x / 2.0 - x * x2 / 24.0
    else:
        sin_h = math.sin(x / 2.0)
        s = math.sin(x) / x
        v = 2.0 * sin_h * sin_h / x
    if ax < _EPS_D1:
        ds = x * (-1.0 / 3.0 + x2 * (1.0 / 30.0 - x2 / 840.0))
        dv = 0.5 + x2 * (-1.0 / 8.0 + x2 / 144.0)
        ddv = x * (-0.25 + x2 * (1.0 / 36.0 - x2 / 960.0))
    else:
        sin_x, cos_x = math.sin(x), math.cos(x)
        sin_h = math.sin(x / 2.0)
        ver = 2.0 * sin_h * sin_h
        x3 = x * x2
        ds = (x * cos_x - sin_x) / x2
        dv = (x * sin_x - ver) / x2
        ddv = (x2 * cos_x - 2.0 * x * sin_x + 2.0 * ver) / x3
    if ax < _EPS_D2:
        dds = -1.0 / 3.0 + x2 * (1.0 / 10.0 + x2 * (-1.0 / 168.0 + x2 / 6480.0))
    else:
        dds = (2.0 * math.sin(x) - 2.0 * x * math.cos(x) - x2 * math.sin(x)) / (x * x2)
    return s, v, ds, dv, dds, ddv


@dataclass(frozen=True)
class RobotParams:
    """Physical parameters of an n-segment planar arm.

    lengths and masses are per segment; stiffness and damping are the
    configuration-space elastic matrices (symmetric positive definite);
    j_lambda is the diagonal input calibration matrix mapping raw actuator
    commands to generalized torques (identity unless calibrated).
    """

    lengths: np.ndarray
    masses: np.ndarray
    stiffness: np.ndarray
    damping: np.ndarray
    j_lambda: np.ndarray

    def __post_init__(self):
        lengths = _as_finite_array(self.lengths, "lengths").reshape(-1)
        masses = _as_finite_array(self.masses, "masses").reshape(-1)
        n = lengths.size
        if n < 1:
            raise ValueError("need at least one segment")
        if masses.size != n:
            raise ValueError(f"expected {n} masses, got {masses.size}")
        if np.any(lengths <= 0.0) or np.any(masses <= 0.0):
            raise ValueError("segment lengths and masses must be positive")

        stiffness = _as_finite_array(self.stiffness, "stiffness")
        damping = _as_finite_array(self.damping, "damping")
        for name, mat in (("stiffness", stiffness), ("damping", damping)):
            if mat.shape != (n, n):
                raise ValueError(f"{name} must be {n}x{n}, got {mat.shape}")
            if not np.allclose(mat, mat.T, rtol=0.0, atol=1e-12):
                raise ValueError(f"{name} must be symmetric")
            if np.any(np.linalg.eigvalsh(mat) <= 0.0):
                raise ValueError(f"{name} must be positive definite")

        j_lambda = _as_finite_array(self.j_lambda, "j_lambda")
        if j_lambda.shape != (n, n):
            raise ValueError(f"j_lambda must be {n}x{n}, got {j_lambda.shape}")
        if np.any(j_lambda != np.diag(np.diag(j_lambda))):
            raise ValueError("j_lambda must be diagonal")
        if np.any(np.diag(j_lambda) == 0.0):
            raise ValueError("j_lambda must be invertible (nonzero diagonal)")

        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "stiffness", stiffness)
        object.__setattr__(self, "damping", damping)
        object.__setattr__(self, "j_lambda", j_lambda)

    @property
    def n(self):
        return self.lengths.size

    @classmethod
    def uniform(cls, n, length, mass, stiffness, damping, input_gain=1.0):
        """Identical segments with diagonal elastic matrices."""
        eye = np.eye(n)
        return cls(
            lengths=np.full(n, float(length)),
            masses=np.full(n, float(mass)),
            stiffness=stiffness * eye,
            damping=damping * eye,
            j_lambda=input_gain * eye,
        )


@dataclass(frozen=True)
class PlanarTransform:
    """Rigid planar transform: proper rotation plus translation (m)."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        rot = _as_finite_array(self.rotation, "rotation")
        tra = _as_finite_array(self.translation, "translation").reshape(2)
        if rot.shape != (2, 2):
            raise ValueError("rotation must be 2x2")
        if not np.allclose(rot.T @ rot, np.eye(2), rtol=0.0, atol=1e-9):
            raise ValueError("rotation must be orthogonal")
        if np.linalg.det(rot) <= 0.0:
            raise ValueError("rotation must have determinant +1")
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "translation", tra)

    @classmethod
    def identity(cls):
        return cls(np.eye(2), np.zeros(2))

    def compose(self, other):
        """The transform applying ``other`` in this frame (self then other)."""
        return PlanarTransform(
            self.rotation @ other.rotation,
            self.rotation @ other.translation + self.translation,
        )

    def apply(self, point):
        return self.rotation @ np.asarray(point, dtype=float) + self.translation


@dataclass(frozen=True)
class ConfigurationState:
    """Curvature vector q (rad) and its rate (rad/s), the flat state."""

    q: np.ndarray
    q_dot: np.ndarray
    bound: float = field(default=WORKING_BOUND, repr=False)

    def __post_init__(self):
        q = _as_finite_array(self.q, "q").reshape(-1)
        q_dot = _as_finite_array(self.q_dot, "q_dot").reshape(-1)
        if q_dot.size != q.size:
            raise ValueError("q and q_dot must have the same length")
        if np.any(np.abs(q) >= self.bound):
            raise ValueError(
                f"|q| must stay below the working bound {self.bound:g} rad")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "q_dot", q_dot)

    @property
    def n(self):
        return self.q.size

    def as_vector(self):
        return np.concatenate([self.q, self.q_dot])

    @classmethod
    def from_vector(cls, x):
        x = _as_finite_array(x, "state vector").reshape(-1)
        if x.size % 2:
            raise ValueError("state vector length must be even")
        n = x.size // 2
        return cls(x[:n], x[n:])


def segment_transform(q, length):
    """Base-to-tip transform of one arc segment."""
    if length <= 0.0:
        raise ValueError("segment length must be positive")
    qf = float(_as_finite_array(q, "q"))
    c, s = np.cos(qf), np.sin(qf)
    rotation = np.array([[c, -s], [s, c]])
    translation = np.array([length * arc_sinc(qf), length * arc_versinc(qf)])
    return PlanarTransform(rotation, translation)


def _segment_frames(q, lengths):
    """Frame origins and world-rotated segment direction data.

    Returns (pts, phi, w, td, tdd): pts[j] is the origin of frame j
    (pts[0] the base), phi[j] the world heading of segment j's base frame,
    w[j] the world translation contributed by segment j, and td/tdd the
    world images of d/dq and d2/dq2 of the local translation.
    """
    s, v, ds, dv, dds, ddv = _arc_terms(q)
    tx, ty = lengths * s, lengths * v
    dtx, dty = lengths * ds, lengths * dv
    ddtx, ddty = lengths * dds, lengths * ddv

    phi = np.concatenate(([0.0], np.cumsum(q)[:-1]))
    c, sn = np.cos(phi), np.sin(phi)
    w = np.stack([c * tx - sn * ty, sn * tx + c * ty], axis=1)
    td = np.stack([c * dtx - sn * dty, sn * dtx + c * dty], axis=1)
    tdd = np.stack([c * ddtx - sn * ddty, sn * ddtx + c * ddty], axis=1)

    pts = np.vstack([np.zeros(2), np.cumsum(w, axis=0)])
    return pts, phi, w, td, tdd


def chain_transform(q, params):
    """Base-to-tip transform of the whole arm (composition over segments)."""
    q = _as_finite_array(q, "q").reshape(-1)
    if q.size != params.n:
        raise ValueError(f"expected {params.n} curvatures, got {q.size}")
    total = PlanarTransform.identity()
    for qi, li in zip(q, params.lengths):
        total = total.compose(segment_transform(qi, li))
    return total


def tip_position(q, params):
    """World position of the arm tip.

    Uses the expanded two-segment expressions when n = 2 (the proof of
    concept scale), generic composition otherwise.
    """
    q = _as_finite_array(q, "q").reshape(-1)
    if q.size != params.n:
        raise ValueError(f"expected {params.n} curvatures, got {q.size}")
    if params.n == 2:
        l1, l2 = params.lengths
        s, v, _, _, _, _ = _arc_terms(q)
        c1, s1 = np.cos(q[0]), np.sin(q[0])
        rx = l1 * s[0] + c1 * l2 * s[1] - s1 * l2 * v[1]
        ry = l1 * v[0] + s1 * l2 * s[1] + c1 * l2 * v[1]
        return np.array([rx, ry])
    pts, _, _, _, _ = _segment_frames(q, params.lengths)
    return pts[-1]


def tip_jacobian(q, params):
    """Exact partials of tip_position w.r.t. q, guarded at q_i -> 0."""
    q = _as_finite_array(q, "q").reshape(-1)
    if q.size != params.n:
        raise ValueError(f"expected {params.n} curvatures, got {q.size}")
    _, jac = _tip_and_jacobian(q, params.lengths)
    return jac


def _tip_and_jacobian(q, lengths):
    """Tip position and Jacobian from one pass over the chain geometry.

    Column j of the Jacobian is S (tip - pts[j+1]) + td[j]: the rotation of
    everything distal to joint j about frame j+1's origin, plus the direct
    arc-shape sensitivity of segment j itself.
    """
    pts, _, _, td, _ = _segment_frames(q, lengths)
    tip = pts[-1]
    lever = tip - pts[1:]
    jac = np.empty((2, q.size))
    jac[0] = -lever[:, 1] + td[:, 0]
    jac[1] = lever[:, 0] + td[:, 1]
    return tip, jac


def _tip2(q0, q1, l0, l1):
    """Two-segment tip position with scalar arithmetic (IK hot path)."""
    s0, v0, _, _, _, _ = _arc_terms_scalar(q0)
    s1, v1, _, _, _, _ = _arc_terms_scalar(q1)
    c, sn = math.cos(q0), math.sin(q0)
    w1x = c * l1 * s1 - sn * l1 * v1
    w1y = sn * l1 * s1 + c * l1 * v1
    return l0 * s0 + w1x, l0 * v0 + w1y


def _tip_jac2(q0, q1, l0, l1):
    """Two-segment tip and Jacobian entries, all scalar (IK hot path)."""
    s0, v0, ds0, dv0, _, _ = _arc_terms_scalar(q0)
    s1, v1, ds1, dv1, _, _ = _arc_terms_scalar(q1)
    c, sn = math.cos(q0), math.sin(q0)
    w1x = c * l1 * s1 - sn * l1 * v1
    w1y = sn * l1 * s1 + c * l1 * v1
    rx = l0 * s0 + w1x
    ry = l0 * v0 + w1y
    j00 = -w1y + l0 * ds0
    j10 = w1x + l0 * dv0
    j01 = c * l1 * ds1 - sn * l1 * dv1
    j11 = sn * l1 * ds1 + c * l1 * dv1
    return rx, ry, j00, j01, j10, j11
