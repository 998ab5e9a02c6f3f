import numpy as np
import pytest

from pccflat import RobotParams


@pytest.fixture
def params():
    """The two-segment arm used throughout: L=12.8 cm, m=72 g per segment."""
    return RobotParams.uniform(2, 0.128, 0.072, 0.5, 0.05)


@pytest.fixture
def params_one():
    return RobotParams.uniform(1, 0.128, 0.072, 0.5, 0.05)


def central_jacobian(f, x, h=1e-5):
    """Central-difference Jacobian of a vector function, the derivative oracle."""
    x = np.asarray(x, dtype=float)
    f0 = np.asarray(f(x))
    jac = np.empty(f0.shape + (x.size,))
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = h
        jac[..., j] = (np.asarray(f(x + e)) - np.asarray(f(x - e))) / (2.0 * h)
    return jac


def sample_q(rng, n=2, min_abs=0.05):
    """Curvatures in [-pi, pi]^n with every |q_i| >= min_abs."""
    while True:
        q = rng.uniform(-np.pi, np.pi, n)
        if np.all(np.abs(q) >= min_abs):
            return q
