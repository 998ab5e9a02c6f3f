import numpy as np
import pytest

from conftest import sample_q
from pccflat import (
    ConfigurationState,
    FlatOutputPoint,
    RobotParams,
    flat_input,
    flat_state,
    forward_dynamics,
    integrate,
)


def analytic_output(t):
    """The reference flat-output trajectory with exact derivatives."""
    y = np.array([0.6 * np.sin(0.5 * t) + 0.9, 0.5 * np.cos(0.4 * t) - 0.9])
    y_dot = np.array([0.3 * np.cos(0.5 * t), -0.2 * np.sin(0.4 * t)])
    y_ddot = np.array([-0.15 * np.sin(0.5 * t), -0.08 * np.cos(0.4 * t)])
    return FlatOutputPoint(y, y_dot, y_ddot)


class TestFlatState:
    def test_zero(self):
        state = flat_state(FlatOutputPoint(np.zeros(2), np.zeros(2), np.zeros(2)))
        np.testing.assert_array_equal(state.q, 0.0)
        np.testing.assert_array_equal(state.q_dot, 0.0)

    def test_round_trip_identity(self):
        rng = np.random.default_rng(40)
        y, y_dot = rng.uniform(-1.5, 1.5, 2), rng.standard_normal(2)
        state = flat_state(FlatOutputPoint(y, y_dot, np.zeros(2)))
        np.testing.assert_array_equal(state.q, y)
        np.testing.assert_array_equal(state.q_dot, y_dot)

    def test_specific_point(self):
        point = FlatOutputPoint(np.array([np.pi / 4, -np.pi / 3]),
                                np.zeros(2), np.zeros(2))
        np.testing.assert_array_equal(flat_state(point).q,
                                      [np.pi / 4, -np.pi / 3])


class TestFlatInput:
    def test_static_hold(self, params):
        y = np.array([0.8, -0.4])
        u = flat_input(FlatOutputPoint(y, np.zeros(2), np.zeros(2)), params)
        np.testing.assert_allclose(u, params.stiffness @ y, atol=1e-15)

    def test_rest_is_zero(self, params):
        u = flat_input(FlatOutputPoint(np.zeros(2), np.zeros(2), np.zeros(2)),
                       params)
        np.testing.assert_array_equal(u, 0.0)

    def test_input_gain_inverted(self):
        scaled = RobotParams.uniform(2, 0.128, 0.072, 0.5, 0.05, input_gain=4.0)
        plain = RobotParams.uniform(2, 0.128, 0.072, 0.5, 0.05)
        point = FlatOutputPoint(np.array([0.7, 0.5]), np.array([0.2, -0.1]),
                                np.array([0.4, 0.3]))
        np.testing.assert_allclose(flat_input(point, scaled),
                                   flat_input(point, plain) / 4.0, atol=1e-15)

    def test_inverse_pair_with_forward_dynamics(self, params):
        # Feeding the flat input back through the dynamics must return the
        # requested acceleration: the two maps are algebraic inverses.
        rng = np.random.default_rng(41)
        for _ in range(300):
            point = FlatOutputPoint(sample_q(rng), rng.standard_normal(2),
                                    rng.standard_normal(2))
            qdd = forward_dynamics(flat_state(point), flat_input(point, params),
                                   params)
            assert np.max(np.abs(qdd - point.y_ddot)) <= 1e-10

    def test_input_sequence_smooth_along_trajectory(self, params):
        # Along a smooth singularity-free output the inputs must be finite
        # with increments consistent with the sampling.
        ts = np.linspace(0.0, 10.0, 2001)
        us = np.array([flat_input(analytic_output(t), params) for t in ts])
        assert np.all(np.isfinite(us))
        assert np.max(np.abs(np.diff(us, axis=0))) < 0.01

    def test_shape_validation(self, params):
        with pytest.raises(ValueError):
            flat_input(FlatOutputPoint(np.zeros(3), np.zeros(3), np.zeros(3)),
                       params)
        with pytest.raises(ValueError):
            FlatOutputPoint(np.zeros(2), np.zeros(3), np.zeros(2))


class TestRoundTripSimulation:
    def test_short_horizon_tracking(self, params):
        # Theorem-style feasibility: integrating the dynamics under the
        # algebraic input reproduces the output trajectory (3 s window; the
        # acceptance suite runs the full 10 s case).
        def u_of_t(t):
            return flat_input(analytic_output(t), params)

        x0 = flat_state(analytic_output(0.0))
        t_eval = np.linspace(0.0, 3.0, 301)
        _, states = integrate(x0, u_of_t, (0.0, 3.0), params, t_eval=t_eval)
        y_ref = np.array([analytic_output(t).y for t in t_eval])
        assert np.max(np.abs(states[:, :2] - y_ref)) <= 1e-6
