"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
report; every tolerance is pinned here, nothing is calibrated at runtime.
"""

import numpy as np
import pytest

from conftest import central_jacobian, sample_q
from pccflat import (
    ConcavityBranch,
    ConfigurationState,
    FlatOutputPoint,
    IkProblem,
    RobotParams,
    coriolis,
    flat_input,
    flat_state,
    generate,
    inertia,
    inertia_partials,
    inertia_projected,
    integrate,
    joint_map,
    joint_map_jacobian,
    joint_map_jacobian_rate,
    mechanical_energy,
    rollout_open_loop,
    solve_ik,
    tip_jacobian,
    tip_position,
)
from pccflat.cli import timed_generation
from pccflat.io import (
    BUILTIN_SPEC_NAMES,
    builtin_spec_path,
    default_params_path,
    load_params,
    load_trajectory_spec,
)

# Smallest tip-Jacobian singular value (m/rad) for a sample to count as
# nonsingular: keeps ||J^-1|| * residual below the 1e-8 recovery bound and
# stays clear of the branch-merge curves.
MIN_SINGULAR_VALUE = 0.01


def report(criterion, detail):
    print(f"[acceptance] criterion {criterion}: PASS  ({detail})")


@pytest.fixture(scope="module")
def accept_params():
    return load_params(default_params_path())


@pytest.fixture(scope="module")
def trajectory_a(accept_params):
    spec = load_trajectory_spec(builtin_spec_path("reach_hold"))
    path = spec.tip_path()
    traj = generate(path, spec.branch, accept_params)
    return spec, path, traj


def nonsingular_sample(rng, params):
    while True:
        q = sample_q(rng)
        sv = np.linalg.svd(tip_jacobian(q, params), compute_uv=False)
        if sv[-1] >= MIN_SINGULAR_VALUE:
            return q


def test_c1_open_loop_tracking(accept_params):
    """Each shipped spec tracks its reference with e_avg <= 5e-4 m."""
    results = {}
    for name in BUILTIN_SPEC_NAMES:
        spec = load_trajectory_spec(builtin_spec_path(name))
        path = spec.tip_path()
        assert path.samples.shape[0] == 1001 and spec.dt == 0.01
        traj = generate(path, spec.branch, accept_params)
        x0 = flat_state(FlatOutputPoint(traj.q[0], traj.q_dot[0], traj.q_ddot[0]))
        rollout = rollout_open_loop(traj, x0, path, accept_params)
        results[name] = rollout.e_avg
        assert rollout.e_avg <= 5e-4, (name, rollout.e_avg)
    report(1, "e_avg " + ", ".join(f"{k}={v:.2e} m" for k, v in results.items()))


def test_c2_flatness_round_trip(accept_params):
    """Exact-derivative flat inputs reproduce y(t) to 1e-5 rad over 10 s."""

    def output(t):
        return FlatOutputPoint(
            np.array([0.6 * np.sin(0.5 * t) + 0.9,
                      0.5 * np.cos(0.4 * t) - 0.9]),
            np.array([0.3 * np.cos(0.5 * t), -0.2 * np.sin(0.4 * t)]),
            np.array([-0.15 * np.sin(0.5 * t), -0.08 * np.cos(0.4 * t)]),
        )

    def u_of_t(t):
        return flat_input(output(t), accept_params)

    t_eval = np.linspace(0.0, 10.0, 1001)
    _, states = integrate(flat_state(output(0.0)), u_of_t, (0.0, 10.0),
                          accept_params, t_eval=t_eval)
    y_ref = np.array([output(t).y for t in t_eval])
    max_err = np.max(np.abs(states[:, :2] - y_ref))
    assert max_err <= 1e-5, max_err
    report(2, f"max joint error {max_err:.2e} rad over 10 s")


def test_c3_perturbed_initial_conditions(accept_params, trajectory_a):
    """Open loop from three perturbed starts: tip error < 1e-2 m by 0.5 s."""
    _, path, traj = trajectory_a
    perturbations = [np.array([0.3, -0.3]), np.array([-0.25, 0.2]),
                     np.array([0.15, 0.3])]
    worst = 0.0
    for delta in perturbations:
        x0 = ConfigurationState(traj.q[0] + delta, np.zeros(2))
        rollout = rollout_open_loop(traj, x0, path, accept_params)
        settled = rollout.tip_errors[rollout.times >= 0.5]
        assert np.all(settled < 1e-2), delta
        worst = max(worst, float(settled.max()))
    report(3, f"3 starts perturbed up to 0.3 rad; worst error after 0.5 s "
              f"{worst:.2e} m")


def test_c4_structural_dynamics(accept_params):
    """B SPD and symmetric, skew-symmetry, dual construction, analytic
    derivatives against central finite differences, 1000 samples."""
    rng = np.random.default_rng(2024)
    params = accept_params
    worst = dict(sym=0.0, skew=0.0, dual=0.0, jm=0.0, jm_dot=0.0, tip=0.0,
                 dB=0.0)
    delta = 1e-6
    for _ in range(1000):
        q = sample_q(rng)
        q_dot = rng.standard_normal(2)
        v = rng.standard_normal(2)

        B = inertia(q, params)
        worst["sym"] = max(worst["sym"], np.max(np.abs(B - B.T)))
        assert np.all(np.linalg.eigvalsh(B) > 0.0)

        dB = inertia_partials(q, params)
        b_dot = np.tensordot(q_dot, dB, axes=(0, 0))
        C = coriolis(q, q_dot, params)
        skew = abs(v @ (b_dot - 2 * C) @ v) / (
            (v @ v) * max(np.linalg.norm(q_dot), 1e-12))
        worst["skew"] = max(worst["skew"], skew)

        worst["dual"] = max(worst["dual"],
                            np.max(np.abs(B - inertia_projected(q, params))))

        fd = central_jacobian(lambda x: joint_map(x, params).xi, q)
        err = np.max(np.abs(joint_map_jacobian(q, params) - fd))
        worst["jm"] = max(worst["jm"], err / max(1.0, np.max(np.abs(fd))))

        fd = (joint_map_jacobian(q + q_dot * delta, params)
              - joint_map_jacobian(q - q_dot * delta, params)) / (2 * delta)
        err = np.max(np.abs(joint_map_jacobian_rate(q, q_dot, params) - fd))
        worst["jm_dot"] = max(worst["jm_dot"], err / max(1.0, np.max(np.abs(fd))))

        fd = central_jacobian(lambda x: tip_position(x, params), q)
        err = np.max(np.abs(tip_jacobian(q, params) - fd))
        worst["tip"] = max(worst["tip"], err / max(1.0, np.max(np.abs(fd))))

        for k in range(2):
            e = np.zeros(2)
            e[k] = 1e-5
            fd = (inertia(q + e, params) - inertia(q - e, params)) / 2e-5
            err = np.max(np.abs(dB[k] - fd)) / max(1e-9, np.max(np.abs(fd)))
            worst["dB"] = max(worst["dB"], err)

    assert worst["sym"] <= 1e-12
    assert worst["skew"] <= 1e-9
    assert worst["dual"] <= 1e-10
    for key in ("jm", "jm_dot", "tip", "dB"):
        assert worst[key] <= 1e-6, (key, worst[key])
    report(4, "1000 samples; " + ", ".join(
        f"{k}={v:.1e}" for k, v in worst.items()))


def test_c5_fk_ik_identity(accept_params):
    """1000 random nonsingular targets: residual <= 1e-10 m, recovered
    curvatures within 1e-8 rad, both concavity branches exercised."""
    rng = np.random.default_rng(77)
    params = accept_params
    worst_res = worst_rec = 0.0
    for i in range(1000):
        q_true = nonsingular_sample(rng, params)
        if i % 2:
            q_true = np.abs(q_true)    # counterclockwise region
        else:
            q_true = -np.abs(q_true)   # clockwise region
        target = tip_position(q_true, params)
        seed = q_true + rng.uniform(-0.05, 0.05, 2)
        q = solve_ik(IkProblem(target=target, seed=seed), params)
        worst_res = max(worst_res,
                        float(np.linalg.norm(tip_position(q, params) - target)))
        worst_rec = max(worst_rec, float(np.max(np.abs(q - q_true))))
    assert worst_res <= 1e-10
    assert worst_rec <= 1e-8
    report(5, f"residual {worst_res:.2e} m, recovery {worst_rec:.2e} rad, "
              f"500 samples per branch")


def test_c6_passivity(accept_params):
    """Ten unforced rollouts: mechanical energy never increases beyond a
    1e-8 relative slack."""
    rng = np.random.default_rng(88)
    params = accept_params

    def zero_input(_t):
        return np.zeros(2)

    worst = -np.inf
    for _ in range(10):
        x0 = ConfigurationState(rng.uniform(-1.2, 1.2, 2),
                                rng.uniform(-2.0, 2.0, 2))
        t_eval = np.linspace(0.0, 2.0, 81)
        _, states = integrate(x0, zero_input, (0.0, 2.0), params,
                              t_eval=t_eval)
        energy = np.array([mechanical_energy(x[:2], x[2:], params)
                           for x in states])
        slack = 1e-8 * energy[0]
        increase = float(np.max(np.diff(energy)))
        assert increase <= slack
        worst = max(worst, increase / energy[0])
    report(6, f"10 rollouts; worst relative energy increase {worst:.1e}")


def test_c7_timing(accept_params):
    """Per-iteration time flat across the dt sweep (CV < 25%) and at least
    10x faster than real time at dt = 0.01 s."""
    spec = load_trajectory_spec(builtin_spec_path("reach_hold"))
    sweep = sorted({spec.total_time / round(spec.total_time / dt)
                    for dt in np.geomspace(1e-4, 3e-3, 7)})
    t_avgs = []
    for dt in sweep:
        _, record = timed_generation(spec, accept_params, dt=dt)
        t_avgs.append(record.t_avg)
    cv = float(np.std(t_avgs) / np.mean(t_avgs))
    assert cv < 0.25, cv

    _, record = timed_generation(spec, accept_params)  # shipped dt = 0.01
    assert record.speedup >= 10.0, record.speedup
    report(7, f"cv={cv * 100:.1f}% over dt in [1e-4, 3e-3], "
              f"speedup {record.speedup:.0f}x at dt=0.01 s "
              f"(t_avg {record.t_avg * 1e6:.0f} us)")


def test_c8_dt_convergence(accept_params):
    """Refining dt strictly reduces the open-loop average tip error."""
    spec = load_trajectory_spec(builtin_spec_path("reach_hold"))
    errors = []
    for dt in (0.01, 0.005, 0.0025):
        path = spec.tip_path(dt=dt)
        traj = generate(path, spec.branch, accept_params)
        x0 = ConfigurationState(traj.q[0], np.zeros(2))
        rollout = rollout_open_loop(traj, x0, path, accept_params)
        errors.append(rollout.e_avg)
    assert errors[0] > errors[1] > errors[2], errors
    report(8, "e_avg " + " > ".join(f"{e:.2e}" for e in errors)
              + " for dt 0.01 > 0.005 > 0.0025")
