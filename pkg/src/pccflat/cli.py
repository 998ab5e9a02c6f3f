"""Command-line front end: generate, simulate, benchmark, plot.

Exit codes: 0 on success, 1 for numerical or convergence failures, 2 for
unreadable or malformed inputs (argparse uses 2 for usage errors too).
"""

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import io
from .dynamics import mechanical_energy
from .errors import (
    IntegrationError,
    SingularDynamicsError,
    SingularityError,
    UnreachableTargetError,
)
from .kinematics import ConfigurationState
from .simulate import rollout_open_loop
from .trajectory import FlatTrajectory, TipPath, generate

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_INPUT = 2

# Iterations run (and discarded) before a timed generation pass, so
# allocator and cache cold starts do not inflate t_avg.
WARMUP_ITERATIONS = 100

# Tip-error level the perturbed-IC report checks against.
CONVERGENCE_LEVEL = 1e-2


@dataclass(frozen=True)
class TimingRecord:
    """Per-iteration planning times with their real-time comparison."""

    iteration_times: np.ndarray
    t_avg: float
    speedup: float

    @classmethod
    def from_times(cls, times, dt):
        times = np.asarray(times, dtype=float)
        t_avg = float(np.mean(times))
        return cls(iteration_times=times, t_avg=t_avg, speedup=float(dt) / t_avg)


def _load_common(args):
    spec = io.load_trajectory_spec(args.spec)
    params = io.load_params(args.params)
    return spec, params


def _warmup_path(path):
    count = min(WARMUP_ITERATIONS + 1, path.samples.shape[0])
    return TipPath(samples=path.samples[:count], dt=path.dt,
                   total_time=(count - 1) * path.dt)


def timed_generation(spec, params, dt=None):
    """Generate at the spec's (or an overridden) dt with a warm-up pass."""
    path = spec.tip_path(dt)
    generate(_warmup_path(path), spec.branch, params)
    traj = generate(path, spec.branch, params)
    return traj, TimingRecord.from_times(traj.iteration_times, path.dt)


def cmd_generate(args):
    spec, params = _load_common(args)
    traj, record = timed_generation(spec, params)
    io.write_trajectory_csv(traj, args.out)
    print(f"planned {traj.times.size} samples at dt={traj.dt:g} s -> {args.out}")
    print(f"t_avg={record.t_avg * 1e6:.1f} us/iteration, "
          f"speedup {record.speedup:.1f}x vs real time")
    return EXIT_OK


def cmd_simulate(args):
    traj = io.read_trajectory_csv(args.traj)
    spec, params = _load_common(args)
    path = spec.tip_path()

    if args.zero_input:
        traj = FlatTrajectory(times=traj.times, q=traj.q, q_dot=traj.q_dot,
                              q_ddot=traj.q_ddot, u=np.zeros_like(traj.u),
                              dt=traj.dt)
    q0 = traj.q[0].copy()
    if args.perturb:
        # Deterministic alternating-sign perturbation of the start pose.
        q0 = q0 + args.perturb * (-1.0) ** np.arange(q0.size)
    x0 = ConfigurationState(q0, np.zeros_like(q0))

    result = rollout_open_loop(traj, x0, path, params, hold=args.hold)
    energy = None
    if args.zero_input:
        energy = np.array([
            mechanical_energy(result.q[t], result.q_dot[t], params)
            for t in range(result.times.size)
        ])
    io.write_rollout_csv(result, args.out, energy=energy)

    print(f"e_avg={result.e_avg:.6e} m over {result.times.size} samples -> {args.out}")
    if args.perturb:
        above = np.nonzero(result.tip_errors >= CONVERGENCE_LEVEL)[0]
        if above.size == 0:
            print(f"perturbed start: tip error never reached {CONVERGENCE_LEVEL:g} m")
        elif above[-1] + 1 < result.times.size:
            t_conv = result.times[above[-1] + 1]
            print(f"perturbed start: tip error below {CONVERGENCE_LEVEL:g} m "
                  f"from t={t_conv:.2f} s onward")
        else:
            print(f"perturbed start: tip error still above "
                  f"{CONVERGENCE_LEVEL:g} m at the end of the rollout")
    if args.zero_input:
        drift = float(np.max(np.diff(energy))) if energy.size > 1 else 0.0
        print(f"zero-input energy: E0={energy[0]:.6e} J, "
              f"max step increase {drift:.3e} J")
    return EXIT_OK


def cmd_benchmark(args):
    spec, params = _load_common(args)
    if args.dt_min >= args.dt_max:
        raise ValueError("--dt-min must be smaller than --dt-max")
    # Snap each sweep point to the nearest dt that tiles total_time so the
    # spline resampling grid stays exact.
    dts = np.array(sorted({
        spec.total_time / max(2, round(spec.total_time / dt))
        for dt in np.geomspace(args.dt_min, args.dt_max, args.steps)
    }))

    rows = []
    for dt in dts:
        _, record = timed_generation(spec, params, dt=float(dt))
        rows.append((float(dt), record.t_avg, record.speedup))
        print(f"dt={dt:.6g} s: t_avg={record.t_avg * 1e6:.1f} us, "
              f"speedup {record.speedup:.2f}x")
    io.write_timing_csv(rows, args.out)

    t_avgs = np.array([r[1] for r in rows])
    cv = float(np.std(t_avgs) / np.mean(t_avgs))
    print(f"t_avg flatness across dt: mean={np.mean(t_avgs) * 1e6:.1f} us, "
          f"cv={cv * 100:.1f}%")
    print(_crossover_report(dts, t_avgs))
    return EXIT_OK


def _crossover_report(dts, t_avgs):
    """Locate where t_avg crosses the real-time boundary t = dt."""
    margin = t_avgs - dts
    if np.all(margin < 0.0):
        return f"real time for the whole sweep (crossover below dt={dts[0]:.3g} s)"
    if np.all(margin > 0.0):
        return f"slower than real time everywhere (crossover above dt={dts[-1]:.3g} s)"
    idx = int(np.nonzero(np.diff(np.sign(margin)))[0][0])
    # Interpolate log(t_avg) - log(dt) linearly in log(dt) for the root.
    x0, x1 = np.log(dts[idx]), np.log(dts[idx + 1])
    f0 = np.log(t_avgs[idx]) - x0
    f1 = np.log(t_avgs[idx + 1]) - x1
    x_star = x0 - f0 * (x1 - x0) / (f1 - f0)
    return f"real-time crossover at dt ~ {np.exp(x_star):.3g} s"


def cmd_plot(args):
    if args.kind == "trajectory":
        from .plots import render_trajectory

        fig = render_trajectory(io.read_trajectory_csv(args.csv))
    elif args.kind == "rollout":
        from .plots import render_rollout

        result, _ = io.read_rollout_csv(args.csv)
        fig = render_rollout(result)
    elif args.kind == "timing":
        from .plots import render_timing

        fig = render_timing(io.read_timing_csv(args.csv))
    else:
        raise ValueError(f"unknown plot kind {args.kind!r}")
    fig.savefig(args.out, format="svg")
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pccflat",
        description="Trajectory generation and validation for a planar "
                    "constant-curvature soft arm.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    default_params = str(io.default_params_path())

    gen = sub.add_parser("generate", help="plan a trajectory from a spec file")
    gen.add_argument("--spec", required=True, help="trajectory spec JSON")
    gen.add_argument("--params", default=default_params, help="robot params JSON")
    gen.add_argument("--out", required=True, help="output trajectory CSV")
    gen.set_defaults(func=cmd_generate)

    sim = sub.add_parser("simulate", help="replay a planned trajectory open loop")
    sim.add_argument("traj", help="trajectory CSV from 'generate'")
    sim.add_argument("--spec", required=True, help="trajectory spec JSON")
    sim.add_argument("--params", default=default_params, help="robot params JSON")
    sim.add_argument("--out", required=True, help="output rollout CSV")
    sim.add_argument("--perturb", type=float, default=0.0, metavar="RAD",
                     help="perturb the initial curvatures by +-RAD")
    sim.add_argument("--zero-input", action="store_true",
                     help="replace the input schedule with zeros and "
                          "record mechanical energy")
    sim.add_argument("--hold", choices=("linear", "zoh"), default="linear",
                     help="input interpolation between samples")
    sim.set_defaults(func=cmd_simulate)

    ben = sub.add_parser("benchmark",
                         help="sweep dt and time the planning loop")
    ben.add_argument("--spec", required=True, help="trajectory spec JSON")
    ben.add_argument("--params", default=default_params, help="robot params JSON")
    ben.add_argument("--out", required=True, help="output timing CSV")
    ben.add_argument("--dt-min", type=float, default=1e-4)
    ben.add_argument("--dt-max", type=float, default=3e-3)
    ben.add_argument("--steps", type=int, default=7)
    ben.set_defaults(func=cmd_benchmark)

    plo = sub.add_parser("plot", help="render a CSV as a static SVG")
    plo.add_argument("csv", help="input CSV")
    plo.add_argument("--kind", required=True,
                     choices=("trajectory", "rollout", "timing"))
    plo.add_argument("--out", required=True, help="output SVG path")
    plo.set_defaults(func=cmd_plot)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_INPUT
    try:
        return args.func(args)
    except (UnreachableTargetError, SingularityError, SingularDynamicsError,
            IntegrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
