"""
Planning a tip trajectory and validating it open loop
=====================================================

The full pipeline on the packaged reach-and-hold path: sample the spline,
run inverse kinematics per sample with warm starts, lift to rates by
backward differences, evaluate the flatness input map, then replay the
input schedule through the dynamics with no feedback and measure how well
the tip tracks the reference.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from pccflat import ConfigurationState, generate, rollout_open_loop
from pccflat.io import builtin_spec_path, default_params_path, load_params, \
    load_trajectory_spec

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

params = load_params(default_params_path())
spec = load_trajectory_spec(builtin_spec_path("reach_hold"))
path = spec.tip_path()

traj = generate(path, spec.branch, params)
t_avg = float(np.mean(traj.iteration_times))
print(f"planned {traj.times.size} samples, t_avg {t_avg * 1e6:.0f} us/iteration "
      f"({traj.dt / t_avg:.0f}x faster than real time)")

x0 = ConfigurationState(traj.q[0], np.zeros(2))
rollout = rollout_open_loop(traj, x0, path, params)
print(f"open-loop average tip error: {rollout.e_avg:.3e} m "
      f"(max {rollout.tip_errors.max():.3e} m)")

fig, axes = plt.subplots(1, 3, figsize=(13, 4))
ax = axes[0]
ax.plot(path.samples[:, 0], path.samples[:, 1], "k--", label="reference")
ax.plot(rollout.tips[:, 0], rollout.tips[:, 1], "C0", lw=1, label="simulated")
ax.plot(*path.samples[0], "ko", ms=5)
ax.set_aspect("equal", adjustable="datalim")
ax.set_xlabel("x (m)")
ax.set_ylabel("y (m)")
ax.set_title("tip path")
ax.legend(fontsize=8)
ax.grid(alpha=0.3)

ax = axes[1]
for i in range(2):
    ax.plot(traj.times, traj.q[:, i], label=f"q{i + 1}")
ax.set_xlabel("time (s)")
ax.set_ylabel("curvature (rad)")
ax.set_title("planned joint angles")
ax.legend(fontsize=8)
ax.grid(alpha=0.3)

ax = axes[2]
ax.semilogy(rollout.times, rollout.tip_errors)
ax.set_xlabel("time (s)")
ax.set_ylabel("tip error (m)")
ax.set_title("open-loop tracking error")
ax.grid(alpha=0.3, which="both")

fig.tight_layout()
fig.savefig(OUT / "plan_and_validate.png", dpi=150)
print(f"saved {OUT / 'plan_and_validate.png'}")
