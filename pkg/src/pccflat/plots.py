"""Static figure rendering for the CSV outputs.

Each renderer returns a matplotlib Figure; the CLI saves them as SVG. The
key polylines carry gid tags (e.g. ``tip-reference``, ``tip-simulated``)
so the written SVG can be checked for their presence.
"""


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_trajectory(traj):
    """Joint angles and inputs of a planned trajectory versus time."""
    plt = _plt()
    fig, (ax_q, ax_u) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    for i in range(traj.n):
        line, = ax_q.plot(traj.times, traj.q[:, i], label=f"q{i + 1}")
        line.set_gid(f"joint-angle-{i + 1}")
    ax_q.set_ylabel("curvature (rad)")
    ax_q.legend()
    ax_q.grid(alpha=0.3)
    for i in range(traj.n):
        line, = ax_u.plot(traj.times, traj.u[:, i], label=f"u{i + 1}")
        line.set_gid(f"input-{i + 1}")
    ax_u.set_xlabel("time (s)")
    ax_u.set_ylabel("input (N m)")
    ax_u.legend()
    ax_u.grid(alpha=0.3)
    fig.tight_layout()
    return fig


def render_rollout(result):
    """Reference versus simulated tip path, plus the error history."""
    plt = _plt()
    fig, (ax_xy, ax_e) = plt.subplots(1, 2, figsize=(10, 4.5))
    ref, = ax_xy.plot(result.tip_ref[:, 0], result.tip_ref[:, 1], "k--",
                      label="reference")
    ref.set_gid("tip-reference")
    sim, = ax_xy.plot(result.tips[:, 0], result.tips[:, 1], "C0-",
                      label="simulated")
    sim.set_gid("tip-simulated")
    ax_xy.plot(result.tip_ref[0, 0], result.tip_ref[0, 1], "ko", ms=5)
    ax_xy.set_xlabel("x (m)")
    ax_xy.set_ylabel("y (m)")
    ax_xy.set_aspect("equal", adjustable="datalim")
    ax_xy.legend()
    ax_xy.grid(alpha=0.3)

    err, = ax_e.semilogy(result.times, result.tip_errors)
    err.set_gid("tip-error")
    ax_e.set_xlabel("time (s)")
    ax_e.set_ylabel("tip error (m)")
    ax_e.grid(alpha=0.3, which="both")
    fig.tight_layout()
    return fig


def render_timing(data):
    """Per-iteration planning time against the sample period."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6, 4.5))
    dts = data[:, 0]
    line, = ax.loglog(dts, data[:, 1], "C0o-", label="t_avg per iteration")
    line.set_gid("iteration-time")
    diag, = ax.loglog(dts, dts, "k--", label="real-time boundary (t = dt)")
    diag.set_gid("real-time-diagonal")
    ax.set_xlabel("planning timestep dt (s)")
    ax.set_ylabel("time (s)")
    ax.legend()
    ax.grid(alpha=0.3, which="both")
    fig.tight_layout()
    return fig
