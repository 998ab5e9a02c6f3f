"""On-disk formats: JSON configuration files and CSV traces.

Floats are written with repr so every CSV round-trips bit exactly through
the readers here. Schema problems raise ValueError with a pointed message;
the CLI turns those into exit code 2.
"""

import csv
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .ik import ConcavityBranch
from .kinematics import RobotParams
from .simulate import RolloutResult
from .trajectory import FlatTrajectory, SplineSpec, TipPath, sample_spline

_DATA_PACKAGE = "pccflat"

BUILTIN_SPEC_NAMES = ("reach_hold", "lateral_sweep", "s_curve")


def default_params_path():
    """Path of the packaged default robot parameters."""
    return Path(str(resources.files(_DATA_PACKAGE) / "data" / "params_default.json"))


def builtin_spec_path(name):
    """Path of a packaged trajectory spec (see BUILTIN_SPEC_NAMES)."""
    if name not in BUILTIN_SPEC_NAMES:
        raise ValueError(f"unknown builtin spec {name!r}, have {BUILTIN_SPEC_NAMES}")
    return Path(str(resources.files(_DATA_PACKAGE) / "data" / f"{name}.json"))


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc


def _require(doc, key, path):
    if key not in doc:
        raise ValueError(f"{path}: missing required field {key!r}")
    return doc[key]


def load_params(path):
    """Read a RobotParams JSON file.

    Expected fields: lengths, masses (lists, one entry per segment),
    stiffness and damping (n x n nested lists), j_lambda (list of diagonal
    entries, or an n x n diagonal matrix).
    """
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: expected a JSON object")
    lengths = np.asarray(_require(doc, "lengths", path), dtype=float)
    j_lambda = np.asarray(_require(doc, "j_lambda", path), dtype=float)
    if j_lambda.ndim == 1:
        j_lambda = np.diag(j_lambda)
    try:
        return RobotParams(
            lengths=lengths,
            masses=np.asarray(_require(doc, "masses", path), dtype=float),
            stiffness=np.asarray(_require(doc, "stiffness", path), dtype=float),
            damping=np.asarray(_require(doc, "damping", path), dtype=float),
            j_lambda=j_lambda,
        )
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class TrajectorySpec:
    """Parsed trajectory spec file: spline control points or raw samples."""

    branch: ConcavityBranch
    dt: float
    total_time: float
    control_points: np.ndarray | None = None
    samples: np.ndarray | None = None
    name: str = ""

    def spline_spec(self, dt=None):
        if self.control_points is None:
            raise ValueError("spec has explicit samples only; cannot resample a spline")
        return SplineSpec(
            control_points=self.control_points,
            branch=self.branch,
            dt=self.dt if dt is None else float(dt),
            total_time=self.total_time,
        )

    def tip_path(self, dt=None):
        """Materialize the path, regenerating the spline when dt differs."""
        if self.samples is not None:
            if dt is not None and dt != self.dt:
                raise ValueError("explicit samples cannot be resampled at a new dt")
            return TipPath(samples=self.samples, dt=self.dt, total_time=self.total_time)
        return sample_spline(self.spline_spec(dt))


def load_trajectory_spec(path):
    """Read a trajectory spec JSON file.

    Required fields: branch ('counterclockwise' or 'clockwise'), dt,
    total_time, and control_points; an optional samples array overrides
    the spline with explicit tip targets.
    """
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: expected a JSON object")
    branch_name = _require(doc, "branch", path)
    try:
        branch = ConcavityBranch(branch_name)
    except ValueError as exc:
        raise ValueError(
            f"{path}: branch must be 'counterclockwise' or 'clockwise', "
            f"got {branch_name!r}") from exc
    dt = float(_require(doc, "dt", path))
    total_time = float(_require(doc, "total_time", path))

    control_points = doc.get("control_points")
    samples = doc.get("samples")
    if control_points is None and samples is None:
        raise ValueError(f"{path}: need control_points or samples")
    try:
        spec = TrajectorySpec(
            branch=branch,
            dt=dt,
            total_time=total_time,
            control_points=None if control_points is None
            else np.asarray(control_points, dtype=float),
            samples=None if samples is None else np.asarray(samples, dtype=float),
            name=str(doc.get("name", "")),
        )
        spec.tip_path()  # shape/grid validation happens on materialization
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc
    return spec


def _fmt(x):
    return repr(float(x))


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _read_csv(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty CSV") from None
        data = [[float(cell) for cell in row] for row in reader if row]
    if not data:
        raise ValueError(f"{path}: CSV has a header but no rows")
    widths = {len(row) for row in data}
    if widths != {len(header)}:
        raise ValueError(f"{path}: ragged CSV rows")
    return header, np.array(data)


def trajectory_header(n):
    return (["t"]
            + [f"q{i}" for i in range(1, n + 1)]
            + [f"qd{i}" for i in range(1, n + 1)]
            + [f"qdd{i}" for i in range(1, n + 1)]
            + [f"u{i}" for i in range(1, n + 1)])


def write_trajectory_csv(traj, path):
    """Emit a planned trajectory as t,q*,qd*,qdd*,u* rows."""
    rows = (
        [_fmt(traj.times[t])]
        + [_fmt(x) for x in traj.q[t]]
        + [_fmt(x) for x in traj.q_dot[t]]
        + [_fmt(x) for x in traj.q_ddot[t]]
        + [_fmt(x) for x in traj.u[t]]
        for t in range(traj.times.size)
    )
    _write_csv(path, trajectory_header(traj.n), rows)


def read_trajectory_csv(path):
    """Parse a trajectory CSV back into a FlatTrajectory."""
    header, data = _read_csv(path)
    if (len(header) - 1) % 4 or len(header) < 5:
        raise ValueError(f"{path}: not a trajectory CSV (header {header})")
    n = (len(header) - 1) // 4
    if header != trajectory_header(n):
        raise ValueError(f"{path}: unexpected trajectory header {header}")
    times = data[:, 0]
    if times.size < 2:
        raise ValueError(f"{path}: need at least two samples")
    dt = float(times[1] - times[0])
    cols = 1 + n * np.arange(5)
    return FlatTrajectory(
        times=times,
        q=data[:, cols[0]:cols[1]],
        q_dot=data[:, cols[1]:cols[2]],
        q_ddot=data[:, cols[2]:cols[3]],
        u=data[:, cols[3]:cols[4]],
        dt=dt,
    )


def rollout_header(n, with_energy=False):
    head = (["t"]
            + [f"q{i}" for i in range(1, n + 1)]
            + [f"qd{i}" for i in range(1, n + 1)]
            + ["rx", "ry", "rx_ref", "ry_ref", "err"])
    if with_energy:
        head.append("energy")
    return head


def write_rollout_csv(result, path, energy=None):
    """Emit a rollout as t,q*,qd*,rx,ry,rx_ref,ry_ref,err[,energy] rows."""
    n = result.q.shape[1]
    rows = []
    for t in range(result.times.size):
        row = (
            [_fmt(result.times[t])]
            + [_fmt(x) for x in result.q[t]]
            + [_fmt(x) for x in result.q_dot[t]]
            + [_fmt(result.tips[t, 0]), _fmt(result.tips[t, 1])]
            + [_fmt(result.tip_ref[t, 0]), _fmt(result.tip_ref[t, 1])]
            + [_fmt(result.tip_errors[t])]
        )
        if energy is not None:
            row.append(_fmt(energy[t]))
        rows.append(row)
    _write_csv(path, rollout_header(n, energy is not None), rows)


def read_rollout_csv(path):
    """Parse a rollout CSV; returns (RolloutResult, energy-or-None)."""
    header, data = _read_csv(path)
    with_energy = header[-1] == "energy"
    body = len(header) - (1 if with_energy else 0)
    if (body - 6) % 2 or body < 8:
        raise ValueError(f"{path}: not a rollout CSV (header {header})")
    n = (body - 6) // 2
    if header != rollout_header(n, with_energy):
        raise ValueError(f"{path}: unexpected rollout header {header}")
    q = data[:, 1:1 + n]
    q_dot = data[:, 1 + n:1 + 2 * n]
    base = 1 + 2 * n
    result = RolloutResult(
        times=data[:, 0],
        q=q,
        q_dot=q_dot,
        tips=data[:, base:base + 2],
        tip_ref=data[:, base + 2:base + 4],
        tip_errors=data[:, base + 4],
        e_avg=float(np.mean(data[:, base + 4])),
    )
    return result, (data[:, base + 5] if with_energy else None)


def write_timing_csv(rows, path):
    """Emit benchmark rows (dt, t_avg, speedup)."""
    _write_csv(path, ["dt", "t_avg", "speedup"],
               ([_fmt(a), _fmt(b), _fmt(c)] for a, b, c in rows))


def read_timing_csv(path):
    """Parse a benchmark CSV into an (N, 3) array of dt, t_avg, speedup."""
    header, data = _read_csv(path)
    if header != ["dt", "t_avg", "speedup"]:
        raise ValueError(f"{path}: unexpected timing header {header}")
    return data
