import json
import subprocess
import sys

import numpy as np
import pytest

from pccflat.cli import EXIT_INPUT, EXIT_NUMERIC, EXIT_OK, main
from pccflat.io import (
    builtin_spec_path,
    read_rollout_csv,
    read_timing_csv,
    read_trajectory_csv,
)

SPEC = str(builtin_spec_path("reach_hold"))


@pytest.fixture(scope="module")
def traj_csv(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "traj.csv"
    assert main(["generate", "--spec", SPEC, "--out", str(out)]) == EXIT_OK
    return out


def make_short_spec(tmp_path, **overrides):
    doc = {
        "branch": "counterclockwise",
        "dt": 0.01,
        "total_time": 2.0,
        "control_points": [
            [0.050757, 0.182832], [0.050757, 0.182832],
            [0.122617, 0.181663], [0.122617, 0.181663],
        ],
    }
    doc.update(overrides)
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(doc))
    return str(path)


class TestGenerate:
    def test_writes_full_length_finite_csv(self, traj_csv):
        traj = read_trajectory_csv(traj_csv)
        assert traj.times.size == 1001
        for field in (traj.q, traj.q_dot, traj.q_ddot, traj.u):
            assert np.all(np.isfinite(field))

    def test_byte_identical_reruns(self, tmp_path):
        spec = make_short_spec(tmp_path)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["generate", "--spec", spec, "--out", str(a)]) == EXIT_OK
        assert main(["generate", "--spec", spec, "--out", str(b)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_prints_timing_summary(self, tmp_path, capsys):
        spec = make_short_spec(tmp_path)
        main(["generate", "--spec", spec, "--out", str(tmp_path / "t.csv")])
        out = capsys.readouterr().out
        assert "t_avg" in out and "speedup" in out

    def test_malformed_spec_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{broken")
        code = main(["generate", "--spec", str(bad),
                     "--out", str(tmp_path / "x.csv")])
        assert code == EXIT_INPUT
        assert "error" in capsys.readouterr().err

    def test_missing_file_exits_2(self, tmp_path):
        code = main(["generate", "--spec", str(tmp_path / "nope.json"),
                     "--out", str(tmp_path / "x.csv")])
        assert code == EXIT_INPUT

    def test_unreachable_spec_exits_1(self, tmp_path, capsys):
        spec = make_short_spec(
            tmp_path,
            control_points=[[0.05, 0.18], [0.4, 0.4], [0.5, 0.5], [0.5, 0.5]])
        code = main(["generate", "--spec", spec,
                     "--out", str(tmp_path / "x.csv")])
        assert code == EXIT_NUMERIC
        assert "timestep" in capsys.readouterr().err


class TestSimulate:
    def test_pipeline_error_level(self, traj_csv, tmp_path, capsys):
        out = tmp_path / "roll.csv"
        code = main(["simulate", str(traj_csv), "--spec", SPEC,
                     "--out", str(out)])
        assert code == EXIT_OK
        printed = capsys.readouterr().out
        e_avg = float(printed.split("e_avg=")[1].split(" ")[0])
        assert e_avg <= 5e-4
        result, energy = read_rollout_csv(out)
        assert energy is None
        assert result.times.size == 1001

    def test_perturbed_convergence_report(self, traj_csv, tmp_path, capsys):
        code = main(["simulate", str(traj_csv), "--spec", SPEC,
                     "--out", str(tmp_path / "roll.csv"),
                     "--perturb", "0.3"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "perturbed start: tip error below 0.01 m from t=" in out
        t_conv = float(out.split("from t=")[1].split(" ")[0])
        assert t_conv <= 0.5

    def test_zero_input_energy_monotone(self, traj_csv, tmp_path):
        out = tmp_path / "zero.csv"
        code = main(["simulate", str(traj_csv), "--spec", SPEC,
                     "--out", str(out), "--zero-input"])
        assert code == EXIT_OK
        _, energy = read_rollout_csv(out)
        assert energy is not None
        assert np.all(np.diff(energy) <= 1e-8 * energy[0])

    def test_zoh_hold_mode(self, traj_csv, tmp_path):
        code = main(["simulate", str(traj_csv), "--spec", SPEC,
                     "--out", str(tmp_path / "roll.csv"), "--hold", "zoh"])
        assert code == EXIT_OK

    def test_mismatched_dt_exits_2(self, traj_csv, tmp_path):
        other = make_short_spec(tmp_path, dt=0.02, total_time=10.0)
        code = main(["simulate", str(traj_csv), "--spec", other,
                     "--out", str(tmp_path / "roll.csv")])
        assert code == EXIT_INPUT


class TestBenchmark:
    def test_small_sweep(self, tmp_path, capsys):
        spec = make_short_spec(tmp_path)
        out = tmp_path / "timing.csv"
        code = main(["benchmark", "--spec", spec, "--out", str(out),
                     "--dt-min", "1e-3", "--dt-max", "1e-2", "--steps", "3"])
        assert code == EXIT_OK
        data = read_timing_csv(out)
        assert data.shape == (3, 3)
        np.testing.assert_allclose(data[:, 2], data[:, 0] / data[:, 1],
                                   rtol=1e-12)
        printed = capsys.readouterr().out
        assert "cv=" in printed and "crossover" in printed

    def test_explicit_samples_cannot_sweep(self, tmp_path):
        doc = {"branch": "counterclockwise", "dt": 0.01, "total_time": 0.1,
               "samples": np.tile([0.05, 0.18], (11, 1)).tolist()}
        spec = tmp_path / "samples.json"
        spec.write_text(json.dumps(doc))
        code = main(["benchmark", "--spec", str(spec),
                     "--out", str(tmp_path / "t.csv"),
                     "--dt-min", "1e-3", "--dt-max", "1e-2", "--steps", "2"])
        assert code == EXIT_INPUT

    def test_bad_range_exits_2(self, tmp_path):
        spec = make_short_spec(tmp_path)
        code = main(["benchmark", "--spec", spec,
                     "--out", str(tmp_path / "t.csv"),
                     "--dt-min", "1e-2", "--dt-max", "1e-3"])
        assert code == EXIT_INPUT


class TestPlot:
    def test_trajectory_svg(self, traj_csv, tmp_path):
        out = tmp_path / "traj.svg"
        assert main(["plot", str(traj_csv), "--kind", "trajectory",
                     "--out", str(out)]) == EXIT_OK
        text = out.read_text()
        assert "joint-angle-1" in text and "input-2" in text

    def test_rollout_svg_has_both_polylines(self, traj_csv, tmp_path):
        roll = tmp_path / "roll.csv"
        main(["simulate", str(traj_csv), "--spec", SPEC, "--out", str(roll)])
        out = tmp_path / "roll.svg"
        assert main(["plot", str(roll), "--kind", "rollout",
                     "--out", str(out)]) == EXIT_OK
        text = out.read_text()
        assert "tip-reference" in text and "tip-simulated" in text

    def test_timing_svg_has_diagonal(self, tmp_path):
        from pccflat.io import write_timing_csv

        csv = tmp_path / "timing.csv"
        write_timing_csv([(1e-4, 9e-5, 1.1), (1e-3, 1e-4, 10.0)], csv)
        out = tmp_path / "timing.svg"
        assert main(["plot", str(csv), "--kind", "timing",
                     "--out", str(out)]) == EXIT_OK
        text = out.read_text()
        assert "iteration-time" in text and "real-time-diagonal" in text

    def test_empty_csv_exits_2(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        code = main(["plot", str(empty), "--kind", "rollout",
                     "--out", str(tmp_path / "x.svg")])
        assert code == EXIT_INPUT

    def test_unknown_kind_exits_2(self, traj_csv, tmp_path):
        code = main(["plot", str(traj_csv), "--kind", "sonogram",
                     "--out", str(tmp_path / "x.svg")])
        assert code == EXIT_INPUT


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "pccflat.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    for sub in ("generate", "simulate", "benchmark", "plot"):
        assert sub in proc.stdout
