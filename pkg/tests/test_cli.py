"""Command-line surface: JSON reports, CSV reproducibility, manifest
round-trips, and the documented exit codes."""

import csv
import json
import math

import numpy as np
import pytest

from fracburgers import gamma
from fracburgers.cli import main


def run_json(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr().out
    return rc, json.loads(out)


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array([[float(v) for v in row] for row in rows[1:]])


class TestBounds:
    def test_report_values(self, capsys):
        rc, report = run_json(capsys, ["bounds", "--alpha", "0.5", "--delta", "3"])
        assert rc == 0
        assert report["upper_bound"] == pytest.approx(4 / math.pi, rel=1e-13)
        assert report["limit_upper_bound"] == pytest.approx(1.52620511, abs=5e-9)
        assert report["lower_bound"] == pytest.approx(1 / (20 * math.pi), rel=1e-12)
        constants = report["lower_bound_constants"]
        assert constants["kappa"] == pytest.approx(1.0, abs=1e-14)
        assert constants["eta"] == pytest.approx(4.0, abs=1e-13)
        assert report["manifest"]["subcommand"] == "bounds"

    def test_no_delta_omits_lower_bound(self, capsys):
        rc, report = run_json(capsys, ["bounds", "--alpha", "0.25"])
        assert rc == 0
        assert "lower_bound" not in report

    def test_bad_alpha_exits_2(self):
        assert main(["bounds", "--alpha", "1.5"]) == 2
        assert main(["bounds", "--alpha", "0"]) == 2


class TestSolve:
    def test_trajectory_csv(self, tmp_path):
        rc = main([
            "solve", "--alpha", "0.5", "--h", "0.001", "--t-max", "0.1",
            "--out", str(tmp_path),
        ])
        assert rc == 0
        header, data = read_csv(tmp_path / "solve.csv")
        assert header == ["t", "v"]
        assert data.shape == (101, 2)
        assert data[0, 1] == 1.0
        manifest = json.loads((tmp_path / "solve_manifest.json").read_text())
        assert manifest["status"] == "completed"

    def test_cap_below_four_exits_2(self, tmp_path):
        rc = main([
            "solve", "--alpha", "0.5", "--h", "0.001", "--t-max", "0.1",
            "--cap", "3", "--out", str(tmp_path),
        ])
        assert rc == 2

    def test_manifest_rerun_reproduces_bytes(self, tmp_path):
        out1 = tmp_path / "a"
        out2 = tmp_path / "b"
        argv = ["solve", "--alpha", "0.7", "--h", "0.002", "--t-max", "0.3"]
        assert main(argv + ["--out", str(out1)]) == 0
        manifest = json.loads((out1 / "solve_manifest.json").read_text())
        p = manifest["parameters"]
        replay = [
            "solve", "--alpha", repr(p["alpha"]), "--h", repr(p["h"]),
            "--t-max", repr(p["t_max"]), "--v0", repr(p["v0"]),
            "--threshold", repr(p["threshold"]), "--sweeps", str(p["sweeps"]),
        ]
        if p["cap"] is not None:
            replay += ["--cap", repr(p["cap"])]
        assert main(replay + ["--out", str(out2)]) == 0
        assert (out1 / "solve.csv").read_bytes() == (out2 / "solve.csv").read_bytes()


class TestBlowup:
    def test_classical_report(self, capsys):
        rc, report = run_json(capsys, ["blowup", "--alpha", "1"])
        assert rc == 0
        assert report["t_lo"] <= 1.0 <= report["t_hi"]
        assert report["width"] <= 0.02
        assert report["sandwich"]["upper"] == 1.0
        assert len(report["refinement_trace"]) == 12

    def test_no_blowup_exits_4(self):
        rc = main(["blowup", "--alpha", "0.9", "--horizon", "0.05", "--step", "0.001"])
        assert rc == 4


class TestImpulse:
    def test_default_dataset(self, tmp_path):
        rc = main(["impulse", "--out", str(tmp_path)])
        assert rc == 0
        header, data = read_csv(tmp_path / "impulse.csv")
        assert header[0] == "t"
        assert len(header) == 9  # t plus the eight caption orders
        assert data.shape[0] == 501

    def test_byte_determinism(self, tmp_path):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        assert main(["impulse", "--out", str(out1)]) == 0
        assert main(["impulse", "--out", str(out2)]) == 0
        assert (out1 / "impulse.csv").read_bytes() == (out2 / "impulse.csv").read_bytes()


class TestCaputo:
    def _write_linear(self, path, h=0.001, n=500):
        with open(path, "w", newline="\n") as fh:
            fh.write("t,f\n")
            for j in range(n + 1):
                t = j * h
                fh.write(f"{t!r},{t!r}\n")

    def test_linear_input_matches_closed_form(self, tmp_path):
        src = tmp_path / "f.csv"
        self._write_linear(src)
        rc = main(["caputo", "--alpha", "0.5", "--input", str(src), "--out", str(tmp_path)])
        assert rc == 0
        _, data = read_csv(tmp_path / "caputo.csv")
        t = data[1:, 0]
        expected = t ** 0.5 / gamma(1.5)
        np.testing.assert_allclose(data[1:, 1], expected, rtol=1e-10)

    def test_classical_order_takes_backward_differences(self, tmp_path):
        src = tmp_path / "f.csv"
        self._write_linear(src)
        rc = main(["caputo", "--alpha", "1", "--input", str(src), "--out", str(tmp_path)])
        assert rc == 0
        _, data = read_csv(tmp_path / "caputo.csv")
        np.testing.assert_allclose(data[1:, 1], 1.0, rtol=1e-12)

    def test_non_uniform_grid_exits_2(self, tmp_path):
        src = tmp_path / "bad.csv"
        src.write_text("t,f\n0.0,0.0\n0.1,0.1\n0.3,0.3\n0.4,0.4\n")
        rc = main(["caputo", "--alpha", "0.5", "--input", str(src), "--out", str(tmp_path)])
        assert rc == 2

    def test_missing_file_exits_2(self, tmp_path):
        rc = main(["caputo", "--alpha", "0.5", "--input", str(tmp_path / "nope.csv")])
        assert rc == 2


class TestPde:
    def test_long_format_csv(self, tmp_path):
        rc = main([
            "pde", "--form", "rho", "--alpha", "0.5", "--cells", "16",
            "--h", "0.0001", "--t-max", "0.005", "--bc", "periodic",
            "--initial", "market-critical", "--out", str(tmp_path),
        ])
        assert rc == 0
        header, data = read_csv(tmp_path / "pde.csv")
        assert header == ["t", "x", "value"]
        assert data.shape == (51 * 16, 3)
        assert np.all(data[:, 2] == 0.5)

    def test_constant_initial_dirichlet(self, tmp_path):
        rc = main([
            "pde", "--form", "u", "--alpha", "0.75", "--cells", "16",
            "--h", "0.0001", "--t-max", "0.002", "--bc", "dirichlet",
            "--initial", "constant:0.25", "--out", str(tmp_path),
        ])
        assert rc == 0
        _, data = read_csv(tmp_path / "pde.csv")
        assert np.all(data[:, 2] == 0.25)

    def test_cfl_violation_exits_3(self, tmp_path):
        rc = main([
            "pde", "--form", "u", "--alpha", "0.5", "--cells", "200",
            "--h", "0.001", "--t-max", "0.01", "--bc", "dirichlet",
            "--initial", "minus-x", "--out", str(tmp_path),
        ])
        assert rc == 3

    def test_unknown_initial_exits_2(self, tmp_path):
        rc = main([
            "pde", "--form", "u", "--alpha", "0.5", "--cells", "16",
            "--h", "0.0001", "--t-max", "0.002", "--bc", "periodic",
            "--initial", "bogus", "--out", str(tmp_path),
        ])
        assert rc == 2


def test_version_flag():
    assert main(["--version"]) == 0
