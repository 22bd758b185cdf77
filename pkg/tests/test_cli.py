import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from densecoding import channel
from densecoding.cli import PLAN_COLUMNS, main

HEADER = "d,p,q,S_rho,S_rho_star,chi,T,chi_times_T,degenerate"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestPlanA:
    def test_single_point(self, capsys):
        code, out, _ = run(capsys, "plan-a", "--d", "0.5")
        assert code == 0
        assert out.splitlines()[0] == HEADER
        (row,) = rows(out)
        assert float(row["chi"]) == pytest.approx(0.61, abs=0.005)
        assert (row["p"], row["q"], row["T"], row["degenerate"]) == ("0.0", "0.0", "1.0", "false")

    def test_noiseless(self, capsys):
        _, out, _ = run(capsys, "plan-a", "--d", "0")
        assert float(rows(out)[0]["chi"]) == pytest.approx(2.0, abs=1e-12)

    def test_grid(self, capsys):
        code, out, _ = run(capsys, "plan-a", "--grid", "d=0:1:101")
        assert code == 0
        table = rows(out)
        assert len(table) == 101
        chi = np.array([float(r["chi"]) for r in table])
        assert float(table[int(np.argmin(chi))]["d"]) == pytest.approx(0.652, abs=0.01)

    def test_full_precision(self, capsys):
        _, out, _ = run(capsys, "plan-a", "--d", "0.5")
        chi = rows(out)[0]["chi"]
        assert len(chi.replace("0.", "", 1)) >= 15
        assert float(chi) == pytest.approx(0.6095260510734, abs=1e-12)

    def test_json(self, capsys):
        _, out, _ = run(capsys, "plan-a", "--grid", "d=0:1:3", "--format", "json")
        payload = json.loads(out)
        assert payload["meta"]["command"] == "plan-a"
        assert payload["meta"]["grids"] == {"d": {"start": 0.0, "stop": 1.0, "steps": 3}}
        assert [list(r) for r in payload["rows"]] == [list(PLAN_COLUMNS)] * 3
        assert payload["rows"][2]["chi"] == pytest.approx(1.0, abs=1e-12)

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "out.csv"
        code, out, _ = run(capsys, "plan-a", "--d", "0.25", "--output", str(path))
        assert code == 0 and out == ""
        assert path.read_text().splitlines()[0] == HEADER


class TestPlanB:
    def test_auto(self, capsys):
        code, out, _ = run(capsys, "plan-b", "--d", "0.5", "--p", "0.9", "--q", "auto")
        assert code == 0
        (row,) = rows(out)
        assert float(row["q"]) == pytest.approx(0.9501, abs=1e-4)
        assert float(row["chi"]) == pytest.approx(1.67, abs=0.01)
        assert float(row["T"]) == pytest.approx(2.63e-3, abs=0.01e-3)
        assert float(row["chi_times_T"]) == pytest.approx(float(row["chi"]) * float(row["T"]))

    def test_identity_filters_match_plan_a(self, capsys):
        _, a, _ = run(capsys, "plan-a", "--d", "0.5")
        _, b, _ = run(capsys, "plan-b", "--d", "0.5", "--p", "0", "--q", "0")
        ra, rb = rows(a)[0], rows(b)[0]
        for key in ("S_rho", "S_rho_star", "chi", "T"):
            assert float(ra[key]) == pytest.approx(float(rb[key]), abs=1e-12)

    def test_full_weak(self, capsys):
        _, out, _ = run(capsys, "plan-b", "--d", "0.5", "--p", "1", "--q", "0.5")
        row = rows(out)[0]
        assert float(row["S_rho"]) == pytest.approx(0.0, abs=1e-12)
        assert float(row["S_rho_star"]) == pytest.approx(1.0, abs=1e-12)

    def test_degenerate_single_point(self, capsys):
        code, out, err = run(capsys, "plan-b", "--d", "0.5", "--p", "1", "--q", "1")
        assert code == 3 and out == ""
        assert "post-selection impossible" in err

    def test_degenerate_in_grid_is_flagged(self, capsys):
        code, out, _ = run(capsys, "plan-b", "--d", "0.5", "--grid", "p=0:1:2",
                           "--grid", "q=0:1:2")
        assert code == 0
        table = rows(out)
        assert len(table) == 4
        assert table[-1]["degenerate"] == "true" and table[-1]["chi"] == ""

    def test_grid_with_auto(self, capsys):
        _, out, _ = run(capsys, "plan-b", "--grid", "d=0.05:0.95:19", "--p", "0.9",
                        "--q", "auto")
        table = rows(out)
        assert len(table) == 19
        assert all(float(r["chi"]) > 1 for r in table)

    def test_json_null_for_degenerate(self, capsys):
        _, out, _ = run(capsys, "plan-b", "--d", "0.5", "--p", "1", "--grid", "q=0:1:2",
                        "--format", "json")
        payload = json.loads(out)
        assert payload["rows"][1]["chi"] is None
        assert payload["rows"][1]["degenerate"] is True

    @pytest.mark.parametrize("argv", [
        ("plan-b", "--d", "0.5", "--p", "0.9"),
        ("plan-b", "--d", "0.5", "--p", "0.9", "--q", "auto", "--grid", "q=0:1:3"),
        ("plan-b", "--d", "0.5", "--p", "0.9", "--q", "0.1", "--grid", "d=0:1:3"),
        ("plan-a", "--grid", "p=0:1:3"),
    ])
    def test_usage_errors(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 2
        assert "error" in err


@pytest.mark.parametrize("argv", [
    ("plan-a", "--d", "1.5"),
    ("plan-a", "--grid", "d=0:1:1"),
    ("plan-a", "--grid", "x=0:1:3"),
    ("plan-a", "--bogus"),
    ("mc", "--d", "0.5", "--p", "0.9", "--q", "auto", "--trials", "0"),
    ("mc", "--d", "0.5", "--p", "0.9", "--q", "auto", "--trials", "10", "--seed", "-1"),
    ("plan-b", "--d", "0.5", "--p", "0.9", "--q", "sometimes"),
])
def test_bad_flags_exit_two(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    assert exc.value.code == 2


def test_optimize(capsys):
    code, out, _ = run(capsys, "optimize")
    assert code == 0
    (row,) = rows(out)
    assert float(row["threshold_d"]) == pytest.approx(0.245, abs=0.005)
    assert float(row["d_min"]) == pytest.approx(0.652, abs=0.005)
    assert float(row["chi_min"]) == pytest.approx(0.55, abs=0.005)


class TestVerify:
    def test_pristine(self, capsys):
        code, out, _ = run(capsys, "verify")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 7 and all(line.startswith("PASS") for line in lines)
        dilation = next(line for line in lines if "dilation_vs_kraus" in line)
        assert float(dilation.split("max_dev=")[1].split()[0]) <= 1e-12

    def test_corrupted_kraus(self, capsys, monkeypatch):
        original = channel.amplitude_damping_kraus

        def broken(d):
            e1, e2 = original(d)
            e1[1, 1] = 1.0 - d  # should be sqrt(1 - d)
            return e1, e2

        monkeypatch.setattr(channel, "amplitude_damping_kraus", broken)
        code, out, err = run(capsys, "verify")
        assert code == 1
        assert "FAIL kraus_completeness" in out
        assert "kraus_completeness" in err

    def test_json(self, capsys):
        _, out, _ = run(capsys, "verify", "--format", "json")
        payload = json.loads(out)
        assert all(r["passed"] for r in payload["rows"])


class TestMonteCarlo:
    ARGS = ("mc", "--trials", "1000000", "--seed", "42", "--d", "0.5", "--p", "0.9",
            "--q", "auto")

    def test_sigma_distance(self, capsys):
        code, out, _ = run(capsys, *self.ARGS)
        assert code == 0
        (row,) = rows(out)
        assert float(row["sigma_distance"]) <= 4
        assert float(row["state_max_dev"]) <= float(row["state_bound"])
        assert row["seed"] == "42" and row["trials"] == "1000000"
        assert float(row["T"]) == pytest.approx(2.6248e-3, rel=1e-4)

    def test_byte_identical_rerun(self, capsys):
        _, first, _ = run(capsys, *self.ARGS)
        _, second, _ = run(capsys, *self.ARGS)
        assert first == second

    def test_json_has_state(self, capsys):
        _, out, _ = run(capsys, "mc", "--d", "0", "--p", "0", "--q", "0", "--trials", "100",
                        "--format", "json")
        payload = json.loads(out)
        row = payload["rows"][0]
        assert payload["meta"]["seed"] == 0
        assert row["t_hat"] == 1.0 and row["sigma_distance"] == 0.0
        np.testing.assert_allclose(row["state_hat"]["re"][0], [0.5, 0, 0, 0.5], atol=1e-15)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "densecoding", "plan-a", "--d", "1"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[0] == HEADER
    assert float(rows(proc.stdout)[0]["chi"]) == pytest.approx(1.0, abs=1e-12)
