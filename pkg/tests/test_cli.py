"""End-to-end tests of the command line interface.

Commands run in-process through main() for speed; one test goes through a
real subprocess to pin the console entry point and exit codes.
"""

import csv
import hashlib
import json
import subprocess
import sys

import numpy as np
import pytest

from hdlp.cli import main
from hdlp.panel import load_csv


def sha256(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


class TestSimulate:
    def test_writes_csv_and_manifest(self, tmp_path):
        out = tmp_path / "series.csv"
        rc = main(["simulate", "--n", "4", "--t", "50", "--seed", "3",
                   "--out", str(out)])
        assert rc == 0
        series = load_csv(str(out))
        assert series.values.shape == (51, 4)  # one presample row
        manifest = json.loads((tmp_path / "series.csv.manifest.json")
                              .read_text())
        assert manifest["command"] == "simulate"
        assert manifest["arguments"]["seed"] == 3
        assert manifest["outputs"][out.name] == "sha256:" + sha256(out)

    def test_same_seed_same_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["simulate", "--n", "4", "--t", "40", "--seed", "9",
              "--out", str(a)])
        main(["simulate", "--n", "4", "--t", "40", "--seed", "9",
              "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_odd_n_exits_2(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--n", "5", "--t", "40",
                  "--out", str(tmp_path / "x.csv")])
        assert exc.value.code == 2


class TestReplicate:
    def test_outputs_and_determinism(self, tmp_path):
        d1, d2 = tmp_path / "one", tmp_path / "two"
        args = ["replicate", "--n", "4", "--t", "150", "--r", "3",
                "--horizons", "1,2", "--h-select", "1", "--p-max", "3",
                "--seed", "10"]
        assert main(args + ["--out-dir", str(d1)]) == 0
        assert main(args + ["--out-dir", str(d2), "--workers", "2"]) == 0
        for name in ("summary.json", "summary.csv"):
            assert (d1 / name).read_bytes() == (d2 / name).read_bytes()
        summary = json.loads((d1 / "summary.json").read_text())
        assert summary["scenario"]["n_rep"] == 3
        assert "wall_time" not in summary
        manifest = json.loads((d1 / "manifest.json").read_text())
        assert manifest["wall_time_s"] > 0
        assert manifest["outputs"]["summary.json"] == \
            "sha256:" + sha256(d1 / "summary.json")

    def test_csv_is_long_format(self, tmp_path):
        out = tmp_path / "rep"
        main(["replicate", "--n", "4", "--t", "150", "--r", "2",
              "--horizons", "1", "--h-select", "1", "--p-max", "2",
              "--seed", "4", "--out-dir", str(out)])
        with open(out / "summary.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["N", "T", "metric", "h", "value"]
        metrics = {row[2] for row in rows[1:]}
        assert "S" in metrics and "SL|sel1" in metrics


class TestIrf:
    @pytest.fixture
    def data_csv(self, tmp_path):
        out = tmp_path / "data.csv"
        main(["simulate", "--n", "4", "--t", "250", "--seed", "5",
              "--out", str(out)])
        return out

    def test_fixed_lag_outputs(self, tmp_path, data_csv):
        out = tmp_path / "irf"
        rc = main(["irf", "--data", str(data_csv), "--p", "2",
                   "--horizons", "1,3", "--level", "0.9",
                   "--out-dir", str(out)])
        assert rc == 0
        blob = json.loads((out / "irf.json").read_text())
        assert blob["lags"] == 2 and blob["level"] == 0.9
        assert [b["h"] for b in blob["irf"]] == [1, 3]
        point = np.array(blob["irf"][0]["point"])
        assert point.shape == (4, 4)
        # JSON uses null for entries outside the selected support
        ses = blob["irf"][0]["se"]
        flat = [v for row in ses for v in row]
        assert all(v is None or isinstance(v, float) for v in flat)
        with open(out / "irf.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["h", "response_var", "shock_var", "estimate",
                           "se", "lower", "upper", "selected"]
        assert len(rows) == 1 + 2 * 16

    def test_unselected_rows_have_empty_cells(self, tmp_path, data_csv):
        out = tmp_path / "irf2"
        main(["irf", "--data", str(data_csv), "--p", "1",
              "--horizons", "2", "--out-dir", str(out)])
        with open(out / "irf.csv", newline="") as fh:
            rows = list(csv.reader(fh))[1:]
        for row in rows:
            if row[7] == "0":
                assert row[4] == row[5] == row[6] == ""
            else:
                float(row[4])  # parses

    def test_select_lag_records_choice(self, tmp_path, data_csv):
        out = tmp_path / "irf3"
        rc = main(["irf", "--data", str(data_csv), "--select-lag",
                   "--p-max", "3", "--h-select", "1", "--horizons", "1",
                   "--out-dir", str(out)])
        assert rc == 0
        blob = json.loads((out / "irf.json").read_text())
        assert blob["lags"] in (1, 2, 3)
        # the chosen order shapes the output: p*N shock columns upstream,
        # and the CSV row count stays N*N per horizon regardless
        with open(out / "irf.csv", newline="") as fh:
            assert len(list(csv.reader(fh))) == 1 + 16

    def test_p_and_select_lag_conflict(self, tmp_path, data_csv):
        with pytest.raises(SystemExit) as exc:
            main(["irf", "--data", str(data_csv), "--p", "2",
                  "--select-lag", "--out-dir", str(tmp_path / "x")])
        assert exc.value.code == 2

    def test_neither_p_nor_select_lag(self, tmp_path, data_csv):
        with pytest.raises(SystemExit) as exc:
            main(["irf", "--data", str(data_csv),
                  "--out-dir", str(tmp_path / "x")])
        assert exc.value.code == 2

    def test_missing_file_exits_1(self, tmp_path):
        rc = main(["irf", "--data", str(tmp_path / "absent.csv"),
                   "--p", "1", "--out-dir", str(tmp_path / "x")])
        assert rc == 1

    def test_standardize_and_no_header(self, tmp_path):
        raw = tmp_path / "raw.csv"
        rng = np.random.default_rng(2)
        with open(raw, "w") as fh:
            for row in rng.standard_normal((120, 3)) * 5:
                fh.write(",".join(f"{v:.6f}" for v in row) + "\n")
        out = tmp_path / "irf4"
        rc = main(["irf", "--data", str(raw), "--no-header",
                   "--standardize", "--p", "1", "--horizons", "1",
                   "--out-dir", str(out)])
        assert rc == 0


class TestEntryPoint:
    def test_module_invocation_and_exit_codes(self, tmp_path):
        out = tmp_path / "s.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "hdlp.cli", "simulate", "--n", "2",
             "--t", "30", "--out", str(out)],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert out.exists()
        bad = subprocess.run(
            [sys.executable, "-m", "hdlp.cli", "simulate", "--n", "3",
             "--t", "30", "--out", str(tmp_path / "t.csv")],
            capture_output=True, text=True)
        assert bad.returncode == 2
        assert "even" in bad.stderr
