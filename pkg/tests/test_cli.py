import json
import subprocess
import sys

import numpy as np
import pytest

from liftphase import cli


def run_cli(args):
    return cli.main(args)


class TestSimulate:
    def test_writes_schema_valid_file(self, tmp_path, capsys):
        out = tmp_path / "sim"
        code = run_cli(["simulate", "--signal", "zero", "--method", "series",
                        "--out", str(out)])
        assert code == 0
        doc = json.loads((out / "measurement.json").read_text())
        assert set(doc) == {"grid", "method", "noise", "b"}
        assert len(doc["b"]) == 671
        assert doc["noise"] is None
        assert "b_min" in capsys.readouterr().out

    def test_zero_signal_gives_zero_vector(self, tmp_path):
        out = tmp_path / "sim"
        run_cli(["simulate", "--signal", "zero", "--method", "series",
                 "--out", str(out)])
        doc = json.loads((out / "measurement.json").read_text())
        assert all(v == 0 for v in doc["b"])

    def test_unknown_signal_exits_config(self, tmp_path):
        code = run_cli(["simulate", "--signal", "mystery",
                        "--out", str(tmp_path)])
        assert code == cli.EXIT_CONFIG

    def test_methods_agree(self, tmp_path, b_quad, b_series):
        # session fixtures already hold both routes; compare the artifacts
        a = b_quad["gaussian"].values
        b = b_series["gaussian"].values
        assert np.linalg.norm(a - b) / np.linalg.norm(a) <= 1e-4

    def test_written_file_round_trips_losslessly(self, tmp_path, b_series):
        import liftphase as lp
        out = tmp_path / "sim"
        run_cli(["simulate", "--signal", "gaussian", "--method", "series",
                 "--out", str(out)])
        loaded = lp.SpectrogramData.load(out / "measurement.json")
        assert np.array_equal(loaded.values, b_series["gaussian"].values)
        assert loaded.grid == b_series["gaussian"].grid


class TestRecoverCommand:
    def test_recover_roundtrip(self, tmp_path):
        out = tmp_path / "exp"
        run_cli(["simulate", "--signal", "modulated", "--method", "series",
                 "--out", str(out)])
        code = run_cli(["recover", str(out / "measurement.json"),
                        "--signal", "modulated", "--out", str(out)])
        assert code == 0
        spectrum = json.loads((out / "spectrum.json").read_text())
        assert set(spectrum) == {"frequencies", "f_hat", "diagnostics"}
        assert len(spectrum["f_hat"]) == 61
        csv_text = (out / "reconstruction.csv").read_text()
        assert csv_text.startswith("x,f_true_re,f_true_im,f_rec_re,f_rec_im")

    def test_tampered_measurement_rejected(self, tmp_path):
        out = tmp_path / "exp"
        run_cli(["simulate", "--signal", "zero", "--method", "series",
                 "--out", str(out)])
        doc = json.loads((out / "measurement.json").read_text())
        doc["b"][3] = -0.25
        bad = out / "tampered.json"
        bad.write_text(json.dumps(doc))
        assert run_cli(["recover", str(bad), "--out", str(out)]) == cli.EXIT_CONFIG

    def test_missing_file_is_io_error(self, tmp_path):
        code = run_cli(["recover", str(tmp_path / "nope.json"),
                        "--out", str(tmp_path)])
        assert code == cli.EXIT_IO


class TestExperiment:
    def test_unknown_name(self, tmp_path):
        assert run_cli(["experiment", "paper-9",
                        "--out", str(tmp_path)]) == cli.EXIT_CONFIG

    def test_series_experiment_runs_and_meets_bound(self, tmp_path):
        out = tmp_path / "exp"
        code = run_cli(["experiment", "paper-1", "--method", "series",
                        "--out", str(out)])
        assert code == 0
        metrics = json.loads((out / "metrics.json").read_text())
        assert metrics["aligned_relative_error"] <= 5e-3
        assert metrics["rank"] == 671
        for name in ("measurement.json", "spectrum.json",
                     "reconstruction.csv", "metrics.json"):
            assert (out / name).exists()

    def test_zero_noise_flag_is_noop(self, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        run_cli(["experiment", "paper-1", "--method", "series",
                 "--noise-level", "0", "--out", str(out_a)])
        run_cli(["experiment", "paper-1", "--method", "series",
                 "--out", str(out_b)])
        for name in ("measurement.json", "spectrum.json",
                     "reconstruction.csv", "metrics.json"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_noise_level_recorded_in_artifact(self, tmp_path):
        out = tmp_path / "noisy"
        run_cli(["experiment", "paper-1", "--method", "series",
                 "--noise-level", "0.001", "--seed", "5", "--out", str(out)])
        doc = json.loads((out / "measurement.json").read_text())
        assert doc["noise"] == {"seed": 5, "level": 0.001}


class TestConfigResolution:
    def test_config_file_applies_and_flags_override(self, tmp_path):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps({
            "signal": "modulated",
            "method": "series",
            "recovery": {"refine_iterations": 0},
        }))
        out = tmp_path / "out"
        code = run_cli(["simulate", "--config", str(cfg_path),
                        "--signal", "zero", "--out", str(out)])
        assert code == 0
        doc = json.loads((out / "measurement.json").read_text())
        assert doc["method"] == "series"
        assert all(v == 0 for v in doc["b"])  # flag overrode the file signal

    def test_bad_config_key_rejected(self, tmp_path):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps({"recovery": {"unknown_knob": 1}}))
        assert run_cli(["simulate", "--config", str(cfg_path),
                        "--out", str(tmp_path)]) == cli.EXIT_CONFIG

    def test_bad_json_config(self, tmp_path):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text("{not json")
        assert run_cli(["simulate", "--config", str(cfg_path),
                        "--out", str(tmp_path)]) == cli.EXIT_CONFIG

    def test_thread_cap_env(self, monkeypatch):
        monkeypatch.setenv("LIFTPHASE_THREADS", "4")
        assert cli.thread_cap() == 4
        monkeypatch.setenv("LIFTPHASE_THREADS", "junk")
        assert cli.thread_cap() == 1
        monkeypatch.delenv("LIFTPHASE_THREADS")
        assert cli.thread_cap() == 1


class TestSubprocessEntry:
    def test_console_invocation(self, tmp_path):
        # exercise the installed module entry point end to end
        result = subprocess.run(
            [sys.executable, "-m", "liftphase.cli", "simulate",
             "--signal", "zero", "--method", "series", "--out", str(tmp_path)],
            capture_output=True, text=True, timeout=300)
        assert result.returncode == 0
        assert (tmp_path / "measurement.json").exists()
