"""
End-to-end tests for the pwtest command line
"""

import json

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

from pwtest import __version__
from pwtest.cli import EXIT_ACCEPT, EXIT_DIMENSION, EXIT_DIVERGENCE, EXIT_OTHER, EXIT_REJECT, EXIT_USAGE, cli
from pwtest.core import SampleSet
from pwtest.orchestrators.cli_orchestrator import CLIOrchestrator
from pwtest.utils import write_samples

QUICK_PW = ["--iters", "20", "--hidden", "8", "--batch", "16"]


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def sample_files(tmp_path, rng):
    """Two files from the same distribution plus one far away and one of another dimension"""
    paths = {}
    for name, data in {
        "a": rng.normal(size=(100, 2)),
        "b": rng.normal(size=(100, 2)),
        "far": rng.normal(loc=10.0, size=(100, 2)),
        "wide": rng.normal(size=(100, 3)),
        "line": rng.normal(size=(60, 1)),
    }.items():
        paths[name] = str(write_samples(SampleSet(data), tmp_path / f"{name}.csv"))
    return paths


def invoke(runner, args):
    return runner.invoke(cli, args, catch_exceptions=False)


class TestGenerate:
    def test_writes_csv_and_manifest(self, runner, tmp_path):
        out = tmp_path / "blob.csv"
        result = invoke(runner, ["generate", "--family", "blob", "--role", "nu", "--n", "1600",
                                 "--seed", "7", "--out", str(out)])
        assert result.exit_code == 0
        frame = pd.read_csv(out)
        assert list(frame.columns) == ["x1", "x2"]
        assert len(frame) == 1600
        manifest = json.loads((tmp_path / "blob.csv.manifest.json").read_text())
        assert manifest["command"] == "generate"
        assert manifest["seed"] == 7

    def test_byte_identical_reruns(self, runner, tmp_path):
        args = ["generate", "--family", "hdgm", "--d", "4", "--n", "50", "--seed", "3"]
        invoke(runner, args + ["--out", str(tmp_path / "one.csv")])
        invoke(runner, args + ["--out", str(tmp_path / "two.csv")])
        assert (tmp_path / "one.csv").read_bytes() == (tmp_path / "two.csv").read_bytes()

    def test_blob_dimension_is_usage_error(self, runner, tmp_path):
        result = invoke(runner, ["generate", "--family", "blob", "--d", "3", "--n", "10",
                                 "--out", str(tmp_path / "x.csv")])
        assert result.exit_code == EXIT_USAGE
        assert not (tmp_path / "x.csv").exists()


class TestPw:
    def test_identical_files(self, runner, tmp_path, sample_files):
        out_dir = tmp_path / "run"
        result = invoke(runner, ["pw", "--x", sample_files["a"], "--y", sample_files["a"], *QUICK_PW,
                                 "--out-dir", str(out_dir)])
        assert result.exit_code == 0
        estimate = json.loads((out_dir / "estimate.json").read_text())
        assert estimate["value"] == pytest.approx(0.0, abs=1e-12)
        assert len(pd.read_csv(out_dir / "trace.csv")) == 20
        assert list(pd.read_csv(out_dir / "projected_x.csv").columns) == ["x1"]

    def test_kde_export(self, runner, tmp_path, sample_files):
        out_dir = tmp_path / "run"
        result = invoke(runner, ["pw", "--x", sample_files["a"], "--y", sample_files["far"], *QUICK_PW,
                                 "--kde", "--grid-points", "64", "--out-dir", str(out_dir)])
        assert result.exit_code == 0
        assert len(pd.read_csv(out_dir / "kde_x.csv")) == 64

    def test_kde_needs_k_one(self, runner, tmp_path, sample_files):
        out_dir = tmp_path / "run"
        result = invoke(runner, ["pw", "--x", sample_files["a"], "--y", sample_files["b"], *QUICK_PW,
                                 "--k", "2", "--kde", "--out-dir", str(out_dir)])
        assert result.exit_code == EXIT_USAGE
        assert not out_dir.exists()

    def test_generated_pair(self, runner, tmp_path):
        result = invoke(runner, ["pw", "--family", "gauss-var", "--d", "3", "--n", "40", *QUICK_PW,
                                 "--out-dir", str(tmp_path / "run")])
        assert result.exit_code == 0

    @pytest.mark.parametrize("init", ["coordinate", "random"])
    def test_init_is_recorded(self, runner, tmp_path, sample_files, init):
        out_dir = tmp_path / "run"
        result = invoke(runner, ["pw", "--x", sample_files["a"], "--y", sample_files["far"], *QUICK_PW,
                                 "--init", init, "--out-dir", str(out_dir)])
        assert result.exit_code == 0
        assert json.loads((out_dir / "estimate.json").read_text())["config"]["init"] == init

    def test_dimension_mismatch(self, runner, tmp_path, sample_files):
        result = invoke(runner, ["pw", "--x", sample_files["a"], "--y", sample_files["wide"], *QUICK_PW,
                                 "--out-dir", str(tmp_path / "run")])
        assert result.exit_code == EXIT_DIMENSION

    def test_divergence(self, runner, tmp_path):
        x, y = tmp_path / "x.csv", tmp_path / "y.csv"
        x.write_text("x1\n1e308\n")
        y.write_text("x1\n-1e308\n")
        result = invoke(runner, ["pw", "--x", str(x), "--y", str(y), *QUICK_PW,
                                 "--out-dir", str(tmp_path / "run")])
        assert result.exit_code == EXIT_DIVERGENCE

    def test_invalid_penalty(self, runner, tmp_path, sample_files):
        result = invoke(runner, ["pw", "--x", sample_files["a"], "--y", sample_files["b"], "--lambda", "0",
                                 "--out-dir", str(tmp_path / "run")])
        assert result.exit_code == EXIT_USAGE

    def test_missing_file(self, runner, tmp_path, sample_files):
        result = invoke(runner, ["pw", "--x", str(tmp_path / "nope.csv"), "--y", sample_files["b"],
                                 "--out-dir", str(tmp_path / "run")])
        assert result.exit_code == EXIT_USAGE

    def test_needs_inputs(self, runner, tmp_path):
        result = invoke(runner, ["pw", "--out-dir", str(tmp_path / "run")])
        assert result.exit_code == EXIT_USAGE


class TestTestCommand:
    def test_accept_identical(self, runner, tmp_path, sample_files):
        out = tmp_path / "verdict.json"
        result = invoke(runner, ["test", "--x", sample_files["a"], "--y", sample_files["a"], *QUICK_PW,
                                 "--out", str(out)])
        assert result.exit_code == EXIT_ACCEPT
        verdict = json.loads(out.read_text())
        assert verdict["decision"] == "ACCEPT_H0"
        assert verdict["details"]["sigmoid"] is True

    def test_reject_separated(self, runner, tmp_path, sample_files):
        out = tmp_path / "verdict.json"
        result = invoke(runner, ["test", "--x", sample_files["a"], "--y", sample_files["far"],
                                 "--method", "mmd", "--out", str(out)])
        assert result.exit_code == EXIT_REJECT
        assert json.loads(out.read_text())["decision"] == "REJECT_H0"

    def test_permutation_mode(self, runner, tmp_path, sample_files):
        out = tmp_path / "verdict.json"
        result = invoke(runner, ["test", "--x", sample_files["a"], "--y", sample_files["far"],
                                 "--method", "mmd", "--mode", "permutation", "--permutations", "19",
                                 "--out", str(out)])
        assert result.exit_code == EXIT_REJECT
        verdict = json.loads(out.read_text())
        assert verdict["p_value"] == pytest.approx(0.05)
        assert verdict["details"]["sigmoid"] is False

    @pytest.mark.parametrize("family, expected", [
        ("blob", False),
        ("hdgm", False),
        ("laplace-shift", True),
        ("gauss-var", True),
    ])
    def test_sigmoid_default_follows_family(self, runner, tmp_path, family, expected):
        out = tmp_path / "verdict.json"
        result = invoke(runner, ["test", "--family", family, "--n", "20", "--method", "mmd",
                                 "--out", str(out)])
        assert result.exit_code in (EXIT_ACCEPT, EXIT_REJECT)
        assert json.loads(out.read_text())["details"]["sigmoid"] is expected

    def test_non_utf8_file_is_usage_error(self, runner, tmp_path, sample_files):
        path = tmp_path / "latin1.csv"
        path.write_bytes(b"x1,x2\n0.5,1.0\n\xe9,2.0\n")
        result = invoke(runner, ["test", "--x", str(path), "--y", sample_files["b"], "--method", "mmd",
                                 "--out", str(tmp_path / "v.json")])
        assert result.exit_code == EXIT_USAGE
        assert not (tmp_path / "v.json").exists()

    def test_unexpected_error_exit_code(self, runner, tmp_path, sample_files, monkeypatch):
        def boom(self, *args, **kwargs):
            raise RuntimeError("worker crashed")

        monkeypatch.setattr(CLIOrchestrator, "test", boom)
        result = invoke(runner, ["test", "--x", sample_files["a"], "--y", sample_files["b"],
                                 "--out", str(tmp_path / "v.json")])
        assert result.exit_code == EXIT_OTHER

    @pytest.mark.parametrize("alpha", ["1.5", "0", "1"])
    def test_alpha_out_of_range(self, runner, tmp_path, sample_files, alpha):
        result = invoke(runner, ["test", "--x", sample_files["a"], "--y", sample_files["b"],
                                 "--alpha", alpha, "--out", str(tmp_path / "v.json")])
        assert result.exit_code == EXIT_USAGE

    def test_invalid_config_file(self, runner, tmp_path, sample_files):
        config = tmp_path / "config.yaml"
        config.write_text("tester:\n  alpha: 2\n")
        result = invoke(runner, ["--config", str(config), "test", "--x", sample_files["a"],
                                 "--y", sample_files["b"], "--out", str(tmp_path / "v.json")])
        assert result.exit_code == EXIT_USAGE

    def test_config_file_is_used(self, runner, tmp_path, sample_files):
        config = tmp_path / "config.yaml"
        config.write_text("tester:\n  method: mmd\n  alpha: 0.1\n")
        out = tmp_path / "v.json"
        invoke(runner, ["--config", str(config), "test", "--x", sample_files["a"], "--y", sample_files["b"],
                        "--out", str(out)])
        verdict = json.loads(out.read_text())
        assert verdict["method"] == "mmd"
        assert verdict["alpha"] == 0.1


class TestOtherCommands:
    def test_sweep_lambda(self, runner, tmp_path, sample_files):
        out = tmp_path / "sweep.csv"
        result = invoke(runner, ["sweep-lambda", "--x", sample_files["a"], "--y", sample_files["far"],
                                 "--lambda", "1", "--lambda", "10", *QUICK_PW, "--out", str(out)])
        assert result.exit_code == 0
        frame = pd.read_csv(out)
        assert list(frame.columns) == ["penalty", "value", "defect"]
        assert list(frame["penalty"]) == [1.0, 10.0]

    def test_sweep_rejects_zero_penalty(self, runner, tmp_path, sample_files):
        result = invoke(runner, ["sweep-lambda", "--x", sample_files["a"], "--y", sample_files["b"],
                                 "--lambda", "0", "--out", str(tmp_path / "sweep.csv")])
        assert result.exit_code == EXIT_USAGE

    def test_thresholds(self, runner, tmp_path, sample_files):
        out = tmp_path / "thr.json"
        result = invoke(runner, ["thresholds", "--x", sample_files["a"], "--y", sample_files["b"],
                                 "--alpha", "0.05", "--out", str(out)])
        assert result.exit_code == 0
        report = json.loads(out.read_text())
        assert report["threshold"] == pytest.approx(sum(report["terms"].values()), rel=1e-12)

    def test_debug_run_writes_same_report(self, runner, tmp_path, sample_files):
        args = ["thresholds", "--x", sample_files["a"], "--y", sample_files["b"]]
        invoke(runner, args + ["--out", str(tmp_path / "quiet.json")])
        result = invoke(runner, ["--log-level", "DEBUG"] + args + ["--out", str(tmp_path / "debug.json")])
        assert result.exit_code == 0
        assert (tmp_path / "quiet.json").read_bytes() == (tmp_path / "debug.json").read_bytes()

    def test_roc_is_reproducible(self, runner, tmp_path):
        args = ["roc", "--family", "gauss-var", "--d", "3", "--n", "10", "--trials", "20",
                "--method", "mmd", "--seed", "3"]
        assert invoke(runner, args + ["--out", str(tmp_path / "r1.csv")]).exit_code == 0
        invoke(runner, args + ["--out", str(tmp_path / "r2.csv")])
        assert (tmp_path / "r1.csv").read_bytes() == (tmp_path / "r2.csv").read_bytes()
        summary = json.loads((tmp_path / "r1.json").read_text())
        assert 0.0 <= summary["auc"] <= 1.0

    def test_roc_needs_twenty_trials(self, runner, tmp_path):
        result = invoke(runner, ["roc", "--family", "gauss-var", "--d", "3", "--n", "10", "--trials", "5",
                                 "--out", str(tmp_path / "r.csv")])
        assert result.exit_code == EXIT_USAGE

    def test_calibrate(self, runner, tmp_path):
        out = tmp_path / "cal.csv"
        result = invoke(runner, ["calibrate", "--family", "gauss-var", "--d", "2", "--n", "10",
                                 "--trials", "2", "--method", "mmd", "--out", str(out)])
        assert result.exit_code == 0
        assert len(pd.read_csv(out)) == 2
        assert json.loads((tmp_path / "cal.json").read_text())["trials"] == 2

    def test_convergence(self, runner, tmp_path):
        out = tmp_path / "conv.csv"
        result = invoke(runner, ["convergence", "--family", "gauss-var", "--d", "2", "--sizes", "10,20",
                                 "--seeds", "2", "--iters", "5", "--hidden", "4", "--out", str(out)])
        assert result.exit_code == 0
        assert len(pd.read_csv(out)) == 4
        assert list(pd.read_csv(tmp_path / "conv_medians.csv")["n"]) == [10, 20]

    def test_kde(self, runner, tmp_path, sample_files):
        out = tmp_path / "kde.csv"
        result = invoke(runner, ["kde", "--input", sample_files["line"], "--grid-points", "32",
                                 "--out", str(out)])
        assert result.exit_code == 0
        frame = pd.read_csv(out)
        assert list(frame.columns) == ["t", "density"]
        assert len(frame) == 32
        assert np.all(frame["density"] >= 0)

    def test_kde_rejects_two_columns(self, runner, tmp_path, sample_files):
        result = invoke(runner, ["kde", "--input", sample_files["a"], "--out", str(tmp_path / "kde.csv")])
        assert result.exit_code == EXIT_DIMENSION

    def test_version(self, runner):
        result = invoke(runner, ["version"])
        assert result.exit_code == 0
        assert __version__ in result.output
