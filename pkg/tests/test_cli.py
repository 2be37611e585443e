import json

import pytest
from click.testing import CliRunner

from waveheatnet import verify as vf
from waveheatnet.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def test_transfer_writes_reproducible_csv(runner, tmp_path):
    args = ["transfer", "--num-points", "6", "--s-min", "2", "--s-max", "50",
            "--betas", "1,2,3"]
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        result = runner.invoke(main, args + ["--out", str(out)])
        assert result.exit_code == 0, result.output
    assert (out1 / "transfer.csv").read_bytes() == \
        (out2 / "transfer.csv").read_bytes()
    first = (out1 / "transfer.csv").read_text().splitlines()
    assert first[0].startswith("# config: ")
    assert first[1].split(",")[:4] == ["s", "eta", "mu", "bound"]
    sidecar = json.loads((out1 / "transfer.json").read_text())
    assert sidecar["config"]["betas"] == [1.0, 2.0, 3.0]


def test_config_file_with_flag_override(runner, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"betas": [1, 2, 3], "num_points": 4,
                               "s_min": 3.0, "s_max": 30.0}))
    result = runner.invoke(main, [
        "transfer", "--config", str(cfg), "--num-points", "6",
        "--out", str(tmp_path / "o")])
    assert result.exit_code == 0, result.output
    sidecar = json.loads((tmp_path / "o" / "transfer.json").read_text())
    assert sidecar["config"]["num_points"] == 6  # flag wins
    assert sidecar["config"]["s_min"] == 3.0     # file survives


def test_resolvent_subcommand(runner, tmp_path):
    result = runner.invoke(main, [
        "resolvent", "--n", "16", "--num-points", "6",
        "--variant", "wave-damped", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "resolvent_wave_damped.csv").exists()
    assert (tmp_path / "resolvent_wave_damped.json").exists()


def test_simulate_subcommand(runner, tmp_path):
    result = runner.invoke(main, [
        "simulate", "--n", "16", "--dt", "0.01", "--T", "2.0",
        "--t-lo", "0.5", "--t-hi", "2.0", "--data", "classical",
        "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    lines = (tmp_path / "trace_full_classical.csv").read_text().splitlines()
    assert lines[1] == "t,E"
    assert lines[2].startswith("0,")


def test_usage_errors(runner, tmp_path):
    bad_betas = runner.invoke(main, ["transfer", "--betas", "1,2"])
    assert bad_betas.exit_code != 0
    bad_window = runner.invoke(main, ["transfer", "--s-min", "5",
                                      "--s-max", "1"])
    assert bad_window.exit_code != 0
    bad_variant = runner.invoke(main, ["resolvent", "--variant", "plate"])
    assert bad_variant.exit_code != 0


def test_verify_all_exit_codes(runner, tmp_path, monkeypatch):
    monkeypatch.setattr(vf, "run_all", lambda scale: [
        vf.CriterionResult("A0", "canned pass", True, {})])
    ok = runner.invoke(main, ["verify-all", "--quick",
                              "--out", str(tmp_path / "ok")])
    assert ok.exit_code == 0, ok.output
    assert "[PASS] A0" in ok.output

    monkeypatch.setattr(vf, "run_all", lambda scale: [
        vf.CriterionResult("A0", "canned fail", False, {}, detail="why")])
    bad = runner.invoke(main, ["verify-all", "--quick",
                               "--out", str(tmp_path / "bad")])
    assert bad.exit_code == 1
    assert "[FAIL] A0" in bad.output
    assert "why" in bad.output
    summary = json.loads((tmp_path / "bad" / "verify.json").read_text())
    assert summary["all_passed"] is False
