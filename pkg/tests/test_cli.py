import json

import pytest

from uav_iab.cli import EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_OK, main

FAST = ["--trials", "1", "--csi", "2", "--grid-step", "500"]


def test_run_writes_outputs(tmp_path, capsys):
    assert main(["run", "--out", str(tmp_path), "--seed", "5", *FAST]) == EXIT_OK
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["config"]["master_seed"] == 5
    assert {"uav", "baseline"} <= set(summary["arms"])
    assert (tmp_path / "trace_uav.csv").exists()


def test_baseline_and_sweep(tmp_path):
    assert main(["baseline", "--out", str(tmp_path / "b"), *FAST]) == EXIT_OK
    assert main(["sweep", "--out", str(tmp_path / "s"), "--altitudes", "200,500",
                 "--scenario", "B", *FAST]) == EXIT_OK
    assert (tmp_path / "s" / "sum_rate_vs_altitude.csv").exists()


def test_validate(tmp_path, capsys):
    assert main(["validate"]) == EXIT_OK
    assert main(["validate", "--trials", "0"]) == EXIT_CONFIG
    assert "n_trials" in capsys.readouterr().err


def test_bad_config_file(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"grid_step": -3}')
    assert main(["run", "--config", str(p)]) == EXIT_CONFIG
    assert main(["run", "--config", str(tmp_path / "missing.json")]) == EXIT_CONFIG


def test_bad_flag_values():
    with pytest.raises(SystemExit) as e:
        main(["sweep", "--altitudes", "high,low"])
    assert e.value.code == 2
    assert main(["sweep", "--altitudes", "50", *FAST]) == EXIT_CONFIG


def test_infeasible_everywhere_exit_code(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"radio": {"sinr_threshold_ue_db": 80, "sinr_threshold_bh_db": 80}}))
    code = main(["run", "--config", str(p), "--out", str(tmp_path / "o"), *FAST])
    assert code == EXIT_INFEASIBLE
