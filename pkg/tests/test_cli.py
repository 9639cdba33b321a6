import json
import logging

import pytest
import yaml

from main import build_parser, main

from .conftest import GOLDEN_DIR, assert_matches_golden

PINNED = str(GOLDEN_DIR / "pinned.yaml")


@pytest.fixture(autouse=True)
def detach_cli_logging():
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_irssim_handler", False):
            root.removeHandler(handler)


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "small.yaml"
    path.write_text(yaml.safe_dump({
        "antennas": 4,
        "irs_side": 3,
        "uplink_devices": 3,
        "downlink_devices": 3,
        "uplink_irs": 3,
        "downlink_irs": 3,
        "gains_dbi": [25.0, 25.0, 25.0, 25.0],
        "trials": 2,
        "log_level": "WARNING",
    }))
    return path


def _error_record(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


def test_single_trial_to_file(config_file, tmp_path):
    out = tmp_path / "trial.json"
    assert main(["--config", str(config_file), "--seed", "3", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["seed"] == 3
    assert [r["algorithm"] for r in data["results"]] == ["gs", "es", "greedy", "random"]


def test_reruns_are_byte_identical(config_file, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["--config", str(config_file), "--seed", "9", "--out", str(a)])
    main(["--config", str(config_file), "--seed", "9", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_sweep_to_stdout(config_file, capsys):
    code = main(["--config", str(config_file), "--sweep", "power_dbm", "--values", "10,20",
                 "--trials", "1", "--algos", "gs,random"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "axis_value,algorithm,mean_rate,stderr,mean_tau,trials"
    assert len(lines) == 5


def test_trajectory_and_csv_format(config_file, capsys):
    assert main(["--config", str(config_file), "--trajectory", "1", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("seed,interval,algorithm")
    assert {line.split(",")[1] for line in lines[1:]} == {"0", "1"}


def test_complexity_table(capsys):
    assert main(["--complexity", "2,3", "--trials", "2", "--log-level", "WARNING"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "irs,es_evaluations,gs_proposals,trials"
    assert lines[1].startswith("2,2,")


def test_sweep_requires_values(config_file, capsys):
    with pytest.raises(SystemExit) as info:
        main(["--config", str(config_file), "--sweep", "power_dbm"])
    assert info.value.code == 2
    record = _error_record(capsys)
    assert record == {"error": "UsageError", "message": "--sweep needs --values"}


def test_unknown_algorithm_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        build_parser().parse_args(["--algos", "gs,hungarian"])
    assert info.value.code == 2
    record = _error_record(capsys)
    assert record["error"] == "UsageError"
    assert "--algos" in record["message"]


def test_missing_config_reports_error_record(tmp_path, capsys):
    assert main(["--config", str(tmp_path / "missing.yaml")]) == 1
    record = _error_record(capsys)
    assert record["error"] == "ConfigError"
    assert "missing.yaml" in record["message"]


def test_unwritable_output_reports_path(config_file, tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("x")
    target = blocker / "trial.json"
    assert main(["--config", str(config_file), "--out", str(target)]) == 1
    record = _error_record(capsys)
    assert record["error"] == "EmitError"
    assert record["path"] == str(target)


def test_pinned_trial_matches_golden(tmp_path):
    out = tmp_path / "trial.json"
    assert main(["--config", PINNED, "--out", str(out)]) == 0
    assert_matches_golden("trial.json", out.read_bytes().decode("utf-8"))


def test_pinned_sweep_matches_golden(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["--config", PINNED, "--sweep", "power_dbm", "--values", "10,17,23",
                 "--out", str(out)]) == 0
    assert_matches_golden("sweep.csv", out.read_bytes().decode("utf-8"))
