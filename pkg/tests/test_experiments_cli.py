import csv
import io
import json

import pytest

from affrep.cli import main
from affrep.experiments import (
    CATALOG,
    ConfigError,
    ExperimentConfig,
    emit,
    exit_code,
    run,
    run_checks,
)


def strip_meta(reports):
    return [{k: v for k, v in r.items() if k != "meta"} for r in reports]


@pytest.mark.parametrize("data", [
    {"m": 4},
    {"degree": 1},
    {"degree": 7},
    {"window": [2, 5]},
    {"window": [0, 2]},
    {"format": "xml"},
    {"experiment": "nope"},
])
def test_invalid_config_rejected(data):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(data).validate()


def test_cli_invalid_config_exit_code(tmp_path, capsys):
    assert main(["run", "prettr", "--m", "5"]) == 2
    assert main(["run-all", "--window", "2", "3"]) == 2
    bad = tmp_path / "cfg.json"
    bad.write_text("[1, 2]")
    assert main(["run-all", "--config", str(bad)]) == 2
    bad.write_text("{not json")
    assert main(["run-all", "--config", str(bad)]) == 2
    assert "invalid configuration" in capsys.readouterr().err


def test_empty_report_list():
    assert emit([], "json") == "[]\n"
    assert exit_code([]) == 0


def test_failing_report_sets_exit_code(tmp_path, capsys):
    report = run(ExperimentConfig("prettr"))
    failing = dict(report, **{"pass": False})
    assert exit_code([report]) == 0
    assert exit_code([report, failing]) == 1
    src = tmp_path / "in.json"
    src.write_text(json.dumps([report, failing]))
    assert main(["report", "--input", str(src), "--format", "md"]) == 1
    out = capsys.readouterr().out
    assert "prettr" in out and "FAIL" in out


def test_single_run_is_deterministic():
    cfg = ExperimentConfig("prettr")
    a, b = run(cfg), run(cfg)
    assert strip_meta([a]) == strip_meta([b])
    assert a["pass"] and a["provenance"] in ("PAPER", "DERIVED")
    assert set(a) >= {"experiment", "parameters", "expected", "computed", "pass", "details", "meta"}


def test_run_writes_json_file(tmp_path):
    out = tmp_path / "sub" / "r.json"
    assert main(["run", "h0-vanish", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data) == 1 and data[0]["experiment"] == "h0-vanish" and data[0]["pass"]


def test_csv_and_markdown_formats():
    reports = [run(ExperimentConfig("prettr"))]
    rows = list(csv.reader(io.StringIO(emit(reports, "csv"))))
    assert rows[0][:3] == ["experiment", "provenance", "pass"]
    assert rows[1][0] == "prettr"
    md = emit(reports, "md")
    assert md.splitlines()[0].startswith("|") and "prettr" in md
    stamped = json.loads(emit(reports, "json", timestamp=True))
    assert "generated" in stamped["meta"]
    with pytest.raises(ConfigError):
        emit(reports, "yaml")


def test_list_command(capsys):
    assert main(["list"]) == 0
    names = [line.split(":")[0] for line in capsys.readouterr().out.splitlines()]
    assert names == sorted(CATALOG)


def test_check_suite_passes(capsys):
    results = run_checks(2, samples=5)
    assert results and all(r["pass"] for r in results)
    assert main(["check"]) == 0
