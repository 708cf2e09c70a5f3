import json

import pytest
from typer.testing import CliRunner

from kaehlerlab.commands.checks import CATALOG
from kaehlerlab.main import app

runner = CliRunner()

PASSING = """
[ambient]
kind = "flat"

[immersion]
builtin = "CRW"

[sample]
count = 2
seed = 3

[checks]
names = ["crwarp.thm3", "crwarp.w8"]
"""


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.setenv("KAEHLERLAB_OUTPUT_DIR", str(tmp_path / "reports"))
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _write(directory, name, text):
    path = directory / name
    path.write_text(text, encoding="utf-8")
    return path


def test_list_shows_fixtures_and_checks():
    result = runner.invoke(app, ["list"])
    assert result.exit_code == 0
    assert "SPH3" in result.output
    assert "crwarp.thm3" in result.output
    assert "Thm 1 (t1)" in result.output
    assert "Reference" in result.output


def test_every_check_lists_its_reference():
    result = runner.invoke(app, ["list"])
    for spec in CATALOG.values():
        assert spec.reference, spec.name
        assert spec.reference in result.output


def test_verify_passing_run(workdir):
    config = _write(workdir, "crw.toml", PASSING)
    result = runner.invoke(app, ["verify", str(config)])
    assert result.exit_code == 0, result.output
    assert "All records passed: exit status 0" in result.output
    saved = json.loads((workdir / "reports" / "crw.json").read_text(encoding="utf-8"))
    assert saved["summary"]["total"] == 4
    assert [r["check"] for r in saved["records"]] == ["crwarp.thm3"] * 2 + ["crwarp.w8"] * 2


def test_verify_json_output(workdir):
    config = _write(workdir, "crw.toml", PASSING)
    result = runner.invoke(app, ["verify", str(config), "--format", "json", "--output", "out.json"])
    assert result.exit_code == 0, result.output
    printed = json.loads(result.output)
    assert printed["summary"]["failed"] == 0
    assert (workdir / "out.json").exists()


def test_verify_failing_run_exits_one(workdir):
    config = _write(workdir, "sphere.toml", '[immersion]\nbuiltin = "SPH3"\n[checks]\nnames = ["chen.equality_form"]\n')
    result = runner.invoke(app, ["verify", str(config)])
    assert result.exit_code == 1
    assert "record(s) failed: exit status 1" in result.output


def test_verify_rejects_unknown_check(workdir):
    config = _write(workdir, "bad.toml", '[checks]\nnames = ["chen.thm9"]\n')
    result = runner.invoke(app, ["verify", str(config)])
    assert result.exit_code == 1
    assert "Unknown check 'chen.thm9'" in result.output


def test_verify_rejects_bad_tolerance_scale(workdir):
    config = _write(workdir, "crw.toml", PASSING)
    result = runner.invoke(app, ["verify", str(config), "--tol-scale", "0"])
    assert result.exit_code == 1


def test_report_command(workdir):
    config = _write(workdir, "crw.toml", PASSING)
    assert runner.invoke(app, ["verify", str(config)]).exit_code == 0
    result = runner.invoke(app, ["report", str(workdir / "reports" / "crw.json")])
    assert result.exit_code == 0
    assert "Summary: total=4 passed=4 failed=0" in result.output
    missing = runner.invoke(app, ["report", str(workdir / "missing.json")])
    assert missing.exit_code == 1


def test_init_writes_a_runnable_config(workdir):
    result = runner.invoke(app, ["init"])
    assert result.exit_code == 0
    assert (workdir / "kaehlerlab.toml").exists()
    assert runner.invoke(app, ["init"]).exit_code == 1
    assert runner.invoke(app, ["init", "--force"]).exit_code == 0
    verified = runner.invoke(app, ["verify", "kaehlerlab.toml", "--jobs", "2"])
    assert verified.exit_code == 0, verified.output
