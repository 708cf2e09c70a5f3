import pytest

from kaehlerlab.commands.verify import GLOBAL_INDEX, run_config
from kaehlerlab.config import parse_config
from kaehlerlab.errors import ConfigError

CRW_RUN = """
[ambient]
kind = "flat"

[immersion]
builtin = "CRW"

[sample]
count = 3
seed = 7

[checks]
names = ["crwarp.split", "crwarp.w8", "crwarp.lemma2", "crwarp.thm3", "crwarp.thm4_report", "submanifold.classify"]
"""

AMBIENT_RUN = """
[ambient]
kind = "fubini_study"

[sample]
count = 3
seed = 1

[checks]
names = ["ambient.kaehler", "ambient.curvature", "bochner.residual", "bochner.w33"]
"""


def test_cr_warped_run_passes():
    report = run_config(parse_config(CRW_RUN))
    assert report.ok, [(r.check, r.error) for r in report.records if not r.passed]
    assert report.summary["total"] == 4 * 3 + 2
    assert {r.check for r in report.records} == set(parse_config(CRW_RUN).checks.names)
    classified = [r for r in report.records if r.check == "submanifold.classify"]
    assert len(classified) == 1
    assert classified[0].point_index == GLOBAL_INDEX and classified[0].point == []
    assert classified[0].values["kind"] == "CR"
    assert report.config["run"] == {"seed": 7, "tol_scale": 1.0}


def test_ambient_only_run_passes():
    report = run_config(parse_config(AMBIENT_RUN))
    assert report.ok, [(r.check, r.values, r.error) for r in report.records if not r.passed]
    w33 = [r for r in report.records if r.check == "bochner.w33"]
    assert all(r.values["lhs"] == pytest.approx(-2.0, abs=1e-4) for r in w33)


def test_runs_are_deterministic():
    config = parse_config(CRW_RUN)
    first = run_config(config, jobs=1).to_json(include_timestamp=False)
    assert run_config(config, jobs=4).to_json(include_timestamp=False) == first


def test_seed_override_moves_the_sample():
    config = parse_config(CRW_RUN)
    base = run_config(config)
    moved = run_config(config, seed=8)
    assert base.records[0].point != moved.records[0].point
    assert base.records[0].inputs_digest != moved.records[0].inputs_digest


def test_checks_without_an_immersion_record_errors():
    report = run_config(parse_config(AMBIENT_RUN.replace('"ambient.kaehler"', '"chen.thm1"')))
    failed = [r for r in report.records if r.check == "chen.thm1"]
    assert len(failed) == 3
    assert all(r.error["type"] == "PreconditionError" for r in failed)
    assert not report.ok


def test_failures_are_recorded_not_raised():
    text = '[immersion]\nbuiltin = "SPH3"\n[sample]\ncount = 2\n[checks]\nnames = ["chen.equality_form"]\n'
    report = run_config(parse_config(text))
    assert report.summary["failed"] == 2
    assert all(r.residual == pytest.approx(1.0, abs=1e-6) for r in report.records)


def test_grid_sample_and_corollaries():
    text = (
        '[immersion]\nbuiltin = "LAGR2"\n[sample]\nmode = "grid"\ngrid = [2, 3]\n'
        '[checks]\nnames = ["chen.thm1", "chen.cor4"]\n'
    )
    report = run_config(parse_config(text))
    assert report.ok, [(r.check, r.error) for r in report.records if not r.passed]
    assert len([r for r in report.records if r.check == "chen.cor4"]) == 6


def test_tolerance_scale_and_overrides():
    text = CRW_RUN.replace("[checks]", "[checks]\ntolerances = { \"crwarp.w8\" = 1e-5 }")
    report = run_config(parse_config(text), tol_scale=2.0)
    w8 = [r for r in report.records if r.check == "crwarp.w8"]
    assert all(r.tolerance == pytest.approx(2e-5) for r in w8)
    with pytest.raises(ConfigError, match="tol-scale"):
        run_config(parse_config(CRW_RUN), tol_scale=0.0)


def test_setup_errors_become_config_errors():
    text = '[ambient]\nkind = "fubini_study"\n[immersion]\nbuiltin = "SPH3"\n[checks]\nnames = ["chen.thm1"]\n'
    with pytest.raises(ConfigError, match="Cannot set up the run"):
        run_config(parse_config(text))


def test_explicit_points_must_match_the_chart():
    text = '[immersion]\nbuiltin = "CRW"\n[sample]\nmode = "points"\npoints = [[1.0, 0.0]]\n[checks]\nnames = ["crwarp.thm3"]\n'
    with pytest.raises(ConfigError, match="coordinates"):
        run_config(parse_config(text))


@pytest.mark.parametrize(
    "text",
    [
        '[immersion]\nbuiltin = "SLANT"\nparams = { theta = 0.5 }\n[checks]\nnames = ["chen.thm1", "submanifold.gauss"]\n',
        '[ambient]\nkind = "fubini_study"\n[immersion]\nbuiltin = "CLINE"\n[checks]\nnames = ["bochner.residual"]\n',
    ],
    ids=["flat-slant", "fs2-line"],
)
def test_small_runs_pass(text):
    report = run_config(parse_config(text))
    assert report.ok, [(r.check, r.values, r.error) for r in report.records if not r.passed]


def test_run_config_loads_a_path(tmp_path):
    path = tmp_path / "crw.toml"
    path.write_text(CRW_RUN, encoding="utf-8")
    from_path = run_config(path)
    from_text = run_config(parse_config(CRW_RUN))
    assert from_path.ok
    assert [r.inputs_digest for r in from_path.records] == [r.inputs_digest for r in from_text.records]
    with pytest.raises(ConfigError):
        run_config(tmp_path / "missing.toml")
