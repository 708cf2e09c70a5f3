import pytest
import tomli

from kaehlerlab.config import create_default_config, default_config, load_config, parse_config
from kaehlerlab.errors import ConfigError, UnknownCheckError

VALID = """
[ambient]
kind = "flat"
m = 2

[immersion]
builtin = "SLANT"
params = { theta = 0.3 }

[sample]
mode = "grid"
grid = [2, 3]

[checks]
names = ["chen.thm1", "chen.thm2"]
tolerances = { "chen.thm1" = 1e-6 }
"""


def test_parse_valid_config():
    config = parse_config(VALID)
    assert config.ambient.kind == "flat"
    assert config.immersion.builtin == "SLANT"
    assert config.immersion.params == {"theta": 0.3}
    assert config.immersion.describe() == "SLANT(theta=0.3)"
    assert config.sample.grid == [2, 3]
    assert config.sample.describe() == "grid 2×3"
    assert config.checks.tolerances == {"chen.thm1": 1e-6}
    assert config.output.format == "text"


def test_defaults_without_immersion():
    config = parse_config('[checks]\nnames = ["ambient.kaehler"]\n')
    assert not config.immersion.defined
    assert config.sample.mode == "random" and config.sample.seed == 0


def test_unknown_check_names_its_line():
    text = VALID.replace('"chen.thm2"', '"chen.thm9"')
    with pytest.raises(UnknownCheckError) as info:
        parse_config(text)
    assert info.value.name == "chen.thm9"
    assert info.value.line == 15
    assert "(line 15)" in str(info.value)


def test_malformed_toml_reports_a_line():
    with pytest.raises(ConfigError) as info:
        parse_config("[ambient]\nkind = \n")
    assert info.value.line == 2


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("[ambient]\nm = 1\n", "ambient.m"),
        ('[sample]\nmode = "sobol"\n', "sample.mode"),
        ("[sample]\ncount = 0\n", "sample.count"),
        ('[sample]\nmode = "grid"\n', "sample.grid"),
        ('[sample]\nmode = "points"\n', "sample.points"),
        ('[checks]\nnames = ["chen.thm1"]\ntolerances = { "chen.thm1" = -1.0 }\n', "must be positive"),
        ('[conventions]\nric_term = "both"\n', "ric_term"),
        ('[conventions]\neinstein = "everywhere"\n', "einstein"),
        ('[output]\nformat = "yaml"\n', "output.format"),
        ('[immersion]\nbuiltin = "CLINE"\ncomponents = ["u", "v", "0", "0"]\n', "not both"),
        ('ambient = 3\n', "must be a table"),
    ],
)
def test_invalid_configs(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_config(text)


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="Cannot read config"):
        load_config(tmp_path / "absent.toml")


def test_default_config_round_trips(tmp_path):
    path = tmp_path / "kaehlerlab.toml"
    create_default_config(path)
    with open(path, "rb") as f:
        assert tomli.load(f) == default_config()
    config = load_config(path)
    assert config.source == path
    assert config.immersion.builtin == "CLINE"
    with pytest.raises(FileExistsError):
        create_default_config(path)


def test_to_dict_drops_source(tmp_path):
    config = parse_config(VALID, source=tmp_path / "x.toml")
    data = config.to_dict()
    assert "source" not in data
    assert data["checks"]["names"] == ["chen.thm1", "chen.thm2"]
