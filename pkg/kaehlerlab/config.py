"""Run configuration for kaehlerlab."""

import re
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import tomli
import tomli_w

from .errors import ConfigError, UnknownCheckError

SAMPLE_MODES = ("random", "grid", "points")
OUTPUT_FORMATS = ("text", "json")


@dataclass
class AmbientConfig:
    """Model ambient: kind and complex dimension."""
    kind: str = "flat"
    m: int = 2


@dataclass
class ImmersionConfig:
    """Builtin fixture with parameters, or component expressions with a chart box."""
    builtin: Optional[str] = None
    params: Dict[str, float] = field(default_factory=dict)
    components: Optional[List[str]] = None
    variables: Optional[List[str]] = None
    box: Optional[List[List[float]]] = None

    @property
    def defined(self) -> bool:
        return self.builtin is not None or self.components is not None

    def describe(self) -> str:
        if self.builtin:
            shown = ", ".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
            return f"{self.builtin}({shown})" if shown else self.builtin
        if self.components:
            return "(" + ", ".join(self.components) + ")"
        return "none (ambient checks only)"

    def build(self, ambient):
        from .geometry.submanifold import make_immersion

        return make_immersion(
            ambient,
            self.builtin,
            params=self.params,
            components=self.components,
            variables=self.variables,
            box=self.box,
        )


@dataclass
class SampleConfig:
    """Sample points: random draws, a tensor grid or explicit chart points."""
    mode: str = "random"
    count: int = 5
    grid: List[int] = field(default_factory=list)
    seed: Optional[int] = 0
    points: List[List[float]] = field(default_factory=list)

    def describe(self) -> str:
        if self.mode == "grid":
            return "grid " + "×".join(str(k) for k in self.grid)
        if self.mode == "points":
            return f"{len(self.points)} explicit point(s)"
        return f"{self.count} random point(s), seed {self.seed}"


@dataclass
class ChecksConfig:
    names: List[str] = field(default_factory=list)
    tolerances: Dict[str, float] = field(default_factory=dict)


@dataclass
class ConventionsConfig:
    ric_term: str = "ambient"
    einstein: str = "ambient"
    classify_tol: float = 1e-6


@dataclass
class OutputConfig:
    format: str = "text"
    path: Optional[str] = None


@dataclass
class RunConfig:
    """Main configuration class."""
    ambient: AmbientConfig = field(default_factory=AmbientConfig)
    immersion: ImmersionConfig = field(default_factory=ImmersionConfig)
    sample: SampleConfig = field(default_factory=SampleConfig)
    checks: ChecksConfig = field(default_factory=ChecksConfig)
    conventions: ConventionsConfig = field(default_factory=ConventionsConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    source: Optional[Path] = None

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data.pop("source")
        return data


def _line_of(text: str, needle: str) -> Optional[int]:
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return None


def _decode_line(exc: tomli.TOMLDecodeError) -> Optional[int]:
    line = getattr(exc, "lineno", None)
    if line is not None:
        return int(line)
    match = re.search(r"line (\d+)", str(exc))
    return int(match.group(1)) if match else None


def _section(data: Dict[str, Any], name: str, text: str) -> Dict[str, Any]:
    section = data.get(name, {})
    if not isinstance(section, dict):
        raise ConfigError(f"[{name}] must be a table", _line_of(text, name))
    return section


def parse_config(text: str, source: Optional[Path] = None) -> RunConfig:
    """Parse and validate TOML run configuration text."""
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as e:
        raise ConfigError(f"Malformed config: {e}", _decode_line(e)) from None

    config = RunConfig(source=source)

    ambient = _section(data, "ambient", text)
    config.ambient.kind = str(ambient.get("kind", config.ambient.kind))
    config.ambient.m = ambient.get("m", config.ambient.m)
    if not isinstance(config.ambient.m, int) or config.ambient.m < 2:
        raise ConfigError(f"ambient.m must be an integer >= 2, got {config.ambient.m!r}", _line_of(text, "m ="))

    immersion = _section(data, "immersion", text)
    config.immersion.builtin = immersion.get("builtin")
    config.immersion.params = {k: float(v) for k, v in immersion.get("params", {}).items()}
    config.immersion.components = immersion.get("components")
    config.immersion.variables = immersion.get("variables")
    config.immersion.box = immersion.get("box")
    if config.immersion.builtin and config.immersion.components:
        raise ConfigError("immersion needs either 'builtin' or 'components', not both", _line_of(text, "components"))

    sample = _section(data, "sample", text)
    config.sample.mode = sample.get("mode", config.sample.mode)
    config.sample.count = sample.get("count", config.sample.count)
    config.sample.grid = list(sample.get("grid", []))
    config.sample.seed = sample.get("seed", config.sample.seed)
    config.sample.points = [list(map(float, p)) for p in sample.get("points", [])]
    if config.sample.mode not in SAMPLE_MODES:
        raise ConfigError(
            f"sample.mode must be one of {', '.join(SAMPLE_MODES)}, got '{config.sample.mode}'",
            _line_of(text, "mode"),
        )
    if config.sample.mode == "random":
        if config.sample.seed is None:
            raise ConfigError("sample.seed is required for random sampling", _line_of(text, "[sample]"))
        if not isinstance(config.sample.count, int) or config.sample.count < 1:
            raise ConfigError(f"sample.count must be a positive integer, got {config.sample.count!r}", _line_of(text, "count"))
    if config.sample.mode == "grid" and (not config.sample.grid or min(config.sample.grid) < 1):
        raise ConfigError("sample.grid must list a positive point count per chart variable", _line_of(text, "grid"))
    if config.sample.mode == "points" and not config.sample.points:
        raise ConfigError("sample.points must list at least one point", _line_of(text, "points"))

    from .commands.checks import CATALOG

    checks = _section(data, "checks", text)
    config.checks.names = list(checks.get("names", []))
    config.checks.tolerances = {k: float(v) for k, v in checks.get("tolerances", {}).items()}
    known = sorted(CATALOG)
    for name in config.checks.names + list(config.checks.tolerances):
        if name not in CATALOG:
            raise UnknownCheckError(name, known, _line_of(text, name))
    for name, tol in config.checks.tolerances.items():
        if tol <= 0:
            raise ConfigError(f"Tolerance for '{name}' must be positive, got {tol}", _line_of(text, name))

    conventions = _section(data, "conventions", text)
    config.conventions.ric_term = conventions.get("ric_term", config.conventions.ric_term)
    config.conventions.einstein = conventions.get("einstein", config.conventions.einstein)
    config.conventions.classify_tol = float(conventions.get("classify_tol", config.conventions.classify_tol))
    if config.conventions.ric_term not in ("ambient", "intrinsic"):
        raise ConfigError("conventions.ric_term must be 'ambient' or 'intrinsic'", _line_of(text, "ric_term"))
    if config.conventions.einstein not in ("ambient", "submanifold"):
        raise ConfigError("conventions.einstein must be 'ambient' or 'submanifold'", _line_of(text, "einstein"))
    if config.conventions.classify_tol <= 0:
        raise ConfigError("conventions.classify_tol must be positive", _line_of(text, "classify_tol"))

    output = _section(data, "output", text)
    config.output.format = output.get("format", config.output.format)
    config.output.path = output.get("path")
    if config.output.format not in OUTPUT_FORMATS:
        raise ConfigError(f"output.format must be text or json, got '{config.output.format}'", _line_of(text, "format"))

    return config


def load_config(path: Path) -> RunConfig:
    """Load configuration from a TOML file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from None
    return parse_config(text, source=path)


def default_config() -> Dict[str, Any]:
    return {
        "ambient": {"kind": "fubini_study", "m": 2},
        "immersion": {"builtin": "CLINE"},
        "sample": {"mode": "random", "count": 5, "seed": 0},
        "checks": {
            "names": [
                "ambient.kaehler",
                "bochner.residual",
                "submanifold.gauss",
                "chen.thm1",
                "chen.proof_audit",
            ],
            "tolerances": {},
        },
        "conventions": {"ric_term": "ambient", "einstein": "ambient", "classify_tol": 1e-6},
        "output": {"format": "text"},
    }


def create_default_config(path: Path) -> None:
    """Create a default run configuration file."""
    path = Path(path)
    if path.exists():
        raise FileExistsError(f"Configuration file {path} already exists")

    with open(path, "wb") as f:
        tomli_w.dump(default_config(), f)
