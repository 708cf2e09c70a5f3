"""Path utilities for kaehlerlab configs and reports."""

import os
from pathlib import Path
from typing import Optional

OUTPUT_DIR_ENV = "KAEHLERLAB_OUTPUT_DIR"
DEFAULT_CONFIG_NAME = "kaehlerlab.toml"


def get_output_dir() -> Path:
    """Get the report output directory, honouring KAEHLERLAB_OUTPUT_DIR."""
    return Path(os.environ.get(OUTPUT_DIR_ENV, "reports"))


def get_report_path(config_path: Optional[Path], explicit: Optional[str] = None) -> Path:
    """Where the JSON report of a run is written."""
    if explicit:
        return Path(explicit)
    stem = config_path.stem if config_path is not None else "run"
    return get_output_dir() / f"{stem}.json"


def get_default_config_path() -> Path:
    return Path(DEFAULT_CONFIG_NAME)
