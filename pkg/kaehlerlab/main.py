"""Main CLI application for kaehlerlab."""

from pathlib import Path
from typing import Optional

import typer

from .config import create_default_config
from .utils.logging import console, error, success
from .utils.paths import get_default_config_path

# Command modules are imported locally in each command function to keep startup light

app = typer.Typer(
    name="kaehlerlab",
    help="Numerical verifier for curvature identities and inequalities of submanifolds in Kaehler space forms",
    no_args_is_help=True,
)


@app.command(help="Run the checks of a config file over its sample")
def verify(
    config: Path = typer.Argument(..., help="Run configuration (TOML)"),
    tol_scale: float = typer.Option(1.0, "--tol-scale", help="Multiply every tolerance by this factor"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override the sample seed"),
    jobs: Optional[int] = typer.Option(None, "--jobs", help="Worker threads (default: executor default)"),
    fmt: Optional[str] = typer.Option(None, "--format", help="text or json (defaults to the config value)"),
    output: Optional[str] = typer.Option(None, "--output", help="Where to save the JSON report"),
) -> None:
    """Run the checks of a config file over its sample."""
    from .commands.verify import verify_main

    verify_main(config, tol_scale, seed, jobs, fmt, output)


@app.command(name="list", help="List builtin immersions and the check catalog")
def list_command() -> None:
    """List builtin immersions and the check catalog."""
    from .commands.catalog import list_builtins

    typer.echo(list_builtins())


@app.command(help="Render a saved JSON report")
def report(
    path: Path = typer.Argument(..., help="JSON report written by 'verify'"),
    fmt: str = typer.Option("text", "--format", help="text or json"),
) -> None:
    """Render a saved JSON report."""
    from .commands.report import report_main

    report_main(path, fmt)


@app.command(help="Write a default run configuration")
def init(
    force: bool = typer.Option(False, "--force", help="Overwrite an existing configuration file"),
    path: Optional[Path] = typer.Option(None, "--path", help="Config file to create"),
) -> None:
    """Write a default run configuration."""
    config_path = path or get_default_config_path()

    if config_path.exists() and not force:
        error(f"Configuration file {config_path} already exists. Use --force to overwrite.")
        raise typer.Exit(1)
    if force and config_path.exists():
        config_path.unlink()

    try:
        create_default_config(config_path)
    except OSError as e:
        error(f"Failed to write configuration: {e}")
        raise typer.Exit(1)

    success(f"Created configuration file: {config_path}")
    console.print("\nNext steps:")
    console.print(f"1. Edit {config_path} to choose the ambient, immersion and checks")
    console.print(f"2. Run 'kaehlerlab verify {config_path}'")


@app.callback()
def main() -> None:
    """kaehlerlab: curvature checks for submanifolds of Kaehler space forms."""


if __name__ == "__main__":
    app()
