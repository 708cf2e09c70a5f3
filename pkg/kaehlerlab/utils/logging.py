"""Rich console logging utilities."""

from io import StringIO
from typing import Any, Dict, Iterable, List

from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

# Global console instance
console = Console()

# level -> (prefix, style)
LEVELS = {
    "success": ("✔", "green"),
    "error": ("✖ error:", "red"),
    "warning": ("⚠ note:", "yellow"),
    "info": ("→", "blue"),
    "step": ("🧮", "cyan"),
}


def say(level: str, message: str) -> None:
    prefix, style = LEVELS[level]
    console.print(f"{prefix} {message}", style=style, markup=False, highlight=False)


def success(message: str) -> None:
    say("success", message)


def error(message: str) -> None:
    say("error", message)


def warning(message: str) -> None:
    """Check notes and other non-fatal conditions."""
    say("warning", message)


def info(message: str) -> None:
    say("info", message)


def step(message: str) -> None:
    say("step", message)


def format_value(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.3e}"
    return str(value)


def summary_table(title: str, results: List[Dict[str, Any]]) -> Table:
    """Per-check summary table: one row per check name."""
    table = Table(title=title)
    table.add_column("Check", style="cyan", no_wrap=True)
    table.add_column("Status", style="bold")
    table.add_column("Records", justify="right")
    table.add_column("Worst residual", justify="right", style="dim")
    table.add_column("Worst margin", justify="right", style="dim")

    for result in results:
        status = "✅ Pass" if result.get("failed", 0) == 0 else f"❌ {result['failed']} failed"
        table.add_row(
            result.get("check", "Unknown"),
            status,
            str(result.get("records", 0)),
            format_value(result.get("residual")),
            format_value(result.get("margin")),
        )
    return table


def operation_summary(operation: str, total: int, success: int) -> Panel:
    """Build an operation summary panel."""
    if success == total:
        emoji = "🎉"
        style = "green"
    elif success > 0:
        emoji = "📊"
        style = "yellow"
    else:
        emoji = "💥"
        style = "red"

    message = f"{emoji} {operation} Summary: {success}/{total} records passed"
    return Panel(message, style=style)


def print_config_info(config) -> None:
    """Print run configuration information."""
    info_text = Text()
    info_text.append("Configuration loaded:\n", style="bold")
    info_text.append(f"  Ambient: {config.ambient.kind} (m = {config.ambient.m})\n")
    info_text.append(f"  Immersion: {config.immersion.describe()}\n")
    info_text.append(f"  Sample: {config.sample.describe()}\n")
    info_text.append(f"  Checks: {len(config.checks.names)} requested")

    console.print(Panel(info_text, title="kaehlerlab run"))


def render_text(renderables: Iterable[Any], width: int = 110) -> str:
    """Render rich objects to plain text without touching the global console."""
    buffer = StringIO()
    recorder = Console(file=buffer, width=width, force_terminal=False, color_system=None)
    for item in renderables:
        recorder.print(item)
    return buffer.getvalue()
