"""List command: builtin immersions and the check catalog."""

from rich.table import Table

from ..geometry.fixtures import BUILTINS
from ..utils.logging import format_value, render_text
from .checks import CATALOG


def fixtures_table() -> Table:
    table = Table(title="Builtin immersions")
    table.add_column("Name", style="cyan", no_wrap=True)
    table.add_column("n", justify="right")
    table.add_column("Ambient")
    table.add_column("Parameters", style="dim")
    table.add_column("Description")
    for name in sorted(BUILTINS):
        spec = BUILTINS[name]
        table.add_row(
            name,
            str(spec.n),
            "flat only" if spec.flat_only else "any",
            spec.schema(),
            spec.summary,
        )
    return table


def checks_table() -> Table:
    table = Table(title="Checks")
    table.add_column("Name", style="cyan", no_wrap=True)
    table.add_column("Reference", style="magenta", no_wrap=True)
    table.add_column("Scope")
    table.add_column("Default tolerance", justify="right", style="dim")
    table.add_column("Statement")
    for name in sorted(CATALOG):
        spec = CATALOG[name]
        scope = ("per point" if spec.per_point else "whole sample") + ("" if spec.needs_immersion else ", ambient")
        table.add_row(name, spec.reference, scope, format_value(spec.tolerance), spec.statement)
    return table


def list_builtins() -> str:
    return render_text([fixtures_table(), checks_table()], width=160)
