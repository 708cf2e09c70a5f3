"""Report rendering and the report command for saved JSON runs."""

import json
from pathlib import Path
from typing import Any, Dict, List

import typer
from rich.table import Table

from ..report import RunRecord, RunReport
from ..utils.logging import error, format_value, operation_summary, render_text, summary_table

FORMATS = ("text", "json")


def _failure_line(record: RunRecord) -> str:
    where = "global" if record.point_index < 0 else f"point {record.point_index} {record.point}"
    if record.error:
        return f"{record.check} @ {where}: {record.error['type']}: {record.error['message']}"
    parts = []
    if record.residual is not None:
        parts.append(f"residual {format_value(record.residual)}")
    if record.margin is not None:
        parts.append(f"margin {format_value(record.margin)}")
    parts.append(f"tolerance {format_value(record.tolerance)}")
    return f"{record.check} @ {where}: " + ", ".join(parts)


def _failures_table(failed: List[RunRecord]) -> Table:
    table = Table(title="Failures")
    table.add_column("Detail", style="red")
    for record in failed:
        table.add_row(_failure_line(record))
    return table


def emit_report(report: RunReport, fmt: str = "text") -> str:
    """Render a run report as JSON or as a fixed-width summary with failure details."""
    if fmt == "json":
        return report.to_json()
    if fmt != "text":
        raise ValueError(f"Unknown report format '{fmt}'; expected one of: {', '.join(FORMATS)}")

    summary = report.summary
    counts: Dict[str, int] = {}
    for record in report.records:
        counts[record.check] = counts.get(record.check, 0) + 1
    rows: List[Dict[str, Any]] = [
        {"check": name, "records": counts[name], **worst} for name, worst in summary["worst"].items()
    ]
    renderables: List[Any] = [summary_table("Check summary", rows)]
    failed = [r for r in report.records if not r.passed]
    if failed:
        renderables.append(_failures_table(failed))
    renderables.append(operation_summary("Verification", summary["total"], summary["passed"]))
    text = render_text(renderables)
    text += f"Summary: total={summary['total']} passed={summary['passed']} failed={summary['failed']}\n"
    if failed:
        text += f"{summary['failed']} record(s) failed: exit status 1\n"
    else:
        text += "All records passed: exit status 0\n"
    return text


def load_report(path: Path) -> RunReport:
    return RunReport.from_json(Path(path).read_text(encoding="utf-8"))


def report_main(path: Path, fmt: str = "text") -> None:
    """Re-render a saved JSON report."""
    if fmt not in FORMATS:
        error(f"Unknown format '{fmt}'; expected text or json")
        raise typer.Exit(1)
    try:
        report = load_report(path)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        error(f"Cannot read report {path}: {e}")
        raise typer.Exit(1)

    typer.echo(emit_report(report, fmt))
    if not report.ok:
        raise typer.Exit(1)
