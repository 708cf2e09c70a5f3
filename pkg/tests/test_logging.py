import pytest

from kaehlerlab.utils.logging import error, info, render_text, step, success, summary_table, warning


@pytest.mark.parametrize(
    "helper, prefix",
    [(success, "✔"), (error, "✖ error:"), (warning, "⚠ note:"), (info, "→"), (step, "🧮")],
)
def test_level_prefixes(capsys, helper, prefix):
    helper("chen.thm1: n = 2")
    assert capsys.readouterr().out.strip() == f"{prefix} chen.thm1: n = 2"


def test_messages_are_not_parsed_as_markup(capsys):
    error("unknown key in [ambient]")
    assert "[ambient]" in capsys.readouterr().out


def test_summary_table_rows():
    rows = [
        {"check": "chen.thm1", "failed": 0, "records": 3, "residual": None, "margin": 0.25},
        {"check": "submanifold.gauss", "failed": 2, "records": 3, "residual": 1e-3, "margin": None},
    ]
    text = render_text([summary_table("Check summary", rows)])
    assert "chen.thm1" in text and "2.500e-01" in text
    assert "2 failed" in text
