import csv
import io
from fractions import Fraction
from pathlib import Path

import pytest
import yaml

from wlevels import __version__
from wlevels.catalog import parse_algebra
from wlevels.exactmath import PolyK
from wlevels.exporter import Report, ReportExporter, to_plain, write_report
from wlevels.levels import ExclusionReason


def _report() -> Report:
    return Report(
        title="classify",
        rows=[
            {
                "algebra": parse_algebra("sl(4)"),
                "h_vee": Fraction(4),
                "p_of_k": PolyK.from_roots([-1, -2]),
                "collapsing": frozenset({Fraction(-1), Fraction(-2)}),
            },
            {"algebra": parse_algebra("spo(2|1)"), "reason": ExclusionReason.SUGAWARA_POLE},
        ],
        summary={"algebras": 2},
    )


def test_to_plain() -> None:
    assert to_plain(Fraction(-3, 2)) == "-3/2"
    assert to_plain(7) == 7
    assert to_plain(PolyK.from_roots([-1])) == {"coeffs": ["1", "1"], "text": "k + 1"}
    assert to_plain(frozenset({Fraction(1), Fraction(-1)})) == ["-1", "1"]
    assert to_plain({Fraction(1, 2): True}) == {"1/2": True}
    assert to_plain(ExclusionReason.KI_ZERO) == "ki_zero"


def test_yaml_export() -> None:
    data = yaml.safe_load(ReportExporter(_report()).export("yaml").getvalue())
    assert data["version"] == __version__
    assert data["rows"][0]["algebra"] == "sl(4)"
    assert data["rows"][0]["collapsing"] == ["-2", "-1"]
    assert data["rows"][1]["reason"] == "sugawara_pole"


def test_csv_export_uses_union_of_columns() -> None:
    text = ReportExporter(_report()).export("csv").getvalue()
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["algebra", "h_vee", "p_of_k", "collapsing", "reason"]
    assert rows[0]["p_of_k"] == "k^2 + 3*k + 2"
    assert rows[0]["collapsing"] == "{-2, -1}"
    assert rows[1]["h_vee"] == ""


def test_markdown_and_html_export() -> None:
    exporter = ReportExporter(_report())
    text = exporter.export("markdown").getvalue()
    assert text.startswith("# classify")
    assert "| algebra | h_vee | p_of_k | collapsing | reason |" in text
    html = exporter.export("html").getvalue()
    assert "<table>" in html
    assert "<title>classify</title>" in html


def test_pipe_in_cell_is_escaped() -> None:
    text = ReportExporter(Report(title="t", rows=[{"algebra": "sl(4|1)"}])).export("markdown").getvalue()
    assert "sl(4\\|1)" in text


def test_unknown_format() -> None:
    with pytest.raises(ValueError):
        ReportExporter(_report()).export("pdf")


def test_write_report(tmp_path: Path) -> None:
    out = tmp_path / "report.yaml"
    text = write_report(_report(), "yaml", str(out))
    assert out.read_text(encoding="utf-8") == text
