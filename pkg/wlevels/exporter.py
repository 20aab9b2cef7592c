"""
Report Export
Renders classification and verification reports as YAML, CSV, Markdown or HTML.
"""
import io
import csv
import logging
from dataclasses import dataclass, field, fields, is_dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

import markdown
import yaml

from . import __version__
from .catalog import AlgebraId
from .exactmath import PolyK, RatFunK, format_scalar

logger = logging.getLogger(__name__)


@dataclass
class Report:
    """A titled list of rows plus a summary block."""

    title: str
    rows: List[Dict] = field(default_factory=list)
    summary: Dict = field(default_factory=dict)

    def to_plain(self) -> Dict:
        return {
            'title': self.title,
            'version': __version__,
            'summary': to_plain(self.summary),
            'rows': to_plain(self.rows),
        }


def to_plain(value: Any) -> Any:
    """
    Convert exact objects to YAML-safe builtins.

    Rationals become "p/q" strings, polynomials a coefficient list (lowest
    degree first) with a readable form, sets sorted lists.
    """
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return format_scalar(value)
    if isinstance(value, PolyK):
        return {'coeffs': value.to_list(), 'text': str(value)}
    if isinstance(value, RatFunK):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, AlgebraId):
        return str(value)
    if is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_plain(getattr(value, f.name)) for f in fields(value)}
    if isinstance(value, dict):
        return {_plain_key(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return [to_plain(v) for v in sorted(value)]
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, str):
        return value
    return str(value)


def _plain_key(key: Any) -> str:
    plain = to_plain(key)
    if isinstance(plain, list):
        return ', '.join(str(p) for p in plain)
    return str(plain)


def _cell(value: Any) -> str:
    """Flatten a plain value into one table cell."""
    if isinstance(value, dict):
        if set(value) == {'coeffs', 'text'}:
            return value['text']
        return '; '.join(f"{k}: {_cell(v)}" for k, v in value.items())
    if isinstance(value, list):
        return '{' + ', '.join(_cell(v) for v in value) + '}'
    if value is None:
        return ''
    return str(value)


class ReportExporter:
    """Exports reports in various formats."""

    def __init__(self, report: Report):
        self.report = report
        self.plain = report.to_plain()

    def _columns(self) -> List[str]:
        columns: List[str] = []
        for row in self.plain['rows']:
            for key in row:
                if key not in columns:
                    columns.append(key)
        return columns

    def _flat_rows(self) -> List[Dict[str, str]]:
        columns = self._columns()
        return [{c: _cell(row.get(c)) for c in columns} for row in self.plain['rows']]

    def export_yaml(self) -> io.StringIO:
        """Export the full report as YAML."""
        buffer = io.StringIO()
        yaml.safe_dump(self.plain, buffer, sort_keys=False, allow_unicode=True)
        buffer.seek(0)
        return buffer

    def export_csv(self) -> io.StringIO:
        """Export the rows as CSV."""
        buffer = io.StringIO()

        rows = self._flat_rows()
        if not rows:
            return buffer

        writer = csv.DictWriter(buffer, fieldnames=self._columns())
        writer.writeheader()
        writer.writerows(rows)

        buffer.seek(0)
        return buffer

    def export_markdown(self) -> io.StringIO:
        lines = [f"# {self.plain['title']}", '']
        for key, value in self.plain['summary'].items():
            lines.append(f"- **{key}**: {_cell(value)}")
        if self.plain['summary']:
            lines.append('')

        columns = self._columns()
        if columns:
            lines.append('| ' + ' | '.join(columns) + ' |')
            lines.append('|' + '|'.join(' --- ' for _ in columns) + '|')
            for row in self._flat_rows():
                cells = [row[c].replace('|', '\\|') for c in columns]
                lines.append('| ' + ' | '.join(cells) + ' |')
            lines.append('')

        buffer = io.StringIO('\n'.join(lines))
        buffer.seek(0)
        return buffer

    def export_html(self) -> io.StringIO:
        body = markdown.markdown(self.export_markdown().getvalue(), extensions=['tables'])
        html = (
            '<!DOCTYPE html>\n<html>\n<head><meta charset="utf-8">'
            f"<title>{self.plain['title']}</title></head>\n<body>\n{body}\n</body>\n</html>\n"
        )
        return io.StringIO(html)

    def export(self, fmt: str) -> io.StringIO:
        exporters = {
            'yaml': self.export_yaml,
            'csv': self.export_csv,
            'markdown': self.export_markdown,
            'html': self.export_html,
        }
        if fmt not in exporters:
            raise ValueError(f"unknown report format {fmt!r}")
        logger.debug(f"Exporting '{self.plain['title']}' as {fmt}")
        return exporters[fmt]()


def write_report(report: Report, fmt: str, out: Optional[str] = None) -> str:
    """Render a report and write it to out (or just return it)."""
    text = ReportExporter(report).export(fmt).getvalue()
    if out:
        with open(out, 'w', encoding='utf-8') as f:
            f.write(text)
        logger.info(f"Wrote {fmt} report to {out}")
    return text
