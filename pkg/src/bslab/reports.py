"""Canonical report rendering: JSON, CSV and plain text.

JSON uses sorted keys and Python's shortest round-trip float repr, so
parsing an emitted report and re-emitting it is byte-identical. CSV uses
fixed 12-decimal notation with a '.' decimal point; text is for humans and
carries the same numbers in %.12g.
"""

from __future__ import annotations

import io
import json
import csv


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.12f}"
    return str(value)


def render_csv(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(col)) for col in columns])
    return buf.getvalue()


def _text_value(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def render_text(report: dict) -> str:
    """Key = value lines for scalar sections, an aligned table for rows."""
    lines: list[str] = [f"command: {report['command']}"]
    for section in ("inputs", "results", "diagnostics"):
        body = report.get(section)
        if not body:
            continue
        lines.append(f"{section}:")
        for key in sorted(body):
            lines.append(f"  {key} = {_text_value(body[key])}")
    rows = report.get("rows")
    if rows:
        columns = list(rows[0].keys())
        table = [columns] + [[_text_value(r.get(c)) for c in columns] for r in rows]
        widths = [max(len(line[i]) for line in table) for i in range(len(columns))]
        lines.append("rows:")
        for line in table:
            lines.append("  " + "  ".join(cell.rjust(w) for cell, w in zip(line, widths)))
    return "\n".join(lines) + "\n"
