import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import sympy as sym

from utilities.utils import Utils


def format_cell(value: Any) -> Any:
    """Exact rationals as 'p/q' text, floats with 17 significant digits."""
    if isinstance(value, bool):
        return "PASS" if value else "FAIL"
    if isinstance(value, float):
        return "%.17g" % value
    if isinstance(value, (Fraction, sym.Rational)):
        return str(value)
    return value


@dataclass
class Table:
    name: str
    header: Sequence[str]
    rows: List[Sequence[Any]] = field(default_factory=list)

    def cells(self) -> List[List[Any]]:
        return [[format_cell(value) for value in row] for row in self.rows]


@dataclass
class CommandOutput:
    """Tables for text/csv/xlsx and the JSON document of one command."""

    exit_code: int
    tables: List[Table]
    payload: Dict[str, Any]


def render_text(tables: Sequence[Table]) -> str:
    blocks = []
    for table in tables:
        cells = [[str(c) for c in row] for row in table.cells()]
        widths = [len(h) for h in table.header]
        for row in cells:
            widths = [max(w, len(c)) for w, c in zip(widths, row)]
        lines = [f"# {table.name}", "  ".join(h.ljust(w) for h, w in zip(table.header, widths)).rstrip()]
        lines.extend("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells)
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def render_csv(tables: Sequence[Table]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for index, table in enumerate(tables):
        if index:
            buffer.write("\n")
        writer.writerow([f"# {table.name}"])
        writer.writerow(table.header)
        writer.writerows(table.cells())
    return buffer.getvalue()


def render_json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def emit(output: CommandOutput, output_format: str, destination: Optional[str], stdout) -> None:
    """
    Writes a command's output in the requested format.

    Args:
        output (CommandOutput): Tables and JSON document.
        output_format (str): text, json, csv or xlsx.
        destination (Optional[str]): File to write instead of stdout; required for xlsx.
        stdout: Stream used when no destination is given.
    """
    if output_format == "xlsx":
        Utils.write_data_to_excel_file(
            destination, {table.name: (table.header, table.cells()) for table in output.tables}
        )
        return
    if output_format == "json":
        text = render_json(output.payload)
    elif output_format == "csv":
        text = render_csv(output.tables)
    else:
        text = render_text(output.tables)
    if destination:
        with open(destination, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        stdout.write(text)
