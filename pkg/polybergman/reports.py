# Report envelope shared by the CLI and the HTTP API. CSV output is the "table"
# section, complex columns split into <name>_re / <name>_im.

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Optional

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_USAGE = 2


def pair(value: complex) -> list[float]:
    value = complex(value)
    return [float(value.real), float(value.imag)]


def complex_columns(name: str) -> list[str]:
    return [f"{name}_re", f"{name}_im"]


def table(columns: list[str], rows: Iterable[list[Any]]) -> dict:
    return {"columns": columns, "rows": [list(row) for row in rows]}


def envelope(command: str, gamma: float, seed: int, body: dict, passed: bool = True) -> tuple[int, dict]:
    exit_code = EXIT_OK if passed else EXIT_TOLERANCE
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "gamma": gamma,
        "seed": seed,
        "passed": passed,
        "exit_code": exit_code,
    }
    report.update(body)
    return exit_code, report


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def to_csv(report: dict) -> str:
    data = report.get("table") or {"columns": [], "rows": []}
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(data["columns"])
    writer.writerows(data["rows"])
    return buffer.getvalue()


def render(report: dict, output_format: str) -> str:
    if output_format == "csv":
        return to_csv(report)
    return to_json(report)


def write_report(report: dict, output_format: str, out: Optional[str]) -> Optional[Path]:
    """Write the rendered report to ``out``, or to stdout when no path is given."""
    text = render(report, output_format)
    if out is None:
        print(text, end="")
        return None
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {report['command']} report to {path}")
    return path
