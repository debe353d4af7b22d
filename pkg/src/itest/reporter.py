"""Outcome aggregation and report emission.

Console output shows a summary plus one line per non-pass outcome; JSON is
the canonical machine-readable schema (round-trips byte-identically); HTML
is a single self-contained file with a summary table and one row per
outcome.
"""

from __future__ import annotations

import html
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO

from .errors import DestinationUnwritable
from .runner import Status, TestOutcome

TOOL_VERSION = "0.1.0"

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_USAGE = 2

FORMATS = ("console", "json", "html")

_OPTIONAL_RECORD_FIELDS = ("expected", "observed", "message")


@dataclass(frozen=True)
class TestReport:
    outcomes: tuple[TestOutcome, ...]
    counts: dict[str, int]
    suite_wall_ms: float = 0.0
    started_at: str = ""
    tool_version: str = TOOL_VERSION
    config_echo: dict = field(default_factory=dict)


def summarize(
    outcomes: list[TestOutcome] | tuple[TestOutcome, ...],
    suite_wall_ms: float = 0.0,
    started_at: str = "",
    config_echo: dict | None = None,
) -> TestReport:
    """Aggregate outcomes into a report; counts always carry all statuses."""
    counts = {status.value: 0 for status in Status}
    for outcome in outcomes:
        counts[outcome.status.value] += 1
    return TestReport(
        outcomes=tuple(outcomes),
        counts=counts,
        suite_wall_ms=suite_wall_ms,
        started_at=started_at,
        config_echo=dict(config_echo or {}),
    )


def exit_code(report: TestReport) -> int:
    """0 iff no FAIL/ERROR/TIMEOUT outcome; usage errors use EXIT_USAGE."""
    bad = report.counts[Status.FAIL.value] + report.counts[Status.ERROR.value] \
        + report.counts[Status.TIMEOUT.value]
    return EXIT_FAILURES if bad else EXIT_OK


def _outcome_record(outcome: TestOutcome) -> dict:
    record = {
        "id": outcome.id,
        "file": outcome.file,
        "line": outcome.line,
        "status": outcome.status.value,
        "duration_ms": outcome.duration_ms,
    }
    for name in _OPTIONAL_RECORD_FIELDS:
        value = getattr(outcome, name)
        if value is not None:
            record[name] = value
    return record


def render_json(report: TestReport) -> str:
    payload = {
        "version": report.tool_version,
        "counts": report.counts,
        "suite_wall_ms": report.suite_wall_ms,
        "outcomes": [_outcome_record(outcome) for outcome in report.outcomes],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def parse_json_report(text: str) -> TestReport:
    """Inverse of :func:`render_json`."""
    payload = json.loads(text)
    outcomes = tuple(
        TestOutcome(
            id=record["id"],
            file=record["file"],
            line=record["line"],
            status=Status(record["status"]),
            duration_ms=record["duration_ms"],
            expected=record.get("expected"),
            observed=record.get("observed"),
            message=record.get("message"),
        )
        for record in payload["outcomes"]
    )
    return TestReport(
        outcomes=outcomes,
        counts=dict(payload["counts"]),
        suite_wall_ms=payload["suite_wall_ms"],
        tool_version=payload["version"],
    )


def render_console(report: TestReport) -> str:
    out = io.StringIO()
    total = len(report.outcomes)
    if total == 0:
        out.write("no inline tests found (0 tests)\n")
        return out.getvalue()
    counts = report.counts
    out.write(
        f"ran {total} test{'s' if total != 1 else ''} in {report.suite_wall_ms:.0f} ms: "
        f"{counts['pass']} passed, {counts['fail']} failed, {counts['error']} errored, "
        f"{counts['timeout']} timed out, {counts['skipped']} skipped\n"
    )
    for outcome in report.outcomes:
        if outcome.status is Status.PASS:
            continue
        line = f"{outcome.status.value.upper():8} {outcome.id}  {outcome.file}:{outcome.line}"
        if outcome.expected is not None or outcome.observed is not None:
            line += f"  expected: {outcome.expected}  observed: {outcome.observed}"
        elif outcome.message:
            line += f"  {outcome.message}"
        out.write(line + "\n")
    return out.getvalue()


def render_html(report: TestReport) -> str:
    rows = []
    for outcome in report.outcomes:
        cells = [
            outcome.id,
            f"{outcome.file}:{outcome.line}",
            outcome.status.value,
            f"{outcome.duration_ms:.3f}",
            outcome.expected or "",
            outcome.observed or "",
            outcome.message or "",
        ]
        tds = "".join(f"<td>{html.escape(str(cell))}</td>" for cell in cells)
        rows.append(f'<tr class="{outcome.status.value}">{tds}</tr>')
    summary_cells = "".join(
        f"<td>{report.counts[status.value]}</td>" for status in Status
    )
    summary_heads = "".join(f"<th>{status.value}</th>" for status in Status)
    return f"""<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>inline test report</title>
<style>
body {{ font-family: sans-serif; margin: 2em; }}
table {{ border-collapse: collapse; margin-bottom: 1.5em; }}
th, td {{ border: 1px solid #999; padding: 4px 8px; text-align: left; }}
tr.pass td {{ background: #e7f6e7; }}
tr.fail td {{ background: #fbe3e3; }}
tr.error td {{ background: #fbd9c9; }}
tr.timeout td {{ background: #f6eccf; }}
tr.skipped td {{ background: #eee; }}
</style>
</head>
<body>
<h1>inline test report</h1>
<p>version {html.escape(report.tool_version)} &middot; {len(report.outcomes)} tests
 &middot; {report.suite_wall_ms:.0f} ms wall</p>
<table>
<tr>{summary_heads}</tr>
<tr>{summary_cells}</tr>
</table>
<table>
<tr><th>id</th><th>location</th><th>status</th><th>duration [ms]</th>
<th>expected</th><th>observed</th><th>message</th></tr>
{chr(10).join(rows)}
</table>
</body>
</html>
"""


def emit(report: TestReport, format: str = "console",
         out: str | Path | IO[str] | None = None) -> None:
    """Write the report in the given format to a path, stream, or stdout.

    Raises:
        DestinationUnwritable: the destination path cannot be opened/written.
        ValueError: unknown format.
    """
    if format == "console":
        rendered = render_console(report)
    elif format == "json":
        rendered = render_json(report)
    elif format == "html":
        rendered = render_html(report)
    else:
        raise ValueError(f"unknown report format {format!r}")

    if out is None:
        sys.stdout.write(rendered)
    elif isinstance(out, (str, Path)):
        try:
            Path(out).write_text(rendered, encoding="utf-8")
        except OSError as exc:
            raise DestinationUnwritable(str(out), str(exc)) from exc
    else:
        out.write(rendered)
