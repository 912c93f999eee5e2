"""
Report writer.

JSON reports have the top-level keys config, result, residuals and warnings,
with sorted keys and no timestamps, so a fixed (input, seed, tolerances)
always gives the same bytes. CSV is only for per-step series.
"""

import csv
import io
import json
from pathlib import Path
from typing import Any, Optional

import click

from app.config import OutputFormat, REPORT_INDENT
from app.errors import DomainError
from app.models.run_config import CommandOutcome, RunConfig


def build_report(config: RunConfig, outcome: CommandOutcome) -> dict[str, Any]:
    # where the report is written is not part of the run
    return {
        "config": config.model_dump(mode="json", exclude={"out"}),
        "result": outcome.result,
        "residuals": outcome.residuals,
        "warnings": outcome.warnings,
    }


def render_json(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=REPORT_INDENT, sort_keys=True) + "\n"


def render_csv(outcome: CommandOutcome) -> str:
    if outcome.series is None or outcome.series_header is None:
        raise DomainError("this command has no per-step series; use --format json")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(outcome.series_header)
    for row in outcome.series:
        writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def render(config: RunConfig, outcome: CommandOutcome) -> str:
    if config.format == OutputFormat.CSV:
        return render_csv(outcome)
    return render_json(build_report(config, outcome))


def write_text(text: str, out: Optional[str]) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    Path(out).write_text(text)
