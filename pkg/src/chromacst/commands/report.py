"""
report.py
Merges evaluation reports into summary tables.
Created 17/10/2026
"""

from __future__ import annotations

import logging
from pathlib import Path

import click

from chromacst.base_command import JobCommand
from chromacst.errors import ConfigurationError
from chromacst.pipeline.evaluate import load_report
from chromacst.pipeline.report import merge_reports, render_table, write_summary
from chromacst.utils.job import JobConfig

logger = logging.getLogger(__name__)


class ReportCommand(JobCommand):
    name = "report"
    help = "Merge eval outputs into summary.csv and summary.txt, ranking each column."

    fields = {
        "out": (str,),
        "reports": (list, str, 1, 1000),
        "labels": (list, str, 0, 1000),
    }
    defaults = {
        "out": None,
        "reports": None,
        "labels": [],
    }
    options = [
        click.Option(["--report", "reports"], type=str, multiple=True, help="Eval output directory or report.json, repeatable."),
        click.Option(["--label", "labels"], type=str, multiple=True, help="Row label per report. Defaults to the directory name."),
    ]

    def run(self, job: JobConfig, out: Path) -> None:
        paths = [Path(p) for p in job["reports"]]
        labels = job["labels"] or [(p if p.is_dir() else p.parent).name or str(p) for p in paths]
        if len(labels) != len(paths):
            raise ConfigurationError(f"Got {len(labels)} labels for {len(paths)} reports.")

        rows = merge_reports([load_report(p) for p in paths], labels)
        write_summary(rows, out)
        logger.info("Summary of %d method(s):\n%s", len(rows), render_table(rows))
