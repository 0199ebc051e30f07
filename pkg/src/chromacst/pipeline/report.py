"""
report.py
Merges evaluation reports into a method x metric table, ranked per column,
written as CSV and as an aligned text table.
Created 17/10/2026
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

from chromacst.errors import ComparisonError
from chromacst.pipeline.evaluate import EvalReport

STATISTICS = ("mean", "p25", "p50", "p75", "p90")
METRIC_LABELS = {"angular": "Angular", "delta_e": "dE2000"}

# (key, header). All columns are lower-is-better.
COLUMNS = tuple(
    (f"{metric}_{stat}", f"{label} {stat}") for metric, label in METRIC_LABELS.items() for stat in STATISTICS
) + (("size_kb", "Size KB"), ("macs_millions", "MACs M"))

RANK_MARKS = {1: "(1)", 2: "(2)", 3: "(3)"}
LABEL_WIDTH = 12
CELL_WIDTH = 14


def _row(label: str, report: EvalReport) -> dict:
    row = {"method": label, "failures": len(report.failures)}
    summary = report.summary
    for metric in METRIC_LABELS:
        for stat in STATISTICS:
            row[f"{metric}_{stat}"] = summary[metric][stat] if summary else None
    row["size_kb"] = report.size_bytes / 1024
    row["macs_millions"] = report.macs_millions
    return row


def merge_reports(reports: Sequence[EvalReport], labels: Sequence[str] | None = None) -> list[dict]:
    """
    Merge reports evaluated on the same test set into table rows.

    Args:
        reports (Sequence[EvalReport]): One report per method.
        labels (Sequence[str], optional): Row labels. Defaults to the provider names.

    Raises:
        ComparisonError: The reports cover different illuminant ids.

    Returns:
        list[dict]: One row per report, in input order.
    """
    if len(reports) == 0:
        raise ComparisonError("Nothing to compare.")
    labels = list(labels) if labels is not None else [r.provider for r in reports]
    if len(labels) != len(reports):
        raise ComparisonError(f"Got {len(labels)} labels for {len(reports)} reports.")

    ids = reports[0].ids
    for label, report in zip(labels, reports):
        if report.ids != ids:
            raise ComparisonError(f"Report {label} was evaluated on a different test set than {labels[0]}.")
    return [_row(label, report) for label, report in zip(labels, reports)]


def rank_rows(rows: Sequence[dict]) -> dict[str, list[int | None]]:
    """
    Competition rank of every row in every column, lowest value first. Ties
    share a rank; missing values are unranked.
    """
    ranks = {}
    for key, _ in COLUMNS:
        values = [row[key] for row in rows]
        ranks[key] = [
            None if value is None else 1 + sum(1 for other in values if other is not None and other < value)
            for value in values
        ]
    return ranks


def _format(value: float | None) -> str:
    if value is None:
        return "-"
    return f"{value:.2f}" if abs(value) < 1e4 else f"{value:.3g}"


def render_table(rows: Sequence[dict]) -> str:
    """Aligned text table; the best three cells of each column are marked (1), (2), (3)."""
    ranks = rank_rows(rows)
    header = "Method".ljust(LABEL_WIDTH) + "".join(title.rjust(CELL_WIDTH) for _, title in COLUMNS)
    lines = [header, "-" * len(header)]
    for index, row in enumerate(rows):
        line = row["method"][:LABEL_WIDTH - 1].ljust(LABEL_WIDTH)
        for key, _ in COLUMNS:
            mark = RANK_MARKS.get(ranks[key][index], "")
            line += f"{_format(row[key])}{mark}".rjust(CELL_WIDTH)
        if row["failures"]:
            line += f"  [{row['failures']} failed]"
        lines.append(line)
    return "\n".join(lines) + "\n"


def write_summary(rows: Sequence[dict], out_dir: Path) -> None:
    """Write summary.csv, with a rank column per metric column, and summary.txt into out_dir."""
    out_dir = Path(out_dir)
    ranks = rank_rows(rows)
    with open(out_dir / "summary.csv", "w", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(("method", "failures") + tuple(f"{key}{suffix}" for key, _ in COLUMNS for suffix in ("", "_rank")))
        for index, row in enumerate(rows):
            cells = [row["method"], row["failures"]]
            for key, _ in COLUMNS:
                cells.append("" if row[key] is None else repr(float(row[key])))
                cells.append("" if ranks[key][index] is None else ranks[key][index])
            writer.writerow(cells)

    with open(out_dir / "summary.txt", "w", newline="\n") as file:
        file.write(render_table(rows))
