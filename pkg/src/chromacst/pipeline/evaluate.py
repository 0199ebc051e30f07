"""
evaluate.py
Evaluation harness: per-illuminant angular error and CIEDE2000, summary
percentiles, provider cost and the report files.
Created 17/10/2026
"""

from __future__ import annotations

import csv
import logging
from pathlib import Path
from typing import Sequence

import attrs
import numpy as np
from numpy.typing import ArrayLike

from chromacst.colour.core import ChartObservation
from chromacst.colour.metrics import angular_error, chart_delta_e
from chromacst.config import D50_WHITE, EVAL_RESOLUTION, GRAY_ANCHOR_INDEX, PERCENTILES
from chromacst.errors import ChromaCstError, DataError
from chromacst.pipeline.correct import correct_chart
from chromacst.pipeline.providers import CstProvider
from chromacst.utils.store import dump_json, load_json

logger = logging.getLogger(__name__)

METRICS = ("angular", "delta_e")


@attrs.frozen
class IlluminantResult:
    illuminant_id: str
    cct: float | None
    xy: tuple[float, float] | None
    angular_mean: float
    delta_e: float
    patch_errors: tuple[float, ...] = attrs.field(converter=tuple)
    white_offset_deg: float = 0.0

    def to_json(self) -> dict:
        return attrs.asdict(self)


def percentiles(values: ArrayLike, ranks: Sequence[float] = PERCENTILES) -> dict[str, float]:
    """Percentiles by linear interpolation between order statistics."""
    values = np.asarray(values, dtype=np.float64)
    return {f"p{int(rank)}": float(np.percentile(values, rank, method="linear")) for rank in ranks}


def summarize(values: ArrayLike) -> dict[str, float]:
    values = np.asarray(values, dtype=np.float64)
    return {"mean": float(np.mean(values)), **percentiles(values)}


@attrs.frozen
class EvalReport:
    """Per-illuminant errors of one provider, their summary and the provider cost."""

    provider: str
    results: tuple[IlluminantResult, ...] = attrs.field(converter=tuple)
    failures: dict[str, str] = attrs.field(factory=dict)
    size_bytes: int = 0
    macs_millions: float = 0.0

    @property
    def ids(self) -> list[str]:
        return sorted([r.illuminant_id for r in self.results] + list(self.failures))

    @property
    def summary(self) -> dict[str, dict[str, float]]:
        if not self.results:
            return {}
        return {
            "angular": summarize([r.angular_mean for r in self.results]),
            "delta_e": summarize([r.delta_e for r in self.results]),
        }

    def to_json(self) -> dict:
        return {
            "provider": self.provider,
            "size_bytes": self.size_bytes,
            "size_kb": self.size_bytes / 1024,
            "macs_millions": self.macs_millions,
            "summary": self.summary,
            "failures": self.failures,
            "results": [r.to_json() for r in self.results],
        }

    @classmethod
    def from_json(cls, data: dict) -> EvalReport:
        results = []
        for r in data["results"]:
            xy = tuple(r["xy"]) if r.get("xy") is not None else None
            results.append(IlluminantResult(
                r["illuminant_id"], r.get("cct"), xy, r["angular_mean"], r["delta_e"],
                r.get("patch_errors", ()), r.get("white_offset_deg", 0.0),
            ))
        return cls(data["provider"], results, data.get("failures", {}), data.get("size_bytes", 0), data.get("macs_millions", 0.0))


def evaluate(
    test: Sequence[ChartObservation],
    prov: CstProvider,
    reference_white: ArrayLike = D50_WHITE,
    anchor_index: int = GRAY_ANCHOR_INDEX,
    white_offsets: dict[str, float] | None = None,
    resolution: tuple[int, int] = EVAL_RESOLUTION,
) -> EvalReport:
    """
    Correct every test chart with the provider and score it.

    Charts are processed in illuminant id order. A chart whose correction or
    scoring fails is listed in failures and left out of the summary.

    Args:
        test (Sequence[ChartObservation]): Test charts.
        prov (CstProvider): The method under test.
        reference_white (ArrayLike, optional): CIELAB white for delta E.
        anchor_index (int, optional): Gray patch used for luminance matching.
        white_offsets (dict, optional): Measured white point perturbation per id.
        resolution (tuple, optional): Image size for the MACs estimate.

    Returns:
        EvalReport: The report.
    """
    if len(test) == 0:
        raise DataError("Cannot evaluate on an empty test set.")
    white_offsets = white_offsets or {}
    results, failures = [], {}
    for obs in sorted(test, key=lambda o: o.illuminant_id):
        try:
            pred = correct_chart(obs, prov)
            errors = angular_error(pred, obs.gt_xyz)
            delta_e = chart_delta_e(pred, obs.gt_xyz, anchor_index, reference_white)
        except ChromaCstError as e:
            logger.warning("%s failed on %s: %s", prov.name, obs.illuminant_id, e)
            failures[obs.illuminant_id] = str(e)
            continue
        xy = (obs.white.xy.a, obs.white.xy.b) if obs.white.xy is not None else None
        results.append(IlluminantResult(
            obs.illuminant_id, obs.white.cct, xy, float(np.mean(errors)), delta_e,
            [float(e) for e in errors], white_offsets.get(obs.illuminant_id, 0.0),
        ))
    return EvalReport(prov.name, results, failures, prov.size_bytes(), prov.macs(resolution))


def _cell(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def write_report(report: EvalReport, out_dir: Path) -> None:
    """Write report.json, per_illuminant.csv and per_patch.csv into out_dir."""
    out_dir = Path(out_dir)
    dump_json(out_dir / "report.json", report.to_json())

    with open(out_dir / "per_illuminant.csv", "w", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(("id", "cct", "x", "y", "angular_mean", "delta_e", "white_offset_deg"))
        for r in report.results:
            x, y = r.xy if r.xy is not None else (None, None)
            writer.writerow((r.illuminant_id,) + tuple(_cell(v) for v in (r.cct, x, y, r.angular_mean, r.delta_e, r.white_offset_deg)))

    with open(out_dir / "per_patch.csv", "w", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        if report.results:
            writer.writerow(("id",) + tuple(f"patch_{i}" for i in range(len(report.results[0].patch_errors))))
        for r in report.results:
            writer.writerow((r.illuminant_id,) + tuple(repr(e) for e in r.patch_errors))


def load_report(path: Path) -> EvalReport:
    path = Path(path)
    if path.is_dir():
        path = path / "report.json"
    return EvalReport.from_json(load_json(path, "Run `eval` to produce a report.json."))
