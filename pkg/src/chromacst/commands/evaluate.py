"""
evaluate.py
Evaluates one CST provider on a split, optionally with perturbed white points.
Created 17/10/2026
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence

import attrs
import click

from chromacst.base_command import JobCommand, load_split_charts
from chromacst.cct.interpolation import CalibratedCstSet, white_raw_to_xy
from chromacst.colour.core import ChartObservation, HeadKind, check_head
from chromacst.colour.metrics import angular_error
from chromacst.config import D50_WHITE, DEFAULT_SEED, EVAL_RESOLUTION, GRAY_ANCHOR_INDEX
from chromacst.dataset.sampling import perturb_white
from chromacst.errors import ChromaCstError, ConfigurationError
from chromacst.fitting.nearest import NnIndex
from chromacst.mlp.model import MlpModel
from chromacst.pipeline.evaluate import evaluate, write_report
from chromacst.pipeline.lut import Lut
from chromacst.pipeline.providers import (
    CstProvider,
    InterpolatedProvider,
    LutProvider,
    MlpProvider,
    NnProvider,
    OracleProvider,
)
from chromacst.utils.job import JobConfig

logger = logging.getLogger(__name__)

PROVIDERS = ("cst2", "cst3", "nn", "mlp", "lut", "oracle")
ANCHOR_FILES = {"cst2": "anchors_two.json", "cst3": "anchors_three.json"}


def build_provider(job: JobConfig) -> CstProvider:
    """Load the artifact of the requested provider."""
    provider = job["provider"]
    artifact = Path(job["artifact"]) if job["artifact"] else None
    if provider in ANCHOR_FILES:
        return InterpolatedProvider(CalibratedCstSet.load(artifact or Path(job["data"]) / ANCHOR_FILES[provider]))
    if provider == "oracle":
        head = HeadKind(job["head"])
        check_head(head, job["size"])
        return OracleProvider(head, job["size"])
    if artifact is None:
        raise ConfigurationError(f"Provider {provider} needs an artifact (--artifact).")
    if provider == "nn":
        return NnProvider(NnIndex.load(artifact))
    if provider == "mlp":
        return MlpProvider(MlpModel.load(artifact))
    return LutProvider(Lut.load(artifact))


def perturbation_anchors(job: JobConfig) -> CalibratedCstSet:
    """Anchors that re-derive perturbed white points: the provider's own set for cst2 and cst3, else the two-point set."""
    provider = job["provider"]
    if provider in ANCHOR_FILES and job["artifact"]:
        return CalibratedCstSet.load(Path(job["artifact"]))
    return CalibratedCstSet.load(Path(job["data"]) / ANCHOR_FILES.get(provider, ANCHOR_FILES["cst2"]))


def perturb_charts(
    charts: Sequence[ChartObservation],
    offset_deg: float,
    seed: int,
    anchors: CalibratedCstSet,
) -> tuple[list[ChartObservation], dict[str, float], dict[str, str]]:
    """
    Rotate every chart's white point by offset_deg and re-derive its xy and
    CCT from the anchors.

    Returns:
        tuple: Perturbed charts, measured offset per id and the ids that could
            not be perturbed with the reason.
    """
    perturbed, offsets, failures = [], {}, {}
    for index, obs in enumerate(sorted(charts, key=lambda o: o.illuminant_id)):
        try:
            white = white_raw_to_xy(perturb_white(obs.white, offset_deg, seed, index), anchors)
        except ChromaCstError as e:
            logger.warning("Could not perturb %s: %s", obs.illuminant_id, e)
            failures[obs.illuminant_id] = str(e)
            continue
        offsets[obs.illuminant_id] = float(angular_error(obs.white.raw_vector(), white.raw_vector()))
        perturbed.append(attrs.evolve(obs, white=white))
    return perturbed, offsets, failures


class EvalCommand(JobCommand):
    name = "eval"
    help = "Evaluate a provider on a split; writes report.json, per_illuminant.csv and per_patch.csv."

    fields = {
        "out": (str,),
        "data": (str,),
        "provider": (str, PROVIDERS),
        "artifact": (str,),
        "split": (str, ("train", "val", "test")),
        "wp_offset_deg": (float, 0.0, 45.0),
        "seed": (int, 0, 2**32 - 1),
        "anchor_index": (int, 0, 23),
        "reference_white": (list, float, 3, 3),
        "resolution": (list, int, 2, 2),
        "head": (str, tuple(kind.value for kind in HeadKind)),
        "size": (int, 3, 19),
    }
    defaults = {
        "out": None,
        "data": None,
        "provider": None,
        "artifact": "",
        "split": "test",
        "wp_offset_deg": 0.0,
        "seed": DEFAULT_SEED,
        "anchor_index": GRAY_ANCHOR_INDEX,
        "reference_white": list(D50_WHITE),
        "resolution": list(EVAL_RESOLUTION),
        "head": HeadKind.LINEAR.value,
        "size": 3,
    }
    options = [
        click.Option(["--data"], type=str, help="Dataset directory written by synth."),
        click.Option(["--provider"], type=click.Choice(PROVIDERS)),
        click.Option(["--artifact"], type=str, help="model.json, nn_index.json, lut.json or an anchor set."),
        click.Option(["--split"], type=click.Choice(["train", "val", "test"])),
        click.Option(["--wp-offset-deg"], type=float, help="White point perturbation (degrees)."),
        click.Option(["--seed"], type=int),
        click.Option(["--anchor-index"], type=int, help="Gray patch used to match luminance for delta E."),
        click.Option(["--reference-white"], type=float, nargs=3),
        click.Option(["--resolution"], type=int, nargs=2, help="Width and height for the MACs estimate."),
        click.Option(["--head"], type=click.Choice([kind.value for kind in HeadKind]), help="Oracle CST head."),
        click.Option(["--size"], type=int, help="Oracle head feature count."),
    ]

    def run(self, job: JobConfig, out: Path) -> None:
        data = Path(job["data"])
        provider = build_provider(job)
        charts = load_split_charts(data, job["split"])

        offsets, failures = {}, {}
        if job["wp_offset_deg"] > 0:
            charts, offsets, failures = perturb_charts(charts, job["wp_offset_deg"], job["seed"], perturbation_anchors(job))

        report = evaluate(
            charts, provider, job["reference_white"], job["anchor_index"], offsets, tuple(job["resolution"]),
        )
        if failures:
            report = attrs.evolve(report, failures={**failures, **report.failures})
        write_report(report, out)
        summary = report.summary
        if summary:
            logger.info(
                "%s: mean angular %.4f deg, mean delta E %.4f over %d charts (%d failed).",
                provider.name, summary["angular"]["mean"], summary["delta_e"]["mean"], len(report.results), len(report.failures),
            )
