"""
lut.py
Exports a trained 2D CST-MLP to a bilinear lookup table.
Created 17/10/2026
"""

from __future__ import annotations

import logging
from pathlib import Path

import click

from chromacst.base_command import JobCommand
from chromacst.config import LUT_MARGIN
from chromacst.mlp.model import MlpModel
from chromacst.pipeline.lut import lut_export
from chromacst.utils.job import JobConfig

logger = logging.getLogger(__name__)


class LutCommand(JobCommand):
    name = "lut"
    help = "Export a 2D-input model to a grid_n x grid_n LUT (lut.json)."

    fields = {
        "out": (str,),
        "model": (str,),
        "grid_n": (int, 2, 1024),
        "margin": (float, 0.0, 1.0),
    }
    defaults = {
        "out": None,
        "model": None,
        "grid_n": 20,
        "margin": LUT_MARGIN,
    }
    options = [
        click.Option(["--model"], type=str, help="model.json written by train."),
        click.Option(["--grid-n"], type=int, help="Nodes per side."),
        click.Option(["--margin"], type=float, help="Grid extension beyond the training range, in normalized units."),
    ]

    def run(self, job: JobConfig, out: Path) -> None:
        model = MlpModel.load(Path(job["model"]))
        lut = lut_export(model, job["grid_n"], job["margin"])
        lut.save(out / "lut.json")
        logger.info("Exported %dx%d LUT: %.2f KB as float32.", lut.grid_n, lut.grid_n, lut.size_bytes() / 1024)
