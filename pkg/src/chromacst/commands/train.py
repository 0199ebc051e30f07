"""
train.py
Trains a CST-MLP variant, or builds the nearest-neighbour index, on the train split.
Created 17/10/2026
"""

from __future__ import annotations

import csv
import logging
from pathlib import Path

import click

from chromacst.base_command import JobCommand, load_split_charts
from chromacst.colour.core import HeadKind, check_head
from chromacst.config import (
    DEFAULT_ACTIVATION,
    DEFAULT_BATCH,
    DEFAULT_HIDDEN,
    DEFAULT_ITERATIONS,
    DEFAULT_LAYERS,
    DEFAULT_LR,
    DEFAULT_NOISE_SIGMA,
    DEFAULT_SEED,
    LOSS_LOG_EVERY,
)
from chromacst.dataset.charts import chart_to_json
from chromacst.fitting.nearest import nn_build
from chromacst.mlp.encoding import EncodingKind, fit_encoding
from chromacst.mlp.model import Activation
from chromacst.mlp.train import TrainConfig, train
from chromacst.utils.fingerprint import fingerprint_documents
from chromacst.utils.job import JobConfig

logger = logging.getLogger(__name__)

ENCODINGS = tuple(kind.value for kind in EncodingKind)
HEADS = tuple(kind.value for kind in HeadKind)
ACTIVATIONS = tuple(kind.value for kind in Activation)


class TrainCommand(JobCommand):
    name = "train"
    help = "Train a CST-MLP (model.json) or build a nearest-neighbour index (nn_index.json)."

    fields = {
        "out": (str,),
        "data": (str,),
        "seed": (int, 0, 2**32 - 1),
        "method": (str, ("mlp", "nn")),
        "encoding": (str, ENCODINGS),
        "hidden": (int, 1, 4096),
        "layers": (int, 1, 16),
        "activation": (str, ACTIVATIONS),
        "head": (str, HEADS),
        "size": (int, 3, 19),
        "noise_sigma": (float, 0.0, 10.0),
        "lr": (float, 1e-9, 10.0),
        "iterations": (int, 1, 10**8),
        "batch": (int, 1, 10**6),
        "log_every": (int, 1, 10**8),
    }
    defaults = {
        "out": None,
        "data": None,
        "seed": DEFAULT_SEED,
        "method": "mlp",
        "encoding": EncodingKind.XY2D.value,
        "hidden": DEFAULT_HIDDEN,
        "layers": DEFAULT_LAYERS,
        "activation": DEFAULT_ACTIVATION,
        "head": HeadKind.LINEAR.value,
        "size": 3,
        "noise_sigma": DEFAULT_NOISE_SIGMA,
        "lr": DEFAULT_LR,
        "iterations": DEFAULT_ITERATIONS,
        "batch": DEFAULT_BATCH,
        "log_every": LOSS_LOG_EVERY,
    }
    options = [
        click.Option(["--data"], type=str, help="Dataset directory written by synth."),
        click.Option(["--seed"], type=int),
        click.Option(["--method"], type=click.Choice(["mlp", "nn"])),
        click.Option(["--encoding"], type=click.Choice(ENCODINGS)),
        click.Option(["--hidden"], type=int),
        click.Option(["--layers"], type=int),
        click.Option(["--activation"], type=click.Choice(ACTIVATIONS)),
        click.Option(["--head"], type=click.Choice(HEADS)),
        click.Option(["--size"], type=int, help="Feature count of the CST head."),
        click.Option(["--noise-sigma"], type=float),
        click.Option(["--lr"], type=float),
        click.Option(["--iterations"], type=int),
        click.Option(["--batch"], type=int),
        click.Option(["--log-every"], type=int),
    ]

    def run(self, job: JobConfig, out: Path) -> None:
        head = HeadKind(job["head"])
        check_head(head, job["size"])
        charts = load_split_charts(Path(job["data"]), "train")
        enc = fit_encoding(EncodingKind(job["encoding"]), [obs.white for obs in charts])

        if job["method"] == "nn":
            index = nn_build(charts, enc, head, job["size"])
            index.save(out / "nn_index.json")
            logger.info("Indexed %d training charts.", len(index.csts))
            return

        cfg = TrainConfig(job["iterations"], job["lr"], job["noise_sigma"], job["batch"], job["seed"], job["log_every"])
        meta = {
            "dataset": fingerprint_documents(chart_to_json(obs) for obs in charts),
            "encoding": job["encoding"],
            "train_charts": len(charts),
        }
        result = train(
            charts, cfg, enc, job["hidden"], job["layers"], head, job["size"],
            Activation(job["activation"]), meta,
        )
        result.model.save(out / "model.json")
        with open(out / "loss_curve.csv", "w", newline="") as file:
            writer = csv.writer(file, lineterminator="\n")
            writer.writerow(("iteration", "loss"))
            for iteration, loss in result.loss_curve:
                writer.writerow((iteration, repr(float(loss))))
        logger.info("Saved model with %d parameters.", result.model.parameter_count)
