"""
synth.py
Synthesizes a chart dataset from LED mixtures and blackbodies on the synthetic camera.
Created 17/10/2026
"""

from __future__ import annotations

import logging
from pathlib import Path

import click

from chromacst.base_command import CHARTS, JobCommand
from chromacst.config import (
    CLIP_MARGIN,
    DEFAULT_SEED,
    LED_COUNT,
    PATCH_WINDOW,
    SPLIT_FRACTIONS,
)
from chromacst.dataset.charts import chart_to_json
from chromacst.dataset.images import save_raw_image
from chromacst.dataset.sampling import sample_dirichlet_illuminants, split_dataset
from chromacst.dataset.spectra import save_bundle
from chromacst.dataset.synthetic import (
    calibrate_anchors,
    load_synthetic_camera,
    planckian_illuminants,
    synthesize_chart,
)
from chromacst.errors import ConfigurationError
from chromacst.utils.job import JobConfig
from chromacst.utils.store import ArtifactStore, dump_json

logger = logging.getLogger(__name__)


class SynthCommand(JobCommand):
    name = "synth"
    help = "Synthesize illuminants, chart observations, anchors and a split."

    fields = {
        "out": (str,),
        "seed": (int, 0, 2**32 - 1),
        "n": (int, 0, 100000),
        "concentration": (list, float, 1, LED_COUNT),
        "planckian_ccts": (list, float, 0, 1000),
        "led_weights": (list, float, 0, 1000 * LED_COUNT),
        "fractions": (list, float, 3, 3),
        "window": (int, 1, 15),
        "clip_margin": (float, 0.0, 0.49),
        "black_level": (float, 0.0, 0.5),
        "white_level": (float, 0.5, 65535.0),
        "camera": (str,),
        "write_images": (bool,),
    }
    defaults = {
        "out": None,
        "seed": DEFAULT_SEED,
        "n": 400,
        "concentration": [1 / LED_COUNT],
        "planckian_ccts": [],
        "led_weights": [],
        "fractions": list(SPLIT_FRACTIONS),
        "window": PATCH_WINDOW,
        "clip_margin": CLIP_MARGIN,
        "black_level": 0.0,
        "white_level": 1.0,
        "camera": "",
        "write_images": False,
    }
    options = [
        click.Option(["--seed"], type=int),
        click.Option(["--n"], type=int, help="Number of Dirichlet sampled LED mixtures."),
        click.Option(["--concentration"], type=float, multiple=True, help="Dirichlet concentration: one value for every LED, or one per LED."),
        click.Option(["--planckian-cct", "planckian_ccts"], type=float, multiple=True, help="Blackbody illuminant (K), repeatable."),
        click.Option(["--led-weights", "led_weights"], type=float, nargs=LED_COUNT, multiple=True, help="Listed LED mixture, repeatable."),
        click.Option(["--fractions"], type=float, nargs=3, help="Train, validation and test fractions."),
        click.Option(["--window"], type=int, help="Patch averaging window (pixels)."),
        click.Option(["--clip-margin"], type=float),
        click.Option(["--black-level"], type=float),
        click.Option(["--white-level"], type=float),
        click.Option(["--camera"], type=str, help="Synthetic camera asset (JSON)."),
        click.Option(["--write-images/--no-write-images"], default=None),
    ]

    def _invoke(self, config_path: Path | None, **flags) -> None:
        # Repeated 7-value mixtures arrive as a tuple of tuples.
        if flags.get("led_weights"):
            flags["led_weights"] = [w for mixture in flags["led_weights"] for w in mixture]
        super()._invoke(config_path, **flags)

    def run(self, job: JobConfig, out: Path) -> None:
        if job["black_level"] >= job["white_level"]:
            raise ConfigurationError("black_level must be below white_level.")
        if len(job["led_weights"]) % LED_COUNT != 0:
            raise ConfigurationError(f"led_weights must hold {LED_COUNT} values per mixture.")
        concentration = job["concentration"]
        if len(concentration) not in (1, LED_COUNT):
            raise ConfigurationError(f"concentration must hold 1 or {LED_COUNT} values, instead got {len(concentration)}.")

        camera = load_synthetic_camera(Path(job["camera"]) if job["camera"] else None)
        anchors = calibrate_anchors(camera)
        anchors.two.save(out / "anchors_two.json")
        anchors.three.save(out / "anchors_three.json")

        spds = []
        if job["n"] > 0:
            spds += sample_dirichlet_illuminants(camera.bank, job["n"], concentration * (LED_COUNT // len(concentration)), job["seed"])
        weights = job["led_weights"]
        for index in range(len(weights) // LED_COUNT):
            spds.append(camera.bank.mix(weights[index * LED_COUNT:(index + 1) * LED_COUNT], f"listed_{index:04d}"))
        spds += planckian_illuminants(camera, job["planckian_ccts"])
        if not spds:
            raise ConfigurationError("Nothing to synthesize: set n, led_weights or planckian_ccts.")
        ids = [spd.name for spd in spds]
        if len(set(ids)) != len(ids):
            raise ConfigurationError("Illuminant names must be unique; remove repeated Planckian temperatures.")
        save_bundle(out / "spds.json", spds, meta=True)

        store = ArtifactStore(out)
        for key in store.keys(CHARTS):
            store.erase(CHARTS, key)
        led_images = camera.led_images(job["black_level"], job["white_level"])
        discarded = []
        for spd in spds:
            result = synthesize_chart(
                camera, spd, anchors.two, led_images,
                job["black_level"], job["white_level"], job["window"], job["clip_margin"],
            )
            if job["write_images"]:
                (out / "images").mkdir(exist_ok=True)
                save_raw_image(out / "images" / f"{spd.name}.tensor", result.image)
            if result.observation is None:
                discarded.append(spd.name)
                continue
            store.write(CHARTS, spd.name, chart_to_json(result.observation))

        split = split_dataset(ids, job["fractions"], job["seed"])
        split.save(out / "split.json")
        dump_json(out / "discarded.json", {"discarded": discarded})
        logger.info(
            "Synthesized %d charts (%d discarded); split %d/%d/%d.",
            len(spds) - len(discarded), len(discarded), len(split.train), len(split.val), len(split.test),
        )
