"""
base_command.py
Base class for jobs added to the command line registry.
Created 17/10/2026
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import TYPE_CHECKING, Sequence

import click

from chromacst.colour.core import ChartObservation
from chromacst.dataset.charts import chart_from_json
from chromacst.dataset.sampling import SplitSpec
from chromacst.errors import DataError
from chromacst.utils.job import JobConfig, resolve_config
from chromacst.utils.store import ArtifactStore

if TYPE_CHECKING:
    from chromacst.app import ChromaCstApp

logger = logging.getLogger(__name__)

LOG_FILE = "job.log"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
CHARTS = "charts"


class JobCommand():
    """
    Base class for jobs. A job resolves its configuration, prepares the
    output directory with a config snapshot and a log file, then runs.
    """

    name = ""
    help = ""
    # Field validation table and defaults; None marks a required field.
    fields: dict[str, tuple] = {}
    defaults: dict = {}
    # Command specific click options. Options default to None so that config
    # file values are only overridden by flags actually given.
    options: list[click.Option] = []

    def __init__(self, app: ChromaCstApp) -> None:
        """Class initialisation."""
        self.app = app

    def command(self) -> click.Command:
        params = [
            click.Option(["--config", "config_path"], type=click.Path(dir_okay=False, path_type=Path), help="Job file (.toml or .json)."),
            click.Option(["--out"], type=str, help="Output directory."),
            *self.options,
        ]
        return click.Command(self.name, callback=self._invoke, params=params, help=self.help)

    def _invoke(self, config_path: Path | None, **flags) -> None:
        # Unset multi-value options arrive as empty tuples.
        flags = {k: (None if v == () else v) for k, v in flags.items()}
        job = resolve_config(self.name, self.fields, self.defaults, config_path, flags)
        out = Path(job["out"])
        out.mkdir(parents=True, exist_ok=True)

        handler = logging.FileHandler(out / LOG_FILE, mode="w")
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logging.getLogger().addHandler(handler)
        try:
            job.save(out)
            logger.info("Running %s into %s.", self.name, out)
            self.run(job, out)
        finally:
            logging.getLogger().removeHandler(handler)
            handler.close()

    def run(self, job: JobConfig, out: Path) -> None:
        raise NotImplementedError


def load_charts(data_dir: Path, ids: Sequence[str]) -> list[ChartObservation]:
    """
    Load the stored charts for the given ids. Ids without a stored chart were
    discarded at synthesis and are skipped.
    """
    store = ArtifactStore(data_dir)
    stored = set(store.keys(CHARTS))
    missing = [i for i in ids if i not in stored]
    if missing:
        logger.info("Skipping %d discarded chart(s).", len(missing))
    return [chart_from_json(store.read(CHARTS, i)) for i in ids if i in stored]


def load_split_charts(data_dir: Path, part: str) -> list[ChartObservation]:
    """Charts of one split part ("train", "val" or "test") of a synthesized dataset."""
    split = SplitSpec.load(Path(data_dir) / "split.json")
    charts = load_charts(data_dir, split.part(part))
    if not charts:
        raise DataError(f"No charts stored for the {part} split in {data_dir}.")
    return charts
