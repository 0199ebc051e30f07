"""
nearest.py
Nearest-neighbour baseline: oracle CSTs of training charts keyed by their encoded white points.
Created 17/10/2026
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence

import attrs
import numpy as np
from numpy.typing import NDArray

from chromacst.colour.core import ChartObservation, Cst, HeadKind, WhitePoint
from chromacst.errors import ConfigurationError, EncodingError, FitFailureError
from chromacst.fitting.oracle import oracle_fit
from chromacst.mlp.encoding import InputEncoding, encode_input, encode_many
from chromacst.utils.store import dump_json, load_json

logger = logging.getLogger(__name__)


def _as_keys(value) -> NDArray:
    array = np.array(value, dtype=np.float64, ndmin=2)
    array.flags.writeable = False
    return array


@attrs.frozen(eq=False)
class NnIndex:
    keys: NDArray = attrs.field(converter=_as_keys)
    csts: tuple[Cst, ...] = attrs.field(converter=tuple)
    encoding: InputEncoding
    ids: tuple[str, ...] = attrs.field(default=(), converter=tuple)

    def __attrs_post_init__(self) -> None:
        if len(self.csts) == 0 or len(self.keys) != len(self.csts):
            raise ConfigurationError(f"Index needs matching keys and CSTs, instead got {len(self.keys)} and {len(self.csts)}.")
        if self.keys.shape[1] != self.encoding.dim or not np.all(np.isfinite(self.keys)):
            raise EncodingError(f"Index keys must be finite {self.encoding.dim}D points.")

    def __len__(self) -> int:
        return len(self.csts)

    def to_json(self) -> dict:
        return {
            "encoding": self.encoding.to_json(),
            "keys": self.keys.tolist(),
            "csts": [cst.to_json() for cst in self.csts],
            "ids": list(self.ids),
        }

    @classmethod
    def from_json(cls, data: dict) -> NnIndex:
        return cls(
            data["keys"],
            tuple(Cst.from_json(c) for c in data["csts"]),
            InputEncoding.from_json(data["encoding"]),
            data.get("ids", ()),
        )

    def save(self, path: Path) -> None:
        dump_json(path, self.to_json())

    @classmethod
    def load(cls, path: Path) -> NnIndex:
        return cls.from_json(load_json(path))


def nn_build(
    train: Sequence[ChartObservation],
    enc: InputEncoding,
    head: HeadKind = HeadKind.LINEAR,
    size: int = 3,
) -> NnIndex:
    """
    Fit the oracle CST of every training chart and key it by the encoded white point.

    Raises:
        FitFailureError: An oracle fit failed; the message names the chart.
    """
    if len(train) == 0:
        raise ConfigurationError("Cannot build a nearest-neighbour index without training charts.")
    csts = []
    for obs in train:
        try:
            csts.append(oracle_fit(obs, head, size))
        except FitFailureError as e:
            raise FitFailureError(e.residual, f"Oracle fit of {obs.illuminant_id} failed.") from e
    logger.info("Built nearest-neighbour index over %d charts.", len(csts))
    return NnIndex(encode_many([obs.white for obs in train], enc), csts, enc, [obs.illuminant_id for obs in train])


def nearest_index(idx: NnIndex, key: NDArray) -> int:
    """Index of the closest key in Euclidean distance, lowest index on ties."""
    distances = np.sum((idx.keys - key) ** 2, axis=1)
    return int(np.argmin(distances))


def nn_query(idx: NnIndex, w: WhitePoint) -> Cst:
    return idx.csts[nearest_index(idx, encode_input(w, idx.encoding))]
