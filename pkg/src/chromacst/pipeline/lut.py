"""
lut.py
Export of a 2D-input CST-MLP to a uniform grid of CSTs, queried bilinearly.
Created 17/10/2026
"""

from __future__ import annotations

import math
from pathlib import Path

import attrs
import numpy as np
from numpy.typing import ArrayLike, NDArray

from chromacst.colour.core import Cst, HeadKind, WhitePoint
from chromacst.config import LUT_MARGIN
from chromacst.errors import ConfigurationError, UnsupportedEncodingError
from chromacst.mlp.encoding import InputEncoding, encode_input
from chromacst.mlp.model import MlpModel, assemble_matrices, forward_encoded
from chromacst.utils.store import dump_json, load_json

NODE_SNAP = 1e-9


def _as_cells(value) -> NDArray:
    array = np.array(value, dtype=np.float64)
    array.flags.writeable = False
    return array


@attrs.frozen(eq=False)
class Lut:
    """
    grid_n x grid_n CSTs at uniformly spaced nodes of the normalized input
    space. cells[i, j] sits at (node_i of the first coordinate, node_j of the second).
    """

    grid_n: int
    bounds: NDArray = attrs.field(converter=_as_cells) # (2, 2): per dimension (min, max).
    cells: NDArray = attrs.field(converter=_as_cells) # (grid_n, grid_n, 3, K).
    encoding: InputEncoding
    head: HeadKind = HeadKind.LINEAR

    def __attrs_post_init__(self) -> None:
        if self.grid_n < 2:
            raise ConfigurationError(f"LUT grid needs at least 2 nodes per side, instead got {self.grid_n}.")
        if not self.encoding.is_2d:
            raise UnsupportedEncodingError(f"LUTs need a 2D encoding, instead got {self.encoding.kind.value}.")
        if self.cells.shape[:3] != (self.grid_n, self.grid_n, 3) or self.bounds.shape != (2, 2):
            raise ConfigurationError(f"LUT cells {self.cells.shape} or bounds {self.bounds.shape} do not match grid {self.grid_n}.")
        if not np.all(np.isfinite(self.cells)) or np.any(self.bounds[:, 1] <= self.bounds[:, 0]):
            raise ConfigurationError("LUT cells must be finite and bounds increasing.")

    @property
    def size(self) -> int:
        return self.cells.shape[-1]

    @property
    def entries(self) -> int:
        return self.grid_n * self.grid_n

    def size_bytes(self) -> int:
        """Storage of the cell matrices as float32."""
        return self.cells.size * 4

    def nodes(self, dim: int) -> NDArray:
        lo, hi = self.bounds[dim]
        return lo + (hi - lo) * np.arange(self.grid_n) / (self.grid_n - 1)

    def to_json(self) -> dict:
        return {
            "grid_n": self.grid_n,
            "bounds": self.bounds.tolist(),
            "head": self.head.value,
            "encoding": self.encoding.to_json(),
            "cells": self.cells.reshape(self.entries, -1).tolist(),
        }

    @classmethod
    def from_json(cls, data: dict) -> Lut:
        grid_n = int(data["grid_n"])
        cells = np.asarray(data["cells"], dtype=np.float64)
        return cls(
            grid_n,
            data["bounds"],
            cells.reshape(grid_n, grid_n, 3, -1),
            InputEncoding.from_json(data["encoding"]),
            HeadKind(data.get("head", "linear")),
        )

    def save(self, path: Path) -> None:
        dump_json(path, self.to_json())

    @classmethod
    def load(cls, path: Path) -> Lut:
        return cls.from_json(load_json(path, "Export a LUT with `lut` first."))


def lut_export(model: MlpModel, grid_n: int, margin: float = LUT_MARGIN) -> Lut:
    """
    Sample a 2D-input model on a uniform grid.

    The grid spans the normalized training range [0, 1] widened by margin on
    every side.

    Raises:
        UnsupportedEncodingError: The model takes a 1D input.
    """
    if not model.encoding.is_2d:
        raise UnsupportedEncodingError(f"Cannot export a {model.encoding.kind.value} model to a 2D LUT.")
    if grid_n < 2:
        raise ConfigurationError(f"LUT grid needs at least 2 nodes per side, instead got {grid_n}.")
    bounds = np.array(((-margin, 1.0 + margin), (-margin, 1.0 + margin)))
    axis = -margin + (1.0 + 2.0 * margin) * np.arange(grid_n) / (grid_n - 1)
    first, second = np.meshgrid(axis, axis, indexing="ij")
    inputs = np.stack((first.reshape(-1), second.reshape(-1)), axis=-1)
    cells = assemble_matrices(forward_encoded(model, inputs), model.size)
    return Lut(grid_n, bounds, cells.reshape(grid_n, grid_n, 3, model.size), model.encoding, model.head)


def _grid_position(lut: Lut, value: float, dim: int) -> tuple[int, float]:
    lo, hi = lut.bounds[dim]
    t = (min(max(value, lo), hi) - lo) / (hi - lo) * (lut.grid_n - 1)
    if abs(t - round(t)) < NODE_SNAP:
        t = float(round(t))
    cell = min(int(math.floor(t)), lut.grid_n - 2)
    return cell, t - cell


def lut_query_encoded(lut: Lut, x: ArrayLike) -> Cst:
    """Bilinear blend of the four cells around an encoded input, clamped to the bounds."""
    i, f = _grid_position(lut, float(x[0]), 0)
    j, g = _grid_position(lut, float(x[1]), 1)
    cells = lut.cells
    m = (
        (1.0 - f) * (1.0 - g) * cells[i, j]
        + f * (1.0 - g) * cells[i + 1, j]
        + (1.0 - f) * g * cells[i, j + 1]
        + f * g * cells[i + 1, j + 1]
    )
    return Cst(m, lut.head)


def lut_query(lut: Lut, w: WhitePoint) -> Cst:
    return lut_query_encoded(lut, encode_input(w, lut.encoding))
