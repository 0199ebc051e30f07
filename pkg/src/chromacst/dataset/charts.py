"""
charts.py
Chart observations from patch responses, the clipping filter, chart documents
and the reference chart.
Created 17/10/2026
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from chromacst.colour.core import ChartObservation, Chromaticity2D, ChromaticitySpace, WhitePoint
from chromacst.colour.metrics import lab_to_xyz
from chromacst.config import ASSETS_DIR, WHITE_PATCH_INDEX
from chromacst.dataset.images import RawImage, extract_patches
from chromacst.errors import DataError, DegenerateWhiteError, PathError


def clip_filter(patches: ArrayLike, black: float, white: float, margin: float) -> bool:
    """
    Whether a chart is usable: every channel of every patch lies within
    [black + margin * range, white - margin * range], bounds included.
    """
    patches = np.asarray(patches, dtype=np.float64)
    span = white - black
    return bool(np.all(patches >= black + margin * span) and np.all(patches <= white - margin * span))


def build_observation(
    patches_raw: ArrayLike,
    gt_xyz: ArrayLike,
    white_patch_index: int = WHITE_PATCH_INDEX,
    illuminant_id: str = "",
    meta: dict | None = None,
) -> ChartObservation:
    """
    Make an observation whose white point is the (R/G, B/G) of the white patch.

    Args:
        patches_raw (ArrayLike): Black-subtracted patch means, shape (24, 3).
        gt_xyz (ArrayLike): Reference XYZ of the patches, shape (24, 3).
        white_patch_index (int, optional): 0-based index of the white patch.
        illuminant_id (str, optional): Identifier of the illuminant.
        meta (dict, optional): Extra provenance kept with the observation.

    Raises:
        DegenerateWhiteError: The white patch is not positive in every channel.
    """
    patches_raw = np.asarray(patches_raw, dtype=np.float64)
    r, g, b = patches_raw[white_patch_index]
    if not (r > 0 and g > 0 and b > 0):
        raise DegenerateWhiteError(f"White patch of {illuminant_id or 'chart'} is ({r}, {g}, {b}).")
    white = WhitePoint.from_raw(r / g, b / g)
    return ChartObservation(patches_raw, white, gt_xyz, illuminant_id, meta or {})


def observation_from_image(
    img: RawImage,
    centers: Sequence[tuple[int, int]],
    window: int,
    gt_xyz: ArrayLike,
    illuminant_id: str = "",
    white_patch_index: int = WHITE_PATCH_INDEX,
) -> ChartObservation:
    patches = extract_patches(img, centers, window) - img.black_level
    return build_observation(patches, gt_xyz, white_patch_index, illuminant_id)


def chart_to_json(obs: ChartObservation) -> dict:
    document = {
        "illuminant_id": obs.illuminant_id,
        "white": [obs.white.raw.a, obs.white.raw.b],
        "patches_raw": obs.patches_raw.tolist(),
        "gt_xyz": obs.gt_xyz.tolist(),
    }
    if obs.white.xy is not None:
        document["white_xy"] = [obs.white.xy.a, obs.white.xy.b]
        document["white_cct"] = obs.white.cct
        document["white_off_locus"] = obs.white.off_locus
    if obs.meta:
        document["meta"] = obs.meta
    return document


def chart_from_json(document: dict) -> ChartObservation:
    try:
        white = WhitePoint.from_raw(*document["white"])
        if "white_xy" in document:
            xy = Chromaticity2D(*document["white_xy"], ChromaticitySpace.XY)
            white = white.with_xy(xy, document["white_cct"], document.get("white_off_locus", False))
        return ChartObservation(
            document["patches_raw"], white, document["gt_xyz"], document["illuminant_id"], document.get("meta", {})
        )
    except KeyError as e:
        raise DataError(f"Chart document is missing {e}.") from e


def load_reference_chart(path: Path | None = None) -> NDArray:
    """
    The reference chart XYZ (D50), converted from the published CIELAB values.

    Returns:
        NDArray: XYZ with the perfect diffuser at Y = 1, shape (24, 3).
    """
    path = Path(path) if path is not None else ASSETS_DIR / "colorchecker_lab_d50.json"
    if not path.exists():
        raise PathError(path, "Set CHROMACST_ASSETS_DIR to a directory holding colorchecker_lab_d50.json.")
    with open(path, "r") as file:
        document = json.load(file)
    return lab_to_xyz(document["lab"], document["reference_white"])
