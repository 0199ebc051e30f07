"""
interpolation.py
Calibrated anchor CSTs, mired-space interpolation and the iterative
raw-to-xy white point estimate.
Created 17/10/2026
"""

from __future__ import annotations

import enum
import logging
from pathlib import Path
from typing import NamedTuple

import attrs
import numpy as np

from chromacst.cct.planckian import cct_lookup
from chromacst.colour.core import Chromaticity2D, ChromaticitySpace, Cst, HeadKind, WhitePoint, apply_cst
from chromacst.config import ANCHOR_COOL, ANCHOR_NEUTRAL, ANCHOR_WARM
from chromacst.errors import ConfigurationError, DegenerateMappingError, InvalidWhitePointError
from chromacst.utils.store import dump_json, load_json

logger = logging.getLogger(__name__)

# Fixed iteration constants of the unified estimate.
MAX_ITERATIONS = 30
TOLERANCE = 1e-7
START_XY = (0.34, 0.35)


class InterpolationMode(enum.Enum):
    TWO = "two"
    THREE = "three"


# Anchor temperatures each mode expects.
MODE_ANCHORS = {
    InterpolationMode.TWO: (ANCHOR_WARM, ANCHOR_COOL),
    InterpolationMode.THREE: (ANCHOR_WARM, ANCHOR_NEUTRAL, ANCHOR_COOL),
}


@attrs.frozen(eq=False)
class CalibratedCstSet:
    """Pre-calibrated linear CSTs at fixed anchor temperatures."""

    mode: InterpolationMode
    anchors: tuple[tuple[float, Cst], ...] = attrs.field(converter=tuple)

    def __attrs_post_init__(self) -> None:
        expected = MODE_ANCHORS[self.mode]
        ccts = tuple(float(cct) for cct, _ in self.anchors)
        if ccts != expected:
            raise ConfigurationError(f"{self.mode.value}-point set needs anchors {expected} K, instead got {ccts}.")
        for cct, cst in self.anchors:
            if cst.head is not HeadKind.LINEAR:
                raise ConfigurationError(f"Anchor at {cct} K is not a linear CST.")

    def cst_at(self, cct: float) -> Cst:
        for anchor, cst in self.anchors:
            if anchor == cct:
                return cst
        raise ConfigurationError(f"No anchor at {cct} K in this {self.mode.value}-point set.")

    @classmethod
    def two_point(cls, warm: Cst, cool: Cst) -> CalibratedCstSet:
        return cls(InterpolationMode.TWO, ((ANCHOR_WARM, warm), (ANCHOR_COOL, cool)))

    @classmethod
    def three_point(cls, warm: Cst, neutral: Cst, cool: Cst) -> CalibratedCstSet:
        return cls(InterpolationMode.THREE, ((ANCHOR_WARM, warm), (ANCHOR_NEUTRAL, neutral), (ANCHOR_COOL, cool)))

    def to_json(self) -> dict:
        return {
            "mode": self.mode.value,
            "anchors": [{"cct": cct, "m": cst.m.tolist()} for cct, cst in self.anchors],
        }

    @classmethod
    def from_json(cls, data: dict) -> CalibratedCstSet:
        try:
            mode = InterpolationMode(data["mode"])
            anchors = tuple((float(a["cct"]), Cst(a["m"])) for a in data["anchors"])
        except (KeyError, ValueError) as e:
            raise ConfigurationError(f"Malformed calibrated CST set: {e}") from e
        return cls(mode, anchors)

    def save(self, path: Path) -> None:
        dump_json(path, self.to_json())

    @classmethod
    def load(cls, path: Path) -> CalibratedCstSet:
        return cls.from_json(load_json(path, "Run `synth` to calibrate the anchors, or pass --artifact."))


def mired_weight(cct: float, lo: float, hi: float) -> float:
    """
    Weight of the lo anchor when blending linearly in mired, clamped to [0, 1].
    """
    g = (1.0 / cct - 1.0 / hi) / (1.0 / lo - 1.0 / hi)
    return min(max(g, 0.0), 1.0)


def _blend(g: float, lo: Cst, hi: Cst) -> Cst:
    return Cst(g * lo.m + (1.0 - g) * hi.m)


def interpolate_cst(cct: float, cst_set: CalibratedCstSet) -> Cst:
    """
    Interpolate the anchor CSTs at a colour temperature.

    Three-point sets use the warm-neutral pair strictly below the neutral
    anchor and the neutral-cool pair otherwise.
    """
    if cst_set.mode is InterpolationMode.TWO:
        (lo, t_lo), (hi, t_hi) = cst_set.anchors
    elif cct < ANCHOR_NEUTRAL:
        (lo, t_lo), (hi, t_hi) = cst_set.anchors[0], cst_set.anchors[1]
    else:
        (lo, t_lo), (hi, t_hi) = cst_set.anchors[1], cst_set.anchors[2]
    return _blend(mired_weight(cct, lo, hi), t_lo, t_hi)


class WhiteEstimate(NamedTuple):
    xy: Chromaticity2D
    cct: float
    off_locus: bool
    iterations: int
    converged: bool


def _mapped_xy(n_raw: np.ndarray, cst: Cst) -> tuple[float, float]:
    xyz = apply_cst(n_raw, cst)
    total = float(np.sum(xyz))
    if not total > 0:
        raise DegenerateMappingError(f"Interpolated CST maps the white to XYZ with sum {total}.")
    x, y = xyz[0] / total, xyz[1] / total
    if x < 0 or y <= 0 or x + y > 1:
        raise DegenerateMappingError(f"Interpolated CST maps the white outside the xy gamut ({x}, {y}).")
    return float(x), float(y)


def estimate_white_xy(n_raw, cst_set: CalibratedCstSet) -> WhiteEstimate:
    """
    Estimate the xy chromaticity and CCT of a raw white by fixed-point iteration.

    Each step looks up the CCT of the current xy, interpolates the CST there,
    maps the raw white to XYZ and takes its chromaticity. Stops once
    |dx| + |dy| < TOLERANCE. Without convergence within MAX_ITERATIONS, the
    average of the last two iterates is returned.

    Args:
        n_raw (ArrayLike): The raw white triple, positive in every channel.
        cst_set (CalibratedCstSet): The calibrated anchors.

    Returns:
        WhiteEstimate: The chromaticity, its CCT and convergence details.

    Raises:
        DegenerateMappingError: An interpolated CST maps the white to a
            nonpositive XYZ sum.
    """
    n_raw = np.asarray(n_raw, dtype=np.float64)
    if n_raw.shape != (3,) or np.any(n_raw <= 0):
        raise InvalidWhitePointError(f"Raw white must be positive, instead got {n_raw}.")

    previous = current = START_XY
    for iteration in range(1, MAX_ITERATIONS + 1):
        cct = cct_lookup(Chromaticity2D(*current, ChromaticitySpace.XY)).kelvin
        estimate = _mapped_xy(n_raw, interpolate_cst(cct, cst_set))
        if abs(estimate[0] - current[0]) + abs(estimate[1] - current[1]) < TOLERANCE:
            xy = Chromaticity2D(*estimate, ChromaticitySpace.XY)
            result = cct_lookup(xy)
            return WhiteEstimate(xy, result.kelvin, result.off_locus, iteration, True)
        previous, current = current, estimate

    logger.debug("White estimate for %s did not converge, averaging the last two iterates.", n_raw)
    xy = Chromaticity2D(
        (previous[0] + current[0]) / 2, (previous[1] + current[1]) / 2, ChromaticitySpace.XY
    )
    result = cct_lookup(xy)
    return WhiteEstimate(xy, result.kelvin, result.off_locus, MAX_ITERATIONS, False)


def white_raw_to_xy(w: WhitePoint, cst_set: CalibratedCstSet) -> WhitePoint:
    """Fill in the xy chromaticity and CCT of a white point from its raw chromaticity."""
    estimate = estimate_white_xy(w.raw_vector(), cst_set)
    return w.with_xy(estimate.xy, estimate.cct, estimate.off_locus)
