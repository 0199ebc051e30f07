"""
core.py
Colour value types, white balance, CST application and chromaticity conversion.
Created 17/10/2026
"""

from __future__ import annotations

import enum
import math

import attrs
import numpy as np
from numpy.typing import ArrayLike, NDArray

from chromacst.config import CCT_MAX, CCT_MIN, CHART_PATCHES
from chromacst.errors import (
    ConfigurationError,
    DataError,
    DegenerateColorError,
    InvalidWhitePointError,
)


class ChromaticitySpace(enum.Enum):
    RAW = "raw" # (r/g, b/g)
    XY = "xy"   # CIE 1931 xy


class HeadKind(enum.Enum):
    LINEAR = "linear"
    POLY = "poly"
    ROOTPOLY = "rootpoly"


# Feature sizes each head supports.
HEAD_SIZES = {
    HeadKind.LINEAR: (3,),
    HeadKind.POLY: (9, 19),
    HeadKind.ROOTPOLY: (6, 13),
}


def check_head(kind: HeadKind, size: int) -> None:
    """
    Check that a (head kind, feature size) pair is supported.

    Raises:
        ConfigurationError: The combination is not supported.
    """
    if size not in HEAD_SIZES.get(kind, ()):
        raise ConfigurationError(f"Unsupported head {kind.value} with {size} features.")


def _finite(instance, attribute, value) -> None:
    if not math.isfinite(value):
        raise DegenerateColorError(f"{attribute.name} must be finite, instead got: {value}.")


def _nonnegative(instance, attribute, value) -> None:
    _finite(instance, attribute, value)
    if value < 0:
        raise DegenerateColorError(f"{attribute.name} must be nonnegative, instead got: {value}.")


@attrs.frozen
class RawTriple:
    """A linear sensor response."""

    r: float = attrs.field(converter=float, validator=_nonnegative)
    g: float = attrs.field(converter=float, validator=_nonnegative)
    b: float = attrs.field(converter=float, validator=_nonnegative)

    def __array__(self, dtype=None, copy=None) -> NDArray:
        return np.array((self.r, self.g, self.b), dtype=dtype or np.float64)


@attrs.frozen
class XyzTriple:
    """CIE XYZ tristimulus values."""

    x: float = attrs.field(converter=float, validator=_finite)
    y: float = attrs.field(converter=float, validator=_finite)
    z: float = attrs.field(converter=float, validator=_finite)

    def __array__(self, dtype=None, copy=None) -> NDArray:
        return np.array((self.x, self.y, self.z), dtype=dtype or np.float64)


@attrs.frozen
class Chromaticity2D:
    """Two chromaticity coordinates, tagged with the space they live in."""

    a: float = attrs.field(converter=float, validator=_finite)
    b: float = attrs.field(converter=float, validator=_finite)
    space: ChromaticitySpace = ChromaticitySpace.XY

    def __attrs_post_init__(self) -> None:
        if self.space is ChromaticitySpace.XY:
            if self.a < 0 or self.b <= 0 or self.a + self.b > 1:
                raise DegenerateColorError(f"Invalid xy chromaticity ({self.a}, {self.b}).")
        elif self.a <= 0 or self.b <= 0:
            raise InvalidWhitePointError(f"Raw chromaticity must be positive, instead got ({self.a}, {self.b}).")

    def __array__(self, dtype=None, copy=None) -> NDArray:
        return np.array((self.a, self.b), dtype=dtype or np.float64)


@attrs.frozen
class WhitePoint:
    """
    Illuminant descriptor. The raw chromaticity is always present, xy and CCT
    only once they have been derived from it.
    """

    raw: Chromaticity2D
    xy: Chromaticity2D | None = None
    cct: float | None = None
    off_locus: bool = False

    def __attrs_post_init__(self) -> None:
        if self.raw.space is not ChromaticitySpace.RAW:
            raise InvalidWhitePointError("WhitePoint.raw must be a raw chromaticity.")
        if self.xy is not None and self.xy.space is not ChromaticitySpace.XY:
            raise InvalidWhitePointError("WhitePoint.xy must be an xy chromaticity.")
        if self.cct is not None and not CCT_MIN <= self.cct <= CCT_MAX:
            raise InvalidWhitePointError(f"CCT {self.cct} K outside [{CCT_MIN}, {CCT_MAX}] K.")

    @classmethod
    def from_raw(cls, r_over_g: float, b_over_g: float) -> WhitePoint:
        return cls(raw=Chromaticity2D(r_over_g, b_over_g, ChromaticitySpace.RAW))

    def with_xy(self, xy: Chromaticity2D, cct: float, off_locus: bool = False) -> WhitePoint:
        return attrs.evolve(self, xy=xy, cct=cct, off_locus=off_locus)

    def raw_vector(self) -> NDArray:
        """The white point as a sensor triple with unit green, (r/g, 1, b/g)."""
        return np.array((self.raw.a, 1.0, self.raw.b))


def _as_matrix(value) -> NDArray:
    return np.array(value, dtype=np.float64, ndmin=2)


@attrs.frozen(eq=False)
class Cst:
    """A 3xK colour space transform. K is 3 for the linear head."""

    m: NDArray = attrs.field(converter=_as_matrix)
    head: HeadKind = HeadKind.LINEAR

    def __attrs_post_init__(self) -> None:
        if self.m.ndim != 2 or self.m.shape[0] != 3:
            raise ConfigurationError(f"CST must have 3 rows, instead got shape {self.m.shape}.")
        check_head(self.head, self.m.shape[1])
        if not np.all(np.isfinite(self.m)):
            raise DegenerateColorError("CST entries must be finite.")
        self.m.flags.writeable = False

    @property
    def size(self) -> int:
        return self.m.shape[1]

    @classmethod
    def identity(cls, head: HeadKind = HeadKind.LINEAR, size: int = 3) -> Cst:
        m = np.zeros((3, size))
        m[:, :3] = np.eye(3)
        return cls(m, head)

    def center_normalized(self) -> Cst:
        """Scale the matrix so that entry (1, 1) is exactly 1."""
        center = self.m[1, 1]
        if center == 0:
            raise DegenerateColorError("Cannot normalize a CST with a zero centre entry.")
        m = self.m / center
        m[1, 1] = 1.0
        return Cst(m, self.head)

    def is_invertible(self) -> bool:
        return self.head is not HeadKind.LINEAR or abs(np.linalg.det(self.m)) > 1e-12

    def to_json(self) -> dict:
        return {"head": self.head.value, "m": self.m.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> Cst:
        return cls(data["m"], HeadKind(data.get("head", "linear")))


def _as_patches(values, name: str) -> NDArray:
    array = np.array(values, dtype=np.float64)
    if array.shape != (CHART_PATCHES, 3):
        raise DataError(f"{name} must hold {CHART_PATCHES} triples, instead got shape {array.shape}.")
    if not np.all(np.isfinite(array)):
        raise DegenerateColorError(f"{name} must be finite.")
    array.flags.writeable = False
    return array


@attrs.frozen(eq=False)
class ChartObservation:
    """One colour chart captured under one illuminant, with its ground truth."""

    patches_raw: NDArray = attrs.field(converter=lambda v: _as_patches(v, "patches_raw"))
    white: WhitePoint
    gt_xyz: NDArray = attrs.field(converter=lambda v: _as_patches(v, "gt_xyz"))
    illuminant_id: str = ""
    meta: dict = attrs.field(factory=dict)

    def __attrs_post_init__(self) -> None:
        if np.any(self.patches_raw < 0):
            raise DegenerateColorError(f"Chart {self.illuminant_id} has negative raw patches.")


def white_balance(p: ArrayLike, w: WhitePoint) -> NDArray:
    """
    Apply the diagonal white balance diag(1/(r/g), 1, 1/(b/g)).

    Args:
        p (ArrayLike): Raw triples, shape (..., 3).
        w (WhitePoint): The scene white point.

    Returns:
        NDArray: White balanced triples, same shape as p.

    Raises:
        InvalidWhitePointError: The white point has a nonpositive component.
    """
    if w.raw.a <= 0 or w.raw.b <= 0:
        raise InvalidWhitePointError(f"Nonpositive white point ({w.raw.a}, {w.raw.b}).")
    return np.asarray(p, dtype=np.float64) / np.array((w.raw.a, 1.0, w.raw.b))


def white_balance_map(p: ArrayLike, raw_map: ArrayLike) -> NDArray:
    """
    Per-pixel diagonal white balance.

    Args:
        p (ArrayLike): Raw pixels, shape (H, W, 3).
        raw_map (ArrayLike): Raw chromaticity (r/g, b/g) per pixel, shape (H, W, 2).
    """
    raw_map = np.asarray(raw_map, dtype=np.float64)
    if np.any(raw_map <= 0):
        raise InvalidWhitePointError("Illumination map holds a nonpositive white point.")
    divisors = np.stack((raw_map[..., 0], np.ones(raw_map.shape[:-1]), raw_map[..., 1]), axis=-1)
    return np.asarray(p, dtype=np.float64) / divisors


def expand_features(p: ArrayLike, kind: HeadKind, size: int) -> NDArray:
    """
    Expand raw triples into the feature basis of a CST head.

    Root-polynomial features are homogeneous of degree one: scaling the input
    by k scales every feature by k.

    Args:
        p (ArrayLike): Triples, shape (..., 3).
        kind (HeadKind): The head kind.
        size (int): Number of features.

    Returns:
        NDArray: Features, shape (..., size).
    """
    check_head(kind, size)
    p = np.asarray(p, dtype=np.float64)
    r, g, b = p[..., 0], p[..., 1], p[..., 2]
    if kind is HeadKind.LINEAR:
        return p.copy()

    if kind is HeadKind.POLY:
        features = [r, g, b, r * r, g * g, b * b, r * g, g * b, r * b]
        if size == 19:
            features += [
                r * r * r, g * g * g, b * b * b,
                r * r * g, r * r * b, g * g * r, g * g * b, b * b * r, b * b * g,
                r * g * b,
            ]
        return np.stack(features, axis=-1)

    features = [r, g, b, np.sqrt(r * g), np.sqrt(g * b), np.sqrt(r * b)]
    if size == 13:
        features += [
            np.cbrt(r * r * g), np.cbrt(r * r * b), np.cbrt(g * g * r),
            np.cbrt(g * g * b), np.cbrt(b * b * r), np.cbrt(b * b * g),
            np.cbrt(r * g * b),
        ]
    return np.stack(features, axis=-1)


def apply_matrix(m: NDArray, features: NDArray) -> NDArray:
    """
    Matrix-vector product over the last axis, accumulated column by column in a
    fixed order so that scalar and image paths give bitwise identical results.
    """
    out = features[..., 0, None] * m[:, 0]
    for k in range(1, m.shape[1]):
        out = out + features[..., k, None] * m[:, k]
    return out


def apply_cst(p: ArrayLike, t: Cst) -> NDArray:
    """
    Map (white balanced) raw triples to XYZ.

    Args:
        p (ArrayLike): Triples, shape (..., 3).
        t (Cst): The transform. Expanded heads expand p first.

    Returns:
        NDArray: XYZ triples, shape (..., 3).
    """
    return apply_matrix(t.m, expand_features(p, t.head, t.size))


def xyz_to_xy(p: ArrayLike) -> Chromaticity2D:
    """
    Convert one XYZ triple to CIE xy.

    Raises:
        DegenerateColorError: X + Y + Z is not positive.
    """
    x, y, z = (float(v) for v in np.asarray(p, dtype=np.float64))
    total = x + y + z
    if not total > 0:
        raise DegenerateColorError(f"Cannot take chromaticity of XYZ with sum {total}.")
    return Chromaticity2D(x / total, y / total, ChromaticitySpace.XY)


def xy_to_xyz(c: Chromaticity2D, luminance: float = 1.0) -> NDArray:
    """Inverse of xyz_to_xy for a given luminance Y."""
    return np.array((c.a * luminance / c.b, luminance, (1 - c.a - c.b) * luminance / c.b))
