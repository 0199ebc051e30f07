"""
encoding.py
White point input encodings for the CST-MLP and the nearest-neighbour baseline.
Created 17/10/2026
"""

from __future__ import annotations

import enum
from typing import Sequence

import attrs
import numpy as np
from numpy.typing import NDArray

from chromacst.colour.core import WhitePoint
from chromacst.errors import EncodingError, UnsupportedEncodingError


class EncodingKind(enum.Enum):
    CCT1D = "cct1d"
    RAW2D = "raw2d"
    XY2D = "xy2d"

    @property
    def dim(self) -> int:
        return 1 if self is EncodingKind.CCT1D else 2


def _as_vector(value) -> NDArray:
    array = np.array(value, dtype=np.float64).reshape(-1)
    array.flags.writeable = False
    return array


def _positive(instance, attribute, value) -> None:
    if not np.all(value > 0):
        raise EncodingError(f"Encoding {attribute.name} must be positive, instead got {value}.")


@attrs.frozen(eq=False)
class InputEncoding:
    """
    Which white point coordinates feed the model and the affine map taking the
    training range onto [0, 1]: normalized = (coordinate - offset) / scale.
    """

    kind: EncodingKind
    offset: NDArray = attrs.field(converter=_as_vector)
    scale: NDArray = attrs.field(converter=_as_vector, validator=_positive)

    def __attrs_post_init__(self) -> None:
        if self.offset.shape != (self.dim,) or self.scale.shape != (self.dim,):
            raise EncodingError(f"{self.kind.value} needs {self.dim} normalization constants per field.")

    @property
    def dim(self) -> int:
        return self.kind.dim

    @property
    def is_2d(self) -> bool:
        return self.dim == 2

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "offset": self.offset.tolist(), "scale": self.scale.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> InputEncoding:
        try:
            kind = EncodingKind(data["kind"])
        except ValueError as e:
            raise UnsupportedEncodingError(f"Unknown encoding {data['kind']!r}.") from e
        return cls(kind, data["offset"], data["scale"])


def coordinates(w: WhitePoint, kind: EncodingKind) -> NDArray:
    """
    The unnormalized coordinates of a white point: mired for CCT1D,
    (r/g, b/g) for RAW2D and (x, y) for XY2D.

    Raises:
        EncodingError: The white point lacks the field the encoding reads.
    """
    if kind is EncodingKind.RAW2D:
        return np.array((w.raw.a, w.raw.b))
    if kind is EncodingKind.XY2D:
        if w.xy is None:
            raise EncodingError("xy2d encoding needs the white point xy chromaticity.")
        return np.array((w.xy.a, w.xy.b))
    if w.cct is None:
        raise EncodingError("cct1d encoding needs the white point CCT.")
    return np.array((1e6 / w.cct,))


def fit_encoding(kind: EncodingKind, whites: Sequence[WhitePoint]) -> InputEncoding:
    """Fit the min/max normalization of an encoding to training white points."""
    if len(whites) == 0:
        raise EncodingError("Cannot fit an encoding without white points.")
    values = np.stack([coordinates(w, kind) for w in whites])
    lo = values.min(axis=0)
    span = values.max(axis=0) - lo
    return InputEncoding(kind, lo, np.where(span > 0, span, 1.0))


def encode_input(w: WhitePoint, enc: InputEncoding) -> NDArray:
    return (coordinates(w, enc.kind) - enc.offset) / enc.scale


def encode_many(whites: Sequence[WhitePoint], enc: InputEncoding) -> NDArray:
    """Encode white points into an array of shape (n, dim)."""
    return np.stack([encode_input(w, enc) for w in whites])
