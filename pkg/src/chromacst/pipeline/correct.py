"""
correct.py
Application of CST providers to charts and to single- and multi-illuminant images.
Created 17/10/2026
"""

from __future__ import annotations

import attrs
import numpy as np
from numpy.typing import ArrayLike, NDArray

from chromacst.colour.core import ChartObservation, WhitePoint, apply_cst, white_balance, white_balance_map
from chromacst.dataset.images import RawImage
from chromacst.errors import BlendingError, ChromaCstError
from chromacst.pipeline.providers import CstProvider

BLEND_TOLERANCE = 1e-4


def _as_planes(value) -> NDArray:
    array = np.array(value, dtype=np.float64)
    array.flags.writeable = False
    return array


@attrs.frozen(eq=False)
class XyzImage:
    """CIE XYZ planes, shape (H, W, 3). Values may be negative."""

    planes: NDArray = attrs.field(converter=_as_planes)

    def __attrs_post_init__(self) -> None:
        if self.planes.ndim != 3 or self.planes.shape[-1] != 3:
            raise BlendingError(f"XYZ planes must have shape (H, W, 3), instead got {self.planes.shape}.")


@attrs.frozen(eq=False)
class BlendStack:
    """Illuminants of a scene and the per-pixel weight of each, shape (n, H, W)."""

    illuminants: tuple[WhitePoint, ...] = attrs.field(converter=tuple)
    blend_maps: NDArray = attrs.field(converter=_as_planes)

    def __attrs_post_init__(self) -> None:
        if self.blend_maps.ndim != 3 or len(self.blend_maps) != len(self.illuminants) or len(self.illuminants) == 0:
            raise BlendingError(f"Need one (H, W) blend map per illuminant, instead got {self.blend_maps.shape}.")
        if np.any(self.blend_maps < 0):
            raise BlendingError("Blend weights must be nonnegative.")
        if np.any(np.abs(self.blend_maps.sum(axis=0) - 1.0) > BLEND_TOLERANCE):
            raise BlendingError("Blend weights must sum to 1 at every pixel.")


def _with_context(e: ChromaCstError, illuminant_id: str) -> ChromaCstError:
    note = f"while correcting illuminant {illuminant_id}"
    if hasattr(e, "add_note"):
        e.add_note(note)
    else:  # Python < 3.11: same effect as BaseException.add_note
        if not hasattr(e, "__notes__"):
            e.__notes__ = []
        e.__notes__.append(note)
    return e


def correct_chart(obs: ChartObservation, prov: CstProvider) -> NDArray:
    """
    White-balance the chart patches and map them to XYZ with the provider's CST.

    Returns:
        NDArray: Corrected XYZ patches, shape (24, 3).
    """
    try:
        return apply_cst(white_balance(obs.patches_raw, obs.white), prov.cst_for_chart(obs))
    except ChromaCstError as e:
        raise _with_context(e, obs.illuminant_id)


def correct_image_single(img: RawImage, w: WhitePoint, prov: CstProvider) -> XyzImage:
    """One CST for the whole image, applied to every white-balanced pixel."""
    cst = prov.cst_for(w)
    return XyzImage(apply_cst(white_balance(img.linear(), w), cst))


def correct_image_multi(
    img: RawImage,
    stack: BlendStack,
    illum_map: ArrayLike,
    prov: CstProvider,
) -> XyzImage:
    """
    Multi-illuminant correction: per-pixel white balance from illum_map, each
    illuminant's CST applied to the whole balanced image, then the results
    blended pixelwise by the blend maps.

    Args:
        img (RawImage): The capture.
        stack (BlendStack): Illuminants and blend maps.
        illum_map (ArrayLike): Per-pixel raw chromaticity (r/g, b/g), shape (H, W, 2).
        prov (CstProvider): Source of each illuminant's CST.

    Raises:
        BlendingError: Maps and image disagree in size.
    """
    illum_map = np.asarray(illum_map, dtype=np.float64)
    size = (img.height, img.width)
    if stack.blend_maps.shape[1:] != size or illum_map.shape != size + (2,):
        raise BlendingError(
            f"Blend maps {stack.blend_maps.shape[1:]} and illumination map {illum_map.shape[:2]} must match image {size}."
        )

    balanced = white_balance_map(img.linear(), illum_map)
    out = None
    for weight, white in zip(stack.blend_maps, stack.illuminants):
        term = weight[..., None] * apply_cst(balanced, prov.cst_for(white))
        out = term if out is None else out + term
    return XyzImage(out)
