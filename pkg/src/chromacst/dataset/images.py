"""
images.py
Linear raw images, the binary tensor container, patch extraction and LED capture synthesis.
Created 17/10/2026
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence

import attrs
import numpy as np
from numpy.typing import ArrayLike, NDArray

from chromacst.config import CHART_COLUMNS, CHART_GAP_PIXELS, CHART_PATCH_PIXELS, CHART_ROWS
from chromacst.errors import ExtractionError, PathError, SynthesisError
from chromacst.utils.store import dump_json, load_json

logger = logging.getLogger(__name__)

TENSOR_MAGIC = b"CCSTTNSR"
TENSOR_VERSION = 1


def _as_planes(value) -> NDArray:
    array = np.array(value, dtype=np.float64)
    array.flags.writeable = False
    return array


@attrs.frozen(eq=False)
class RawImage:
    """A linear 3-channel image, channel-last, with its sensor levels."""

    planes: NDArray = attrs.field(converter=_as_planes)
    black_level: float = 0.0
    white_level: float = 1.0

    def __attrs_post_init__(self) -> None:
        if self.planes.ndim != 3 or self.planes.shape[-1] != 3:
            raise SynthesisError(f"Raw image planes must have shape (H, W, 3), instead got {self.planes.shape}.")
        if not self.black_level < self.white_level:
            raise SynthesisError(f"Black level {self.black_level} must be below white level {self.white_level}.")
        if not np.all(np.isfinite(self.planes)):
            raise SynthesisError("Raw image holds non-finite values.")
        if np.any(self.planes < 0) or np.any(self.planes > self.white_level):
            raise SynthesisError(f"Raw image values must lie in [0, {self.white_level}].")

    @property
    def height(self) -> int:
        return self.planes.shape[0]

    @property
    def width(self) -> int:
        return self.planes.shape[1]

    def linear(self) -> NDArray:
        """Pixel values with the black level subtracted."""
        return self.planes - self.black_level


def write_tensor(path: Path, array: ArrayLike) -> None:
    """
    Write an array as magic, u32 version, u32 dims count, u64 dims and
    little-endian f32 data in row-major order.
    """
    array = np.ascontiguousarray(array, dtype="<f4")
    with open(path, "wb") as file:
        file.write(TENSOR_MAGIC)
        file.write(np.array((TENSOR_VERSION, array.ndim), dtype="<u4").tobytes())
        file.write(np.array(array.shape, dtype="<u8").tobytes())
        file.write(array.tobytes())


def read_tensor(path: Path) -> NDArray:
    path = Path(path)
    if not path.exists():
        raise PathError(path)
    data = path.read_bytes()
    if data[:8] != TENSOR_MAGIC:
        raise SynthesisError(f"{path} is not a tensor file.")
    version, ndims = np.frombuffer(data, dtype="<u4", count=2, offset=8)
    if version != TENSOR_VERSION:
        raise SynthesisError(f"{path} has unsupported tensor version {version}.")
    shape = tuple(int(d) for d in np.frombuffer(data, dtype="<u8", count=ndims, offset=16))
    values = np.frombuffer(data, dtype="<f4", count=int(np.prod(shape)), offset=16 + 8 * int(ndims))
    return values.reshape(shape).astype(np.float64)


def save_raw_image(path: Path, image: RawImage) -> None:
    """Write the planes as a tensor file with the levels in a JSON sidecar."""
    path = Path(path)
    write_tensor(path, image.planes)
    sidecar = {"black_level": image.black_level, "white_level": image.white_level}
    dump_json(path.with_suffix(path.suffix + ".json"), sidecar)


def load_raw_image(path: Path) -> RawImage:
    path = Path(path)
    sidecar = load_json(path.with_suffix(path.suffix + ".json"), "Raw images need a JSON sidecar with black_level and white_level.")
    return RawImage(read_tensor(path), sidecar["black_level"], sidecar["white_level"])


def extract_patches(img: RawImage, centers: Sequence[tuple[int, int]], window: int) -> NDArray:
    """
    Channelwise mean of a square window around each patch center.

    Args:
        img (RawImage): The image.
        centers (Sequence[tuple[int, int]]): Pixel (x, y) of each patch center.
        window (int): Odd window side in pixels.

    Returns:
        NDArray: Mean raw values, shape (len(centers), 3). The black level is
            not subtracted.

    Raises:
        ExtractionError: A window leaves the image.
    """
    if window < 1 or window % 2 == 0:
        raise ExtractionError(f"Window must be odd and positive, instead got {window}.", -1)
    half = window // 2
    means = np.empty((len(centers), 3))
    for index, (x, y) in enumerate(centers):
        x, y = int(x), int(y)
        if x - half < 0 or y - half < 0 or x + half >= img.width or y + half >= img.height:
            raise ExtractionError(f"{window}x{window} window at ({x}, {y}) leaves the {img.width}x{img.height} image.", index)
        means[index] = img.planes[y - half:y + half + 1, x - half:x + half + 1].mean(axis=(0, 1))
    return means


def chart_centers(
    patch_pixels: int = CHART_PATCH_PIXELS,
    gap_pixels: int = CHART_GAP_PIXELS,
) -> list[tuple[int, int]]:
    """Patch centers of a rendered chart image in reading order."""
    pitch = patch_pixels + gap_pixels
    return [
        (gap_pixels + column * pitch + patch_pixels // 2, gap_pixels + row * pitch + patch_pixels // 2)
        for row in range(CHART_ROWS)
        for column in range(CHART_COLUMNS)
    ]


def render_chart_image(
    patches: ArrayLike,
    black_level: float = 0.0,
    white_level: float = 1.0,
    patch_pixels: int = CHART_PATCH_PIXELS,
    gap_pixels: int = CHART_GAP_PIXELS,
) -> RawImage:
    """
    Lay rendered patch responses out as a 6x4 chart image on a black surround.

    Values above the sensor range are clipped at the white level.
    """
    patches = np.asarray(patches, dtype=np.float64)
    pitch = patch_pixels + gap_pixels
    planes = np.full((CHART_ROWS * pitch + gap_pixels, CHART_COLUMNS * pitch + gap_pixels, 3), black_level)
    for index, (x, y) in enumerate(chart_centers(patch_pixels, gap_pixels)):
        left = x - patch_pixels // 2
        top = y - patch_pixels // 2
        planes[top:top + patch_pixels, left:left + patch_pixels] = patches[index] + black_level
    return RawImage(np.clip(planes, 0.0, white_level), black_level, white_level)


def synthesize_capture(bank_images: Sequence[RawImage], alpha: ArrayLike) -> tuple[RawImage, int]:
    """
    Simulate a capture under an LED mixture as the weighted sum of single-LED captures.

    Args:
        bank_images (Sequence[RawImage]): One capture per LED, same size and levels.
        alpha (ArrayLike): Per-LED weights in [0, 1].

    Returns:
        tuple: The synthesized image and the number of values clamped into
            [0, white_level].

    Raises:
        SynthesisError: Images disagree in size or levels, or a weight is out of range.
    """
    alpha = np.asarray(alpha, dtype=np.float64)
    if len(alpha) != len(bank_images):
        raise SynthesisError(f"Got {len(alpha)} weights for {len(bank_images)} LED images.")
    if np.any(alpha < 0) or np.any(alpha > 1):
        raise SynthesisError(f"LED weights must lie in [0, 1], instead got {alpha}.")

    first = bank_images[0]
    for image in bank_images[1:]:
        if image.planes.shape != first.planes.shape:
            raise SynthesisError(f"LED image shape {image.planes.shape} differs from {first.planes.shape}.")
        if (image.black_level, image.white_level) != (first.black_level, first.white_level):
            raise SynthesisError("LED images must share black and white levels.")

    signal = np.zeros_like(first.planes)
    for weight, image in zip(alpha, bank_images):
        signal = signal + weight * image.linear()
    planes = signal + first.black_level

    clip_count = int(np.count_nonzero(planes < 0) + np.count_nonzero(planes > first.white_level))
    if clip_count:
        logger.debug("Clamped %d values while synthesizing a capture.", clip_count)
    return RawImage(np.clip(planes, 0.0, first.white_level), first.black_level, first.white_level), clip_count
