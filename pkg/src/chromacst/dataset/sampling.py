"""
sampling.py
Dirichlet illuminant sampling, dataset splits and white point perturbation.
Created 17/10/2026
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import attrs
import numpy as np
from numpy.typing import ArrayLike

from chromacst.colour.core import WhitePoint
from chromacst.dataset.spectra import LedBank, Spectrum
from chromacst.errors import ConfigurationError, InvalidWhitePointError, SplitError
from chromacst.utils.rng import stream
from chromacst.utils.store import dump_json, load_json


def sample_dirichlet_illuminants(
    bank: LedBank,
    n: int,
    concentration: ArrayLike,
    seed: int,
) -> list[Spectrum]:
    """
    Sample LED mixtures with Dirichlet distributed weights.

    Weights are Gamma variates normalized to sum to 1. Each returned SPD
    records its weights in meta["weights"] and is named dirichlet_<index>.

    Args:
        bank (LedBank): The LEDs.
        n (int): Number of illuminants.
        concentration (ArrayLike): One positive concentration per LED.
        seed (int): Job seed.

    Returns:
        list[Spectrum]: The sampled SPDs, in sampling order.
    """
    concentration = np.asarray(concentration, dtype=np.float64)
    if n <= 0:
        raise ConfigurationError(f"Number of illuminants must be positive, instead got {n}.")
    if concentration.shape != (len(bank),) or np.any(concentration <= 0):
        raise ConfigurationError(f"Need {len(bank)} positive concentrations, instead got {concentration}.")

    gammas = stream(seed, "dirichlet").standard_gamma(concentration, size=(n, len(bank)))
    weights = gammas / gammas.sum(axis=1, keepdims=True)
    return [bank.mix(alpha, f"dirichlet_{index:04d}") for index, alpha in enumerate(weights)]


def _as_ids(value) -> tuple[str, ...]:
    return tuple(str(v) for v in value)


@attrs.frozen
class SplitSpec:
    """Disjoint train, validation and test illuminant ids."""

    train: tuple[str, ...] = attrs.field(converter=_as_ids)
    val: tuple[str, ...] = attrs.field(converter=_as_ids)
    test: tuple[str, ...] = attrs.field(converter=_as_ids)

    def __attrs_post_init__(self) -> None:
        seen = set()
        for part in (self.train, self.val, self.test):
            overlap = seen.intersection(part)
            if overlap or len(set(part)) != len(part):
                raise SplitError(f"Split parts overlap on {sorted(overlap) or 'duplicate ids'}.")
            seen.update(part)

    def part(self, name: str) -> tuple[str, ...]:
        if name not in ("train", "val", "test"):
            raise SplitError(f"Unknown split part {name!r}.")
        return getattr(self, name)

    def ids(self) -> set[str]:
        return set(self.train) | set(self.val) | set(self.test)

    def to_json(self) -> dict:
        return {"train": list(self.train), "val": list(self.val), "test": list(self.test)}

    def save(self, path: Path) -> None:
        dump_json(path, self.to_json())

    @classmethod
    def load(cls, path: Path) -> SplitSpec:
        document = load_json(path, "Run `synth` first or point --data at a dataset directory.")
        return cls(document["train"], document["val"], document["test"])


def split_dataset(ids: Sequence[str], fractions: Sequence[float], seed: int) -> SplitSpec:
    """
    Shuffle ids with the seeded generator, then cut them into contiguous
    train, validation and test parts. Part sizes are rounded, the remainder
    goes to test.

    Raises:
        SplitError: No ids, or fractions that are negative or do not sum to 1.
    """
    if len(ids) == 0:
        raise SplitError("Cannot split an empty id list.")
    if len(fractions) != 3 or any(f < 0 for f in fractions) or not math.isclose(sum(fractions), 1.0, abs_tol=1e-6):
        raise SplitError(f"Split fractions must be three nonnegative values summing to 1, instead got {fractions}.")

    order = stream(seed, "split").permutation(len(ids))
    shuffled = [ids[i] for i in order]
    n_train = min(round(fractions[0] * len(ids)), len(ids))
    n_val = min(round(fractions[1] * len(ids)), len(ids) - n_train)
    return SplitSpec(shuffled[:n_train], shuffled[n_train:n_train + n_val], shuffled[n_train + n_val:])


def perturb_white(w: WhitePoint, offset_deg: float, seed: int, *keys: int) -> WhitePoint:
    """
    Rotate the raw white vector (r/g, 1, b/g) by offset_deg about a random axis
    orthogonal to it, then return it in chromaticity form.

    The angular error between the original and the perturbed white is the
    requested offset. The result carries only the raw chromaticity.

    Args:
        w (WhitePoint): The white point.
        offset_deg (float): Rotation angle in degrees.
        seed (int): Job seed.
        *keys (int): Sub-stream keys, e.g. the chart index.

    Raises:
        InvalidWhitePointError: The rotation leaves the positive octant.
    """
    if offset_deg < 0:
        raise ConfigurationError(f"Offset must be nonnegative, instead got {offset_deg}.")
    if offset_deg == 0:
        return w

    v = w.raw_vector()
    unit = v / np.linalg.norm(v)
    rng = stream(seed, "perturb", *keys)
    axis = np.zeros(3)
    while np.linalg.norm(axis) < 1e-6:
        direction = rng.standard_normal(3)
        axis = direction - np.dot(direction, unit) * unit
    axis /= np.linalg.norm(axis)

    theta = math.radians(offset_deg)
    rotated = v * math.cos(theta) + np.cross(axis, v) * math.sin(theta)
    if np.any(rotated <= 0):
        raise InvalidWhitePointError(f"Rotating {v} by {offset_deg} degrees leaves the positive octant.")
    return WhitePoint.from_raw(rotated[0] / rotated[1], rotated[2] / rotated[1])
