"""
spectra.py
Sampled spectra, the LED bank, spectral file formats and trapezoidal image formation.
Created 17/10/2026
"""

from __future__ import annotations

import csv
import enum
from pathlib import Path
from typing import Sequence

import attrs
import numpy as np
from numpy.typing import ArrayLike, NDArray

from chromacst.cct.planckian import load_observer, planck_radiance
from chromacst.config import LED_COUNT, WAVELENGTH_START, WAVELENGTH_STEP, WAVELENGTH_STOP
from chromacst.errors import PathError, SpectralGridError
from chromacst.utils.store import dump_json, load_json


class SpectrumKind(enum.Enum):
    SPD = "spd"
    REFLECTANCE = "reflectance"
    SENSITIVITY = "sensitivity"


def default_grid() -> NDArray:
    return np.arange(WAVELENGTH_START, WAVELENGTH_STOP + WAVELENGTH_STEP, WAVELENGTH_STEP, dtype=np.float64)


def _as_vector(value) -> NDArray:
    array = np.array(value, dtype=np.float64).reshape(-1)
    array.flags.writeable = False
    return array


@attrs.frozen(eq=False)
class Spectrum:
    """A quantity sampled on a uniform wavelength grid in nm."""

    wavelengths: NDArray = attrs.field(converter=_as_vector)
    values: NDArray = attrs.field(converter=_as_vector)
    kind: SpectrumKind = SpectrumKind.SPD
    name: str = ""
    meta: dict = attrs.field(factory=dict)

    def __attrs_post_init__(self) -> None:
        if self.wavelengths.shape != self.values.shape:
            raise SpectralGridError(
                f"Spectrum {self.name!r} has {len(self.values)} values on a {len(self.wavelengths)}-point grid."
            )
        steps = np.diff(self.wavelengths)
        if len(steps) == 0 or np.any(steps <= 0) or not np.allclose(steps, steps[0]):
            raise SpectralGridError(f"Spectrum {self.name!r} needs a uniform increasing grid.")
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise SpectralGridError(f"Spectrum {self.name!r} must be finite and nonnegative.")
        if self.kind is SpectrumKind.REFLECTANCE and np.any(self.values > 1):
            raise SpectralGridError(f"Reflectance {self.name!r} exceeds 1.")

    def same_grid(self, other: Spectrum) -> bool:
        return self.wavelengths.shape == other.wavelengths.shape and np.array_equal(self.wavelengths, other.wavelengths)

    def scaled(self, k: float) -> Spectrum:
        return attrs.evolve(self, values=self.values * k)


def check_grids(*spectra: Spectrum) -> NDArray:
    """
    Check that spectra share one wavelength grid and return it.

    Raises:
        SpectralGridError: Two spectra sit on different grids.
    """
    first = spectra[0]
    for spectrum in spectra[1:]:
        if not first.same_grid(spectrum):
            raise SpectralGridError(f"Spectra {first.name!r} and {spectrum.name!r} sit on different wavelength grids.")
    return first.wavelengths


def combine(spectra: Sequence[Spectrum], weights: ArrayLike, name: str = "") -> Spectrum:
    """Weighted sum of spectra on a shared grid."""
    grid = check_grids(*spectra)
    weights = np.asarray(weights, dtype=np.float64)
    values = np.zeros_like(grid)
    for weight, spectrum in zip(weights, spectra):
        values = values + weight * spectrum.values
    return Spectrum(grid, values, SpectrumKind.SPD, name, {"weights": weights.tolist()})


def blackbody(kelvin: float, grid: NDArray | None = None) -> Spectrum:
    grid = default_grid() if grid is None else grid
    return Spectrum(grid, planck_radiance(grid, kelvin), SpectrumKind.SPD, f"planckian_{int(round(kelvin))}")


def gaussian(grid: NDArray, peak: float, sigma: float) -> NDArray:
    return np.exp(-((grid - peak) ** 2) / (2.0 * sigma ** 2))


@attrs.frozen(eq=False)
class LedBank:
    """The narrow-band LEDs whose mixtures form the illuminants."""

    leds: tuple[Spectrum, ...] = attrs.field(converter=tuple)

    def __attrs_post_init__(self) -> None:
        if len(self.leds) != LED_COUNT:
            raise SpectralGridError(f"LED bank needs {LED_COUNT} LEDs, instead got {len(self.leds)}.")
        check_grids(*self.leds)

    def __len__(self) -> int:
        return len(self.leds)

    def mix(self, alpha: ArrayLike, name: str = "") -> Spectrum:
        return combine(self.leds, alpha, name)


def trapezoid_weights(grid: NDArray) -> NDArray:
    """Quadrature weights w such that sum(w * f) is the trapezoidal integral of f."""
    weights = np.zeros_like(grid)
    steps = np.diff(grid)
    weights[:-1] += steps / 2
    weights[1:] += steps / 2
    return weights


def render_patch(spd: Spectrum, refl: Spectrum, sens: Sequence[Spectrum]) -> NDArray:
    """
    Sensor response of one reflectance under one illuminant.

    Args:
        spd (Spectrum): Illuminant spectral power distribution.
        refl (Spectrum): Surface reflectance.
        sens (Sequence[Spectrum]): The three channel sensitivities.

    Returns:
        NDArray: The (r, g, b) response.

    Raises:
        SpectralGridError: The spectra sit on different grids.
    """
    grid = check_grids(spd, refl, *sens)
    return np.array([np.trapezoid(spd.values * refl.values * s.values, grid) for s in sens])


def render_chart(spd: Spectrum, reflectances: Sequence[Spectrum], sens: Sequence[Spectrum]) -> NDArray:
    """Vectorized render_patch over a set of reflectances, shape (len(reflectances), 3)."""
    grid = check_grids(spd, *reflectances, *sens)
    refl = np.stack([r.values for r in reflectances])
    responses = np.stack([s.values for s in sens])
    return (refl * (spd.values * trapezoid_weights(grid))) @ responses.T


def tristimulus(spd: Spectrum, reflectances: Sequence[Spectrum]) -> NDArray:
    """
    CIE XYZ of reflectances under an illuminant, with the perfect diffuser at Y = 1.

    Raises:
        SpectralGridError: The spectra do not sit on the observer grid.
    """
    grid, cmfs = load_observer()
    observer = [Spectrum(grid, cmf, SpectrumKind.SENSITIVITY, name) for cmf, name in zip(cmfs, "xyz")]
    xyz = render_chart(spd, reflectances, observer)
    diffuser_y = np.sum(spd.values * cmfs[1] * trapezoid_weights(grid))
    return xyz / diffuser_y


def load_spectrum_csv(path: Path, kind: SpectrumKind = SpectrumKind.SPD) -> Spectrum:
    """Read a `wavelength_nm,value` CSV file."""
    path = Path(path)
    if not path.exists():
        raise PathError(path)
    with open(path, "r", newline="") as file:
        rows = list(csv.DictReader(file))
    try:
        grid = [float(row["wavelength_nm"]) for row in rows]
        values = [float(row["value"]) for row in rows]
    except (KeyError, ValueError) as e:
        raise SpectralGridError(f"{path} is not a wavelength_nm,value CSV: {e}") from e
    return Spectrum(grid, values, kind, path.stem)


def save_spectrum_csv(path: Path, spectrum: Spectrum) -> None:
    with open(path, "w", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(("wavelength_nm", "value"))
        for nm, value in zip(spectrum.wavelengths, spectrum.values):
            writer.writerow((f"{nm:g}", repr(float(value))))


def load_bundle(path: Path, kind: SpectrumKind = SpectrumKind.SPD) -> dict[str, Spectrum]:
    """Read a `{"grid": [...], "spectra": {name: [...]}}` bundle."""
    bundle = load_json(path)
    grid = bundle["grid"]
    return {name: Spectrum(grid, values, kind, name) for name, values in bundle["spectra"].items()}


def save_bundle(path: Path, spectra: Sequence[Spectrum], meta: bool = False) -> None:
    grid = check_grids(*spectra)
    bundle = {"grid": grid.tolist(), "spectra": {s.name: s.values.tolist() for s in spectra}}
    if meta:
        bundle["meta"] = {s.name: s.meta for s in spectra}
    dump_json(path, bundle)
