"""
planckian.py
Planckian locus, blackbody spectra and correlated colour temperature lookup
with Robertson's isotemperature line method.
Created 17/10/2026
"""

from __future__ import annotations

import json
import math
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple

import attrs
import numpy as np
from numpy.typing import NDArray

from chromacst.colour.core import Chromaticity2D, ChromaticitySpace
from chromacst.config import ASSETS_DIR, CCT_MAX, CCT_MIN, OFF_LOCUS_DUV
from chromacst.errors import ConfigurationError, DegenerateColorError, PathError

SECOND_RADIATION_CONSTANT = 1.4388e-2 # m K

# Isotemperature lines (mired, u, v, slope), Wyszecki & Stiles, Color Science, 2nd ed., p. 228.
ROBERTSON_TABLE = (
    (0, 0.18006, 0.26352, -0.24341),
    (10, 0.18066, 0.26589, -0.25479),
    (20, 0.18133, 0.26846, -0.26876),
    (30, 0.18208, 0.27119, -0.28539),
    (40, 0.18293, 0.27407, -0.30470),
    (50, 0.18388, 0.27709, -0.32675),
    (60, 0.18494, 0.28021, -0.35156),
    (70, 0.18611, 0.28342, -0.37915),
    (80, 0.18740, 0.28668, -0.40955),
    (90, 0.18880, 0.28997, -0.44278),
    (100, 0.19032, 0.29326, -0.47888),
    (125, 0.19462, 0.30141, -0.58204),
    (150, 0.19962, 0.30921, -0.70471),
    (175, 0.20525, 0.31647, -0.84901),
    (200, 0.21142, 0.32312, -1.0182),
    (225, 0.21807, 0.32909, -1.2168),
    (250, 0.22511, 0.33439, -1.4512),
    (275, 0.23247, 0.33904, -1.7298),
    (300, 0.24010, 0.34308, -2.0637),
    (325, 0.24702, 0.34655, -2.4681),
    (350, 0.25591, 0.34951, -2.9641),
    (375, 0.26400, 0.35200, -3.5814),
    (400, 0.27218, 0.35407, -4.3633),
    (425, 0.28039, 0.35577, -5.3762),
    (450, 0.28863, 0.35714, -6.7262),
    (475, 0.29685, 0.35823, -8.5955),
    (500, 0.30505, 0.35907, -11.324),
    (525, 0.31320, 0.35968, -15.628),
    (550, 0.32129, 0.36011, -23.325),
    (575, 0.32931, 0.36038, -40.770),
    (600, 0.33724, 0.36051, -116.45),
)

# Rows generated from the observer so the table reaches below 1500 K.
WARM_EXTENSION_MIREDS = (625.0, 650.0, 675.0)


@lru_cache(maxsize=4)
def load_observer(path: Path | None = None) -> tuple[NDArray, NDArray]:
    """
    Load the CIE 1931 2 degree colour matching functions.

    Returns:
        tuple: The wavelength grid in nm, shape (W,), and the matching
            functions, shape (3, W).
    """
    path = Path(path) if path is not None else ASSETS_DIR / "cie_1931_2deg.json"
    if not path.exists():
        raise PathError(path, "Set CHROMACST_ASSETS_DIR to a directory holding cie_1931_2deg.json.")
    with open(path, "r") as file:
        bundle = json.load(file)
    grid = np.asarray(bundle["grid"], dtype=np.float64)
    cmfs = np.stack([np.asarray(bundle["spectra"][k], dtype=np.float64) for k in ("x", "y", "z")])
    grid.flags.writeable = False
    cmfs.flags.writeable = False
    return grid, cmfs


def planck_radiance(wavelengths_nm: NDArray, kelvin: float) -> NDArray:
    """
    Relative spectral radiance of a blackbody, peak-normalized to 1 over the grid.

    An infinite temperature gives the Rayleigh-Jeans limit, proportional to
    wavelength^-4.
    """
    wavelengths = np.asarray(wavelengths_nm, dtype=np.float64) * 1e-9
    if math.isinf(kelvin):
        radiance = wavelengths ** -4.0
    else:
        radiance = 1.0 / (wavelengths ** 5 * np.expm1(SECOND_RADIATION_CONSTANT / (wavelengths * kelvin)))
    return radiance / radiance.max()


def _trapezoid_xyz(spd: NDArray, grid: NDArray, cmfs: NDArray) -> NDArray:
    return np.trapezoid(spd * cmfs, grid, axis=-1)


def xy_to_uv(x: float, y: float) -> tuple[float, float]:
    """CIE 1931 xy to CIE 1960 uv."""
    denominator = -2.0 * x + 12.0 * y + 3.0
    return 4.0 * x / denominator, 6.0 * y / denominator


def uv_to_xy(u: float, v: float) -> tuple[float, float]:
    """CIE 1960 uv to CIE 1931 xy."""
    denominator = 2.0 * u - 8.0 * v + 4.0
    return 3.0 * u / denominator, 2.0 * v / denominator


def _xyz_to_uv(xyz: NDArray) -> tuple[float, float]:
    x, y, z = xyz
    denominator = x + 15.0 * y + 3.0 * z
    return 4.0 * x / denominator, 6.0 * y / denominator


def planckian_uv(mired: float, observer: tuple[NDArray, NDArray] | None = None) -> tuple[float, float]:
    """Chromaticity of a blackbody at the given reciprocal megakelvin, in CIE 1960 uv."""
    grid, cmfs = observer if observer is not None else load_observer()
    kelvin = math.inf if mired == 0 else 1e6 / mired
    return _xyz_to_uv(_trapezoid_xyz(planck_radiance(grid, kelvin), grid, cmfs))


def planckian_xy(kelvin: float, observer: tuple[NDArray, NDArray] | None = None) -> Chromaticity2D:
    """Chromaticity of a blackbody rendered through the observer."""
    u, v = planckian_uv(1e6 / kelvin, observer)
    return Chromaticity2D(*uv_to_xy(u, v), ChromaticitySpace.XY)


def _as_row_array(value) -> NDArray:
    array = np.array(value, dtype=np.float64)
    array.flags.writeable = False
    return array


@attrs.frozen(eq=False)
class PlanckianTable:
    """
    Samples of the Planckian locus in CIE 1960 uv, with the unit direction of
    the isotemperature line through each sample. Rows are ordered by mired.
    """

    mired: NDArray = attrs.field(converter=_as_row_array)
    u: NDArray = attrs.field(converter=_as_row_array)
    v: NDArray = attrs.field(converter=_as_row_array)
    direction: NDArray = attrs.field(converter=_as_row_array)

    def __attrs_post_init__(self) -> None:
        if np.any(np.diff(self.mired) <= 0):
            raise ConfigurationError("Planckian table must be strictly increasing in mired.")

    def __len__(self) -> int:
        return len(self.mired)

    @property
    def slope(self) -> NDArray:
        with np.errstate(divide="ignore"):
            return self.direction[:, 1] / self.direction[:, 0]

    @classmethod
    def from_rows(cls, rows) -> PlanckianTable:
        rows = np.asarray(rows, dtype=np.float64)
        direction = np.stack((np.ones(len(rows)), rows[:, 3]), axis=-1)
        direction /= np.linalg.norm(direction, axis=-1, keepdims=True)
        return cls(rows[:, 0], rows[:, 1], rows[:, 2], direction)

    @classmethod
    def from_observer(cls, mireds, observer: tuple[NDArray, NDArray] | None = None, step: float = 0.05) -> PlanckianTable:
        """
        Build a table by rendering blackbodies through the observer.

        Isotherm directions are the locus normals, oriented toward increasing u
        so they agree with the classical table.
        """
        observer = observer if observer is not None else load_observer()
        us, vs, directions = [], [], []
        for mired in mireds:
            u, v = planckian_uv(mired, observer)
            lo = max(mired - step, 0.0)
            u_lo, v_lo = planckian_uv(lo, observer)
            u_hi, v_hi = planckian_uv(mired + step, observer)
            du, dv = u_hi - u_lo, v_hi - v_lo
            normal = np.array((dv, -du)) / math.hypot(du, dv)
            us.append(u)
            vs.append(v)
            directions.append(normal)
        return cls(mireds, us, vs, directions)

    def extended(self, other: PlanckianTable) -> PlanckianTable:
        return PlanckianTable(
            np.concatenate((self.mired, other.mired)),
            np.concatenate((self.u, other.u)),
            np.concatenate((self.v, other.v)),
            np.concatenate((self.direction, other.direction)),
        )


@lru_cache(maxsize=1)
def default_table() -> PlanckianTable:
    """The classical Robertson rows, extended below 1667 K from the observer."""
    return PlanckianTable.from_rows(ROBERTSON_TABLE).extended(PlanckianTable.from_observer(WARM_EXTENSION_MIREDS))


class CctResult(NamedTuple):
    kelvin: float
    duv: float       # Signed distance from the locus in uv, positive above it.
    off_locus: bool


def cct_lookup(c: Chromaticity2D, table: PlanckianTable | None = None) -> CctResult:
    """
    Correlated colour temperature of an xy chromaticity.

    Walks the isotemperature lines until the point changes side, then
    interpolates the temperature in mired between the bracketing lines. The
    result is clamped to [CCT_MIN, CCT_MAX]; points farther than
    OFF_LOCUS_DUV from the locus are flagged rather than rejected.

    Args:
        c (Chromaticity2D): An xy chromaticity.
        table (PlanckianTable, optional): Defaults to default_table().

    Returns:
        CctResult: Temperature, Duv and the off-locus flag.
    """
    if c.space is not ChromaticitySpace.XY:
        raise DegenerateColorError("cct_lookup needs an xy chromaticity.")
    table = table if table is not None else default_table()
    u, v = xy_to_uv(c.a, c.b)

    last_dt = 0.0
    last_direction = np.zeros(2)
    rows = len(table)
    for index in range(1, rows):
        direction = table.direction[index]

        # Signed distance of the point from this isotherm.
        dt = -(u - table.u[index]) * direction[1] + (v - table.v[index]) * direction[0]
        if dt <= 0.0 or index == rows - 1:
            dt = -min(dt, 0.0)
            f = 0.0 if index == 1 else dt / (last_dt + dt)
            mired = table.mired[index - 1] * f + table.mired[index] * (1.0 - f)

            uu = u - (table.u[index - 1] * f + table.u[index] * (1.0 - f))
            vv = v - (table.v[index - 1] * f + table.v[index] * (1.0 - f))
            blended = direction * (1.0 - f) + last_direction * f
            blended /= np.linalg.norm(blended)
            duv = -float(uu * blended[0] + vv * blended[1])
            break

        last_dt = dt
        last_direction = direction

    kelvin = CCT_MAX if mired <= 0 else min(max(1e6 / mired, CCT_MIN), CCT_MAX)
    return CctResult(float(kelvin), duv, abs(duv) > OFF_LOCUS_DUV)


def mccamy_cct(c: Chromaticity2D) -> float:
    """McCamy's cubic approximation of CCT, for cross-checks near the locus."""
    n = (c.a - 0.3320) / (0.1858 - c.b)
    return 449.0 * n ** 3 + 3525.0 * n ** 2 + 6823.3 * n + 5520.33
