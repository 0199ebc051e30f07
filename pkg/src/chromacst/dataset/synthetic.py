"""
synthetic.py
The synthetic camera testbed: parametric camera asset, anchor calibration and
chart dataset synthesis from LED mixtures and blackbodies.
Created 17/10/2026
"""

from __future__ import annotations

import json
import logging
from functools import cached_property
from pathlib import Path
from typing import NamedTuple, Sequence

import attrs
import numpy as np
from numpy.typing import ArrayLike, NDArray

from chromacst.cct.interpolation import CalibratedCstSet, white_raw_to_xy
from chromacst.cct.planckian import cct_lookup, load_observer
from chromacst.colour.core import ChartObservation, Chromaticity2D, xyz_to_xy
from chromacst.config import (
    ANCHOR_COOL,
    ANCHOR_NEUTRAL,
    ANCHOR_WARM,
    ASSETS_DIR,
    CHART_PATCHES,
    CLIP_MARGIN,
    LED_EXPOSURE,
    PATCH_WINDOW,
    REFERENCE_CCT,
    WHITE_PATCH_INDEX,
)
from chromacst.dataset.charts import build_observation, clip_filter
from chromacst.dataset.images import RawImage, chart_centers, extract_patches, render_chart_image, synthesize_capture
from chromacst.dataset.spectra import (
    LedBank,
    Spectrum,
    SpectrumKind,
    blackbody,
    gaussian,
    render_chart,
    trapezoid_weights,
    tristimulus,
)
from chromacst.errors import PathError, SpectralGridError
from chromacst.fitting.oracle import fit_features

logger = logging.getLogger(__name__)


@attrs.frozen(eq=False)
class SyntheticCamera:
    """Sensitivities, LEDs and chart reflectances sampled on one grid."""

    sensitivities: tuple[Spectrum, ...] = attrs.field(converter=tuple)
    bank: LedBank
    reflectances: tuple[Spectrum, ...] = attrs.field(converter=tuple)

    def __attrs_post_init__(self) -> None:
        if len(self.sensitivities) != 3 or len(self.reflectances) != CHART_PATCHES:
            raise SpectralGridError(f"Camera needs 3 sensitivities and {CHART_PATCHES} reflectances.")
        observer_grid, _ = load_observer()
        if not np.array_equal(self.grid, observer_grid):
            raise SpectralGridError("Camera spectra must sit on the observer grid.")

    @property
    def grid(self) -> NDArray:
        return self.sensitivities[0].wavelengths

    def render(self, spd: Spectrum) -> NDArray:
        """Raw patch responses under an illuminant, shape (24, 3)."""
        return render_chart(spd, self.reflectances, self.sensitivities)

    def exposed(self, spd: Spectrum, level: float = LED_EXPOSURE) -> Spectrum:
        """Scale an illuminant so the white patch peaks at the given raw level."""
        return spd.scaled(level / self.render(spd)[WHITE_PATCH_INDEX].max())

    @cached_property
    def gt_xyz(self) -> NDArray:
        """Chart XYZ under the reference blackbody, perfect diffuser at Y = 1."""
        return tristimulus(blackbody(REFERENCE_CCT, self.grid), self.reflectances)

    def led_images(self, black_level: float = 0.0, white_level: float = 1.0) -> list[RawImage]:
        """One rendered chart image per LED, at unit LED weight."""
        scale = white_level - black_level
        return [render_chart_image(self.render(led) * scale, black_level, white_level) for led in self.bank.leds]


def _expand_gaussians(grid: NDArray, entries: list[dict], kind: SpectrumKind) -> list[Spectrum]:
    return [Spectrum(grid, gaussian(grid, e["peak"], e["sigma"]), kind, e["name"]) for e in entries]


def load_synthetic_camera(path: Path | None = None) -> SyntheticCamera:
    """
    Expand the parametric camera asset onto its grid.

    Each LED is scaled so that alone at unit weight it takes the white patch
    to LED_EXPOSURE in its strongest channel.
    """
    path = Path(path) if path is not None else ASSETS_DIR / "synthetic_camera.json"
    if not path.exists():
        raise PathError(path, "Set CHROMACST_ASSETS_DIR to a directory holding synthetic_camera.json.")
    with open(path, "r") as file:
        asset = json.load(file)

    grid_spec = asset["grid"]
    grid = np.arange(grid_spec["start"], grid_spec["stop"] + grid_spec["step"], grid_spec["step"], dtype=np.float64)
    sensitivities = _expand_gaussians(grid, asset["sensitivities"], SpectrumKind.SENSITIVITY)

    reflectances = []
    for entry in asset["reflectances"]:
        values = np.full_like(grid, entry["base"])
        for peak, sigma, amplitude in entry["bumps"]:
            values = values + amplitude * gaussian(grid, peak, sigma)
        reflectances.append(Spectrum(grid, np.clip(values, 0.0, 1.0), SpectrumKind.REFLECTANCE, entry["name"]))

    white = reflectances[WHITE_PATCH_INDEX]
    leds = []
    for led in _expand_gaussians(grid, asset["leds"], SpectrumKind.SPD):
        response = render_chart(led, [white], sensitivities)[0]
        leds.append(led.scaled(LED_EXPOSURE / response.max()))
    return SyntheticCamera(sensitivities, LedBank(leds), reflectances)


def illuminant_xy(spd: Spectrum) -> Chromaticity2D:
    """CIE xy of an illuminant."""
    grid, cmfs = load_observer()
    return xyz_to_xy(cmfs @ (spd.values * trapezoid_weights(grid)))


class AnchorSets(NamedTuple):
    two: CalibratedCstSet
    three: CalibratedCstSet


def calibrate_anchors(camera: SyntheticCamera) -> AnchorSets:
    """
    Oracle CSTs of charts under blackbodies at the anchor temperatures, as the
    two-point and three-point calibrated sets.
    """
    csts = {}
    for cct in (ANCHOR_WARM, ANCHOR_NEUTRAL, ANCHOR_COOL):
        patches = camera.render(camera.exposed(blackbody(cct, camera.grid)))
        obs = build_observation(patches, camera.gt_xyz, illuminant_id=f"anchor_{int(cct)}")
        balanced = patches / obs.white.raw_vector()
        csts[cct] = fit_features(balanced, camera.gt_xyz).cst
        logger.info("Calibrated %d K anchor.", cct)
    return AnchorSets(
        CalibratedCstSet.two_point(csts[ANCHOR_WARM], csts[ANCHOR_COOL]),
        CalibratedCstSet.three_point(csts[ANCHOR_WARM], csts[ANCHOR_NEUTRAL], csts[ANCHOR_COOL]),
    )


class SynthesizedChart(NamedTuple):
    illuminant_id: str
    observation: ChartObservation | None # None when the chart was discarded as clipped.
    clip_count: int
    image: RawImage


def synthesize_chart(
    camera: SyntheticCamera,
    spd: Spectrum,
    anchors: CalibratedCstSet,
    led_images: Sequence[RawImage] | None = None,
    black_level: float = 0.0,
    white_level: float = 1.0,
    window: int = PATCH_WINDOW,
    margin: float = CLIP_MARGIN,
) -> SynthesizedChart:
    """
    Capture the chart under one illuminant and turn it into an observation.

    LED mixtures (meta["weights"] present, led_images given) are synthesized
    from the single-LED captures; other illuminants are rendered spectrally.
    The white point xy and CCT come from the calibrated anchors; the true
    illuminant chromaticity is kept in meta.
    """
    weights = spd.meta.get("weights")
    if weights is not None and led_images is not None:
        image, clip_count = synthesize_capture(led_images, weights)
    else:
        scale = white_level - black_level
        image = render_chart_image(camera.render(spd) * scale, black_level, white_level)
        clip_count = 0

    patches = extract_patches(image, chart_centers(), window)
    if not clip_filter(patches, black_level, white_level, margin):
        logger.info("Discarding %s: patches outside the unclipped range.", spd.name)
        return SynthesizedChart(spd.name, None, clip_count, image)

    true_xy = illuminant_xy(spd)
    meta = {
        "true_xy": [true_xy.a, true_xy.b],
        "true_cct": cct_lookup(true_xy).kelvin,
    }
    if weights is not None:
        meta["weights"] = list(weights)
    scale = white_level - black_level
    obs = build_observation((patches - black_level) / scale, camera.gt_xyz, illuminant_id=spd.name, meta=meta)
    obs = attrs.evolve(obs, white=white_raw_to_xy(obs.white, anchors))
    return SynthesizedChart(spd.name, obs, clip_count, image)


def planckian_illuminants(camera: SyntheticCamera, ccts: ArrayLike) -> list[Spectrum]:
    """Exposed blackbody illuminants named planckian_<kelvin>."""
    return [camera.exposed(blackbody(float(cct), camera.grid)) for cct in ccts]
