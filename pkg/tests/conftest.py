"""
conftest.py
Shared fixtures: the synthetic camera, its anchors, realizable charts and a small dataset.
Created 17/10/2026
"""

import numpy as np
import pytest

from chromacst.colour.core import ChartObservation, Chromaticity2D, Cst, WhitePoint, apply_cst
from chromacst.dataset.sampling import sample_dirichlet_illuminants
from chromacst.dataset.synthetic import (
    calibrate_anchors,
    load_synthetic_camera,
    planckian_illuminants,
    synthesize_chart,
)

# A plausible camera-to-XYZ matrix with a positive centre entry.
REALIZABLE_M = np.array([
    [0.62, 0.28, 0.10],
    [0.24, 0.70, 0.06],
    [0.04, 0.12, 0.84],
])


@pytest.fixture(scope="session")
def camera():
    return load_synthetic_camera()


@pytest.fixture(scope="session")
def anchors(camera):
    return calibrate_anchors(camera)


@pytest.fixture
def realizable_m():
    return REALIZABLE_M.copy()


@pytest.fixture
def make_chart():
    """
    Factory for charts whose reference XYZ is exactly M times the white
    balanced patches, so the best CST is known.
    """
    def factory(m=REALIZABLE_M, white=(0.55, 0.65), seed=0, illuminant_id="realizable", xy=None, cct=None):
        rng = np.random.default_rng(seed)
        balanced = rng.uniform(0.05, 0.9, size=(24, 3))
        patches = balanced * np.array((white[0], 1.0, white[1]))
        gt = apply_cst(balanced, Cst(m))
        w = WhitePoint.from_raw(*white)
        if xy is not None:
            w = w.with_xy(Chromaticity2D(*xy), cct)
        return ChartObservation(patches, w, gt, illuminant_id)
    return factory


@pytest.fixture(scope="session")
def synthetic_charts(camera, anchors):
    """A few dozen charts under blackbodies and LED mixtures, clipped charts removed."""
    spds = planckian_illuminants(camera, [2500, 3000, 3500, 4000, 4500, 5000, 5500, 6500, 7500, 9000])
    spds += sample_dirichlet_illuminants(camera.bank, 30, [1.0] * len(camera.bank), seed=3)
    led_images = camera.led_images()
    charts = [synthesize_chart(camera, spd, anchors.two, led_images).observation for spd in spds]
    return [obs for obs in charts if obs is not None]
