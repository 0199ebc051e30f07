"""
config.py
Configurations and documented defaults.
Created 17/10/2026
"""

import os
from pathlib import Path

ASSETS_DIR = Path(os.getenv("CHROMACST_ASSETS_DIR", Path(__file__).parent / "assets"))
LOG_LEVEL = os.getenv("CHROMACST_LOG_LEVEL", "INFO")

# Spectral grid (nm).
WAVELENGTH_START = 380
WAVELENGTH_STOP = 730
WAVELENGTH_STEP = 5

# Chart layout, 0-based reading order. Bottom row is white -> black.
CHART_PATCHES = 24
CHART_COLUMNS = 6
CHART_ROWS = 4
WHITE_PATCH_INDEX = 18
GRAY_ANCHOR_INDEX = 20

# CIE XYZ of the D50 reference white.
D50_WHITE = (0.9642, 1.0, 0.8251)

# Correlated colour temperature.
CCT_MIN = 1500.0
CCT_MAX = 25000.0
OFF_LOCUS_DUV = 0.05
REFERENCE_CCT = 5003.0 # Illuminant used to render ground truth XYZ for synthetic charts.

# Calibrated anchor temperatures (K).
ANCHOR_WARM = 2500.0
ANCHOR_NEUTRAL = 5000.0
ANCHOR_COOL = 6500.0

# CST-MLP defaults.
DEFAULT_HIDDEN = 32
DEFAULT_LAYERS = 1
DEFAULT_ITERATIONS = 100000
DEFAULT_LR = 0.001
DEFAULT_NOISE_SIGMA = 0.05
DEFAULT_BATCH = 64
DEFAULT_SEED = 0
DEFAULT_ACTIVATION = "relu"
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPSILON = 1e-8
LOSS_LOG_EVERY = 1000

# Oracle fitting.
ORACLE_MAX_ITERATIONS = 500

# Dataset.
PATCH_WINDOW = 11
CLIP_MARGIN = 0.01
LED_COUNT = 7
LED_EXPOSURE = 0.9 # White patch peak channel under a single LED, as a fraction of white level.
SPLIT_FRACTIONS = (0.5, 0.2, 0.3)
CHART_PATCH_PIXELS = 16
CHART_GAP_PIXELS = 4

# Pipeline.
LUT_MARGIN = 0.05
EVAL_RESOLUTION = (1080, 720)
PERCENTILES = (25, 50, 75, 90)
