"""
chromacst
Colorimetric mapping for camera pipelines: CCT-interpolated CSTs, a chromaticity
conditioned CST-MLP, baselines, spectral data synthesis and evaluation.
"""

__version__ = "1.0.0"
