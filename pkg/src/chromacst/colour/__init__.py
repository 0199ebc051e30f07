"""
colour
Colour value types, white balance, CST application and evaluation metrics.
"""

from chromacst.colour.core import (
    HEAD_SIZES,
    ChartObservation,
    Chromaticity2D,
    ChromaticitySpace,
    Cst,
    HeadKind,
    RawTriple,
    WhitePoint,
    XyzTriple,
    apply_cst,
    apply_matrix,
    check_head,
    expand_features,
    white_balance,
    white_balance_map,
    xy_to_xyz,
    xyz_to_xy,
)
from chromacst.colour.metrics import (
    angular_error,
    chart_delta_e,
    delta_e_2000,
    lab_to_xyz,
    xyz_to_lab,
)
