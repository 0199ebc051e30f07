"""
metrics.py
Angular error, CIELAB conversion and CIEDE2000 colour difference.
Created 17/10/2026
"""

import numpy as np
from numpy.typing import ArrayLike, NDArray

from chromacst.config import D50_WHITE, GRAY_ANCHOR_INDEX
from chromacst.errors import DegenerateAnchorError, DegenerateColorError, InvalidWhitePointError

LAB_EPSILON = (6 / 29) ** 3


def angular_error(a: ArrayLike, b: ArrayLike) -> NDArray | float:
    """
    Angle in degrees between colour vectors, over the last axis.

    Evaluated as atan2(|a x b|, a . b), which equals the clamped arccos of the
    normalized dot product but keeps full precision for near-parallel vectors.

    Raises:
        DegenerateColorError: Either vector has zero norm.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if np.any(np.linalg.norm(a, axis=-1) == 0) or np.any(np.linalg.norm(b, axis=-1) == 0):
        raise DegenerateColorError("Angular error is undefined for a zero vector.")
    cross = np.linalg.norm(np.cross(a, b), axis=-1)
    dot = np.sum(a * b, axis=-1)
    angle = np.degrees(np.arctan2(cross, dot))
    return float(angle) if np.ndim(angle) == 0 else angle


def _lab_f(t: NDArray) -> NDArray:
    return np.where(t > LAB_EPSILON, np.cbrt(t), t / (3 * (6 / 29) ** 2) + 4 / 29)


def _lab_f_inverse(f: NDArray) -> NDArray:
    return np.where(f > 6 / 29, f ** 3, 3 * (6 / 29) ** 2 * (f - 4 / 29))


def xyz_to_lab(p: ArrayLike, white: ArrayLike = D50_WHITE) -> NDArray:
    """
    CIE XYZ to CIELAB relative to a reference white.

    Raises:
        InvalidWhitePointError: A reference white component is not positive.
    """
    white = np.asarray(white, dtype=np.float64)
    if np.any(white <= 0):
        raise InvalidWhitePointError(f"Reference white must be positive, instead got {white}.")
    f = _lab_f(np.asarray(p, dtype=np.float64) / white)
    fx, fy, fz = f[..., 0], f[..., 1], f[..., 2]
    return np.stack((116 * fy - 16, 500 * (fx - fy), 200 * (fy - fz)), axis=-1)


def lab_to_xyz(lab: ArrayLike, white: ArrayLike = D50_WHITE) -> NDArray:
    """CIELAB to CIE XYZ relative to a reference white."""
    lab = np.asarray(lab, dtype=np.float64)
    fy = (lab[..., 0] + 16) / 116
    fx = fy + lab[..., 1] / 500
    fz = fy - lab[..., 2] / 200
    return _lab_f_inverse(np.stack((fx, fy, fz), axis=-1)) * np.asarray(white, dtype=np.float64)


def delta_e_2000(lab1: ArrayLike, lab2: ArrayLike) -> NDArray | float:
    """
    CIEDE2000 colour difference with kL = kC = kH = 1, over the last axis.

    Args:
        lab1 (ArrayLike): CIELAB values, shape (..., 3).
        lab2 (ArrayLike): CIELAB values, broadcastable against lab1.

    Returns:
        NDArray | float: The colour difference.
    """
    lab1 = np.asarray(lab1, dtype=np.float64)
    lab2 = np.asarray(lab2, dtype=np.float64)
    l1, a1, b1 = lab1[..., 0], lab1[..., 1], lab1[..., 2]
    l2, a2, b2 = lab2[..., 0], lab2[..., 1], lab2[..., 2]

    c_bar = (np.hypot(a1, b1) + np.hypot(a2, b2)) / 2
    g = 0.5 * (1 - np.sqrt(c_bar ** 7 / (c_bar ** 7 + 25.0 ** 7)))
    a1p = (1 + g) * a1
    a2p = (1 + g) * a2
    c1p = np.hypot(a1p, b1)
    c2p = np.hypot(a2p, b2)
    h1p = np.degrees(np.arctan2(b1, a1p)) % 360
    h2p = np.degrees(np.arctan2(b2, a2p)) % 360
    chroma_zero = c1p * c2p == 0

    delta_lp = l2 - l1
    delta_cp = c2p - c1p
    dh = h2p - h1p
    dh = np.where(dh > 180, dh - 360, np.where(dh < -180, dh + 360, dh))
    dh = np.where(chroma_zero, 0.0, dh)
    delta_hp = 2 * np.sqrt(c1p * c2p) * np.sin(np.radians(dh / 2))

    l_bar = (l1 + l2) / 2
    cp_bar = (c1p + c2p) / 2
    h_sum = h1p + h2p
    h_bar = np.where(
        np.abs(h1p - h2p) <= 180,
        h_sum / 2,
        np.where(h_sum < 360, (h_sum + 360) / 2, (h_sum - 360) / 2),
    )
    h_bar = np.where(chroma_zero, h_sum, h_bar)

    t = (
        1
        - 0.17 * np.cos(np.radians(h_bar - 30))
        + 0.24 * np.cos(np.radians(2 * h_bar))
        + 0.32 * np.cos(np.radians(3 * h_bar + 6))
        - 0.20 * np.cos(np.radians(4 * h_bar - 63))
    )
    delta_theta = 30 * np.exp(-(((h_bar - 275) / 25) ** 2))
    r_c = 2 * np.sqrt(cp_bar ** 7 / (cp_bar ** 7 + 25.0 ** 7))
    s_l = 1 + 0.015 * (l_bar - 50) ** 2 / np.sqrt(20 + (l_bar - 50) ** 2)
    s_c = 1 + 0.045 * cp_bar
    s_h = 1 + 0.015 * cp_bar * t
    r_t = -np.sin(np.radians(2 * delta_theta)) * r_c

    term_l = delta_lp / s_l
    term_c = delta_cp / s_c
    term_h = delta_hp / s_h
    delta_e = np.sqrt(term_l ** 2 + term_c ** 2 + term_h ** 2 + r_t * term_c * term_h)
    return float(delta_e) if np.ndim(delta_e) == 0 else delta_e


def chart_delta_e(
    pred: ArrayLike,
    gt: ArrayLike,
    anchor_index: int = GRAY_ANCHOR_INDEX,
    reference_white: ArrayLike = D50_WHITE,
) -> float:
    """
    Mean CIEDE2000 over a chart after matching the anchor gray patch luminance.

    The predicted set is scaled uniformly so its anchor patch Y equals the
    ground truth anchor Y, then both sets are converted to CIELAB.

    Args:
        pred (ArrayLike): Predicted XYZ, shape (24, 3).
        gt (ArrayLike): Ground truth XYZ, shape (24, 3).
        anchor_index (int, optional): 0-based index of the anchor gray patch.
        reference_white (ArrayLike, optional): CIELAB reference white.

    Raises:
        DegenerateAnchorError: Either anchor luminance is not positive.
    """
    pred = np.asarray(pred, dtype=np.float64)
    gt = np.asarray(gt, dtype=np.float64)
    pred_y = pred[anchor_index, 1]
    gt_y = gt[anchor_index, 1]
    if not (pred_y > 0 and gt_y > 0):
        raise DegenerateAnchorError(f"Anchor patch luminance must be positive (pred {pred_y}, gt {gt_y}).")

    scaled = pred * (gt_y / pred_y)
    return float(np.mean(delta_e_2000(xyz_to_lab(scaled, reference_white), xyz_to_lab(gt, reference_white))))
