"""
oracle.py
Per-chart best-fit CST under the cosine objective.
Created 17/10/2026
"""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import minimize

from chromacst.colour.core import ChartObservation, Cst, HeadKind, check_head
from chromacst.config import ORACLE_MAX_ITERATIONS
from chromacst.errors import DegenerateMappingError, FitFailureError
from chromacst.mlp.model import assemble_matrices
from chromacst.mlp.train import chart_features, cosine_loss_and_gradient

logger = logging.getLogger(__name__)

GRADIENT_TOLERANCE = 1e-10
FAILURE_GRADIENT = 1e-6 # Gradient norm above which an exhausted budget is a failure.
BFGS_MAXITER_STATUS = 1


class OracleFit(NamedTuple):
    cst: Cst
    loss: float
    start_loss: float


def _objective(theta: NDArray, features: NDArray, gt: NDArray, size: int) -> tuple[float, NDArray]:
    m = assemble_matrices(theta, size)
    loss, d_pred = cosine_loss_and_gradient(features @ m.T, gt)
    d_m = d_pred.T @ features
    return loss, np.delete(d_m.reshape(-1), size + 1)


def least_squares_start(features: NDArray, gt: NDArray) -> NDArray:
    """
    Closed-form least-squares 3xK map from features to gt, centre-normalized.

    Raises:
        DegenerateMappingError: The fitted centre entry is not positive.
    """
    solution, *_ = np.linalg.lstsq(features, gt, rcond=None)
    m = solution.T
    if not m[1, 1] > 0:
        raise DegenerateMappingError(f"Least-squares CST has centre entry {m[1, 1]}.")
    return m / m[1, 1]


def fit_features(
    features: NDArray,
    gt: NDArray,
    head: HeadKind = HeadKind.LINEAR,
    max_iterations: int = ORACLE_MAX_ITERATIONS,
) -> OracleFit:
    """
    Minimize the mean cosine loss of gt against M . features over the free
    entries of a centre-normalized M, with BFGS started from least squares.

    Args:
        features (NDArray): Expanded white-balanced patches, shape (N, K).
        gt (NDArray): Reference XYZ, shape (N, 3).
        head (HeadKind, optional): Head kind of the returned CST.
        max_iterations (int, optional): BFGS iteration budget.

    Returns:
        OracleFit: The better of the refined and the starting CST, with losses.

    Raises:
        FitFailureError: BFGS used its budget without reaching a stationary point.
    """
    size = features.shape[-1]
    check_head(head, size)
    start = least_squares_start(features, gt)
    theta0 = np.delete(start.reshape(-1), size + 1)
    start_loss = _objective(theta0, features, gt, size)[0]

    result = minimize(
        _objective,
        theta0,
        args=(features, gt, size),
        jac=True,
        method="BFGS",
        options={"maxiter": max_iterations, "gtol": GRADIENT_TOLERANCE},
    )
    if result.status == BFGS_MAXITER_STATUS and np.linalg.norm(result.jac) > FAILURE_GRADIENT:
        raise FitFailureError(float(result.fun), f"BFGS did not converge in {max_iterations} iterations.")

    if result.fun <= start_loss and np.all(np.isfinite(result.x)):
        theta, loss = result.x, float(result.fun)
    else:
        theta, loss = theta0, start_loss
    return OracleFit(Cst(assemble_matrices(theta, size), head), loss, start_loss)


def oracle_fit(obs: ChartObservation, head: HeadKind = HeadKind.LINEAR, size: int = 3) -> Cst:
    """
    The centre-normalized CST that best maps the observation's white-balanced
    patches onto its reference XYZ in angle.
    """
    fit = fit_features(chart_features(obs, head, size), obs.gt_xyz, head)
    logger.debug("Oracle fit of %s: loss %.3g (start %.3g).", obs.illuminant_id, fit.loss, fit.start_loss)
    return fit.cst
