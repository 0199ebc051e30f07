"""
train.py
Cosine loss, hand-derived backpropagation and Adam training of the CST-MLP.
Created 17/10/2026
"""

from __future__ import annotations

import logging
from typing import NamedTuple, Sequence

import attrs
import numpy as np
from numpy.typing import ArrayLike, NDArray

from chromacst.colour.core import ChartObservation, HeadKind, expand_features, white_balance
from chromacst.config import (
    ADAM_BETA1,
    ADAM_BETA2,
    ADAM_EPSILON,
    DEFAULT_ACTIVATION,
    DEFAULT_BATCH,
    DEFAULT_HIDDEN,
    DEFAULT_ITERATIONS,
    DEFAULT_LAYERS,
    DEFAULT_LR,
    DEFAULT_NOISE_SIGMA,
    DEFAULT_SEED,
    LOSS_LOG_EVERY,
)
from chromacst.errors import ConfigurationError, DataError, DegenerateColorError, TrainingDivergenceError
from chromacst.mlp.encoding import InputEncoding, encode_many
from chromacst.mlp.model import Activation, MlpModel, assemble_matrices, init_model
from chromacst.utils.rng import stream

logger = logging.getLogger(__name__)


def _positive(instance, attribute, value) -> None:
    if not value > 0:
        raise ConfigurationError(f"{attribute.name} must be positive, instead got {value}.")


def _nonnegative(instance, attribute, value) -> None:
    if not value >= 0:
        raise ConfigurationError(f"{attribute.name} must be nonnegative, instead got {value}.")


@attrs.frozen
class TrainConfig:
    iterations: int = attrs.field(default=DEFAULT_ITERATIONS, validator=_positive)
    lr: float = attrs.field(default=DEFAULT_LR, validator=_positive)
    noise_sigma: float = attrs.field(default=DEFAULT_NOISE_SIGMA, validator=_nonnegative)
    batch: int = attrs.field(default=DEFAULT_BATCH, validator=_positive)
    seed: int = DEFAULT_SEED
    log_every: int = attrs.field(default=LOSS_LOG_EVERY, validator=_positive)


class TrainResult(NamedTuple):
    model: MlpModel
    loss_curve: list[tuple[int, float]]


def cosine_loss_and_gradient(pred: ArrayLike, gt: ArrayLike) -> tuple[float, NDArray]:
    """
    Mean of 1 - cos(pred_i, gt_i) over all patch pairs, and its gradient with
    respect to pred.

    Args:
        pred (ArrayLike): Predicted XYZ, shape (..., N, 3).
        gt (ArrayLike): Reference XYZ, same shape.

    Raises:
        DegenerateColorError: A patch has zero norm.
    """
    pred = np.asarray(pred, dtype=np.float64)
    gt = np.asarray(gt, dtype=np.float64)
    pred_norm = np.linalg.norm(pred, axis=-1, keepdims=True)
    gt_norm = np.linalg.norm(gt, axis=-1, keepdims=True)
    if np.any(pred_norm == 0) or np.any(gt_norm == 0):
        raise DegenerateColorError("Cosine loss is undefined for a zero patch.")

    gt_unit = gt / gt_norm
    cos = np.sum(pred * gt_unit, axis=-1, keepdims=True) / pred_norm
    count = cos.size
    loss = float(np.sum(1.0 - cos) / count)
    gradient = -(gt_unit - cos * pred / pred_norm) / pred_norm / count
    return loss, gradient


def cosine_loss(pred: ArrayLike, gt: ArrayLike) -> float:
    """Mean cosine distance between predicted and reference patches, in [0, 2]."""
    return cosine_loss_and_gradient(pred, gt)[0]


def chart_features(obs: ChartObservation, head: HeadKind = HeadKind.LINEAR, size: int = 3) -> NDArray:
    """White-balanced, feature-expanded patches of an observation, shape (24, K)."""
    return expand_features(white_balance(obs.patches_raw, obs.white), head, size)


def loss_and_gradients(
    model: MlpModel,
    encoded: NDArray,
    features: NDArray,
    gt: NDArray,
) -> tuple[float, list[NDArray]]:
    """
    Batch loss and its gradient for every parameter, by backpropagation
    through the CST application and the network.

    Args:
        model (MlpModel): The network.
        encoded (NDArray): Encoded white points, shape (B, dim).
        features (NDArray): Expanded patches, shape (B, N, K).
        gt (NDArray): Reference XYZ, shape (B, N, 3).

    Returns:
        tuple: Loss and gradients ordered like model.parameters().
    """
    return _backpropagate(model.parameters(), model.activation, model.size, encoded, features, gt)


def _backpropagate(
    parameters: Sequence[NDArray],
    activation: Activation,
    size: int,
    encoded: NDArray,
    features: NDArray,
    gt: NDArray,
) -> tuple[float, list[NDArray]]:
    # parameters alternate weight, bias per layer, as in MlpModel.parameters().
    weights, biases = parameters[0::2], parameters[1::2]
    activations = [encoded]
    pre_activations = []
    a = encoded
    for w, b in zip(weights[:-1], biases[:-1]):
        z = a @ w.T + b
        a = activation(z)
        pre_activations.append(z)
        activations.append(a)
    out = a @ weights[-1].T + biases[-1]

    matrices = assemble_matrices(out, size)
    pred = np.einsum("brk,bnk->bnr", matrices, features)
    loss, d_pred = cosine_loss_and_gradient(pred, gt)

    d_matrices = np.einsum("bnr,bnk->brk", d_pred, features)
    d_out = np.delete(d_matrices.reshape(len(out), -1), size + 1, axis=-1)

    gradients = []
    delta = d_out
    for layer in range(len(weights) - 1, -1, -1):
        gradients.append(delta.sum(axis=0))
        gradients.append(delta.T @ activations[layer])
        if layer > 0:
            z = pre_activations[layer - 1]
            delta = (delta @ weights[layer]) * activation.derivative(z, activations[layer])
    gradients.reverse()
    return loss, gradients


class Adam():
    """Adam with bias-corrected moments."""

    def __init__(self, parameters: list[NDArray], lr: float) -> None:
        self.lr = lr
        self.step_count = 0
        self._m = [np.zeros_like(p) for p in parameters]
        self._v = [np.zeros_like(p) for p in parameters]

    def step(self, parameters: list[NDArray], gradients: list[NDArray]) -> list[NDArray]:
        self.step_count += 1
        correction1 = 1.0 - ADAM_BETA1 ** self.step_count
        correction2 = 1.0 - ADAM_BETA2 ** self.step_count
        updated = []
        for index, (p, g) in enumerate(zip(parameters, gradients)):
            self._m[index] = ADAM_BETA1 * self._m[index] + (1.0 - ADAM_BETA1) * g
            self._v[index] = ADAM_BETA2 * self._v[index] + (1.0 - ADAM_BETA2) * g * g
            m_hat = self._m[index] / correction1
            v_hat = self._v[index] / correction2
            updated.append(p - self.lr * m_hat / (np.sqrt(v_hat) + ADAM_EPSILON))
        return updated


def dataset_loss(model: MlpModel, dataset: Sequence[ChartObservation]) -> float:
    """Mean cosine loss of the model over observations, without noise."""
    encoded = encode_many([obs.white for obs in dataset], model.encoding)
    features = np.stack([chart_features(obs, model.head, model.size) for obs in dataset])
    gt = np.stack([obs.gt_xyz for obs in dataset])
    return loss_and_gradients(model, encoded, features, gt)[0]


def train(
    dataset: Sequence[ChartObservation],
    cfg: TrainConfig,
    enc: InputEncoding,
    hidden: int = DEFAULT_HIDDEN,
    layers: int = DEFAULT_LAYERS,
    head: HeadKind = HeadKind.LINEAR,
    size: int = 3,
    activation: Activation = Activation(DEFAULT_ACTIVATION),
    meta: dict | None = None,
) -> TrainResult:
    """
    Train a CST-MLP with Adam on the cosine loss.

    Every iteration draws a batch of observations with replacement, adds
    Gaussian noise to each normalized input coordinate, predicts a CST per
    observation, applies it to the white-balanced patches and takes one Adam
    step. Initialization, batches and noise come from separate streams of
    cfg.seed.

    Args:
        dataset (Sequence[ChartObservation]): Training observations.
        cfg (TrainConfig): Optimizer settings.
        enc (InputEncoding): Input encoding, normally fitted on dataset.
        hidden (int, optional): Units per hidden layer.
        layers (int, optional): Number of hidden layers.
        head (HeadKind, optional): CST head the network predicts.
        size (int, optional): Feature count of the head.
        activation (Activation, optional): Hidden activation.
        meta (dict, optional): Extra provenance stored in the model.

    Returns:
        TrainResult: The trained model and the loss logged every cfg.log_every
            iterations.

    Raises:
        TrainingDivergenceError: The loss or a gradient stops being finite.
    """
    if len(dataset) == 0:
        raise DataError("Cannot train on an empty dataset.")
    encoded = encode_many([obs.white for obs in dataset], enc)
    features = np.stack([chart_features(obs, head, size) for obs in dataset])
    gt = np.stack([obs.gt_xyz for obs in dataset])

    model = init_model(enc, stream(cfg.seed, "init"), hidden, layers, head, size, activation)
    batch_rng = stream(cfg.seed, "batch")
    noise_rng = stream(cfg.seed, "noise")
    batch = min(cfg.batch, len(dataset))
    parameters = model.parameters()
    optimizer = Adam(parameters, cfg.lr)
    loss_curve = []

    logger.info("Training %s MLP (%d x %d) on %d charts for %d iterations.", enc.kind.value, layers, hidden, len(dataset), cfg.iterations)
    for iteration in range(1, cfg.iterations + 1):
        picks = batch_rng.integers(0, len(dataset), size=batch)
        inputs = encoded[picks]
        if cfg.noise_sigma > 0:
            inputs = inputs + noise_rng.normal(0.0, cfg.noise_sigma, size=inputs.shape)

        loss, gradients = _backpropagate(parameters, activation, size, inputs, features[picks], gt[picks])
        if not np.isfinite(loss) or not all(np.all(np.isfinite(g)) for g in gradients):
            raise TrainingDivergenceError(iteration)

        parameters = optimizer.step(parameters, gradients)
        if not all(np.all(np.isfinite(p)) for p in parameters):
            raise TrainingDivergenceError(iteration, "Non-finite parameters after the update.")

        if iteration % cfg.log_every == 0 or iteration == cfg.iterations:
            loss_curve.append((iteration, loss))
            logger.info("Iteration %d: batch loss %.6g", iteration, loss)

    meta = dict(meta or {})
    meta.update({
        "seed": cfg.seed,
        "iterations": cfg.iterations,
        "lr": cfg.lr,
        "noise_sigma": cfg.noise_sigma,
        "batch": batch,
    })
    return TrainResult(model.with_parameters(parameters, meta), loss_curve)
