"""
model.py
The CST-MLP: a small fully connected network predicting the free entries of a CST.
Created 17/10/2026
"""

from __future__ import annotations

import enum
from pathlib import Path

import attrs
import numpy as np
from numpy.typing import ArrayLike, NDArray

from chromacst.colour.core import Cst, HeadKind, WhitePoint, check_head
from chromacst.config import DEFAULT_ACTIVATION, DEFAULT_HIDDEN, DEFAULT_LAYERS
from chromacst.errors import ConfigurationError, NonFiniteModelError
from chromacst.mlp.encoding import InputEncoding, encode_input
from chromacst.utils.store import dump_json, load_json


class Activation(enum.Enum):
    RELU = "relu"
    TANH = "tanh"

    def __call__(self, z: NDArray) -> NDArray:
        return np.maximum(z, 0.0) if self is Activation.RELU else np.tanh(z)

    def derivative(self, z: NDArray, a: NDArray) -> NDArray:
        """Derivative at pre-activation z with activation a."""
        return (z > 0).astype(np.float64) if self is Activation.RELU else 1.0 - a * a


def free_entries(size: int) -> int:
    """Entries of a 3xK CST other than the fixed centre."""
    return 3 * size - 1


def _center(size: int) -> int:
    return size + 1 # Row-major index of entry (1, 1).


def assemble_matrices(out: ArrayLike, size: int = 3) -> NDArray:
    """Batched assemble_cst without validation: (..., 3K-1) -> (..., 3, K)."""
    out = np.asarray(out, dtype=np.float64)
    full = np.insert(out, _center(size), 1.0, axis=-1)
    return full.reshape(out.shape[:-1] + (3, size))


def assemble_cst(out: ArrayLike, head: HeadKind = HeadKind.LINEAR, size: int = 3) -> Cst:
    """
    Fill a 3xK matrix row-major from 3K-1 values, skipping entry (1, 1), which is 1.

    For the linear head out = (o0..o7) gives [[o0, o1, o2], [o3, 1, o4], [o5, o6, o7]].
    """
    out = np.asarray(out, dtype=np.float64)
    if out.shape != (free_entries(size),):
        raise ConfigurationError(f"Expected {free_entries(size)} values, instead got {out.shape}.")
    return Cst(assemble_matrices(out, size), head)


def disassemble_cst(t: Cst) -> NDArray:
    """The 3K-1 free entries of a centre-normalized CST."""
    return np.delete(t.center_normalized().m.reshape(-1), _center(t.size))


def _as_arrays(values) -> tuple[NDArray, ...]:
    arrays = tuple(np.array(v, dtype=np.float64) for v in values)
    for array in arrays:
        array.flags.writeable = False
    return arrays


@attrs.frozen(eq=False)
class MlpModel:
    """
    Fully connected network from an encoded white point to the free CST entries.

    weights[i] has shape (out, in); the last layer has 3K-1 outputs.
    """

    encoding: InputEncoding
    weights: tuple[NDArray, ...] = attrs.field(converter=_as_arrays)
    biases: tuple[NDArray, ...] = attrs.field(converter=_as_arrays)
    head: HeadKind = HeadKind.LINEAR
    size: int = 3
    activation: Activation = Activation(DEFAULT_ACTIVATION)
    meta: dict = attrs.field(factory=dict)

    def __attrs_post_init__(self) -> None:
        check_head(self.head, self.size)
        if len(self.weights) != len(self.biases) or len(self.weights) < 2:
            raise ConfigurationError("An MLP needs matching weights and biases for at least two layers.")
        fan_in = self.encoding.dim
        for w, b in zip(self.weights, self.biases):
            if w.ndim != 2 or w.shape[1] != fan_in or b.shape != (w.shape[0],):
                raise ConfigurationError(f"Layer shapes {w.shape} / {b.shape} do not chain from {fan_in} inputs.")
            fan_in = w.shape[0]
        if fan_in != free_entries(self.size):
            raise ConfigurationError(f"Output layer has {fan_in} units, expected {free_entries(self.size)}.")
        if not all(np.all(np.isfinite(p)) for p in self.weights + self.biases):
            raise NonFiniteModelError("MLP parameters must be finite.")

    @property
    def hidden(self) -> int:
        return self.weights[0].shape[0]

    @property
    def layers(self) -> int:
        return len(self.weights) - 1

    @property
    def parameter_count(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def macs(self) -> int:
        """Multiply-accumulates of one forward pass."""
        return sum(w.size for w in self.weights)

    def parameters(self) -> list[NDArray]:
        return [p for pair in zip(self.weights, self.biases) for p in pair]

    def with_parameters(self, parameters: list[NDArray], meta: dict | None = None) -> MlpModel:
        return attrs.evolve(
            self,
            weights=parameters[0::2],
            biases=parameters[1::2],
            meta=self.meta if meta is None else meta,
        )

    def to_json(self) -> dict:
        return {
            "encoding": self.encoding.to_json(),
            "head": self.head.value,
            "size": self.size,
            "activation": self.activation.value,
            "hidden": self.hidden,
            "layers": self.layers,
            "weights": [w.tolist() for w in self.weights],
            "biases": [b.tolist() for b in self.biases],
            "meta": self.meta,
        }

    @classmethod
    def from_json(cls, data: dict) -> MlpModel:
        try:
            return cls(
                InputEncoding.from_json(data["encoding"]),
                data["weights"],
                data["biases"],
                HeadKind(data.get("head", "linear")),
                int(data.get("size", 3)),
                Activation(data.get("activation", DEFAULT_ACTIVATION)),
                data.get("meta", {}),
            )
        except (KeyError, ValueError) as e:
            raise ConfigurationError(f"Malformed model file: {e}") from e

    def save(self, path: Path) -> None:
        dump_json(path, self.to_json())

    @classmethod
    def load(cls, path: Path) -> MlpModel:
        return cls.from_json(load_json(path, "Train a model with `train` and pass its model.json."))


def init_model(
    encoding: InputEncoding,
    rng: np.random.Generator,
    hidden: int = DEFAULT_HIDDEN,
    layers: int = DEFAULT_LAYERS,
    head: HeadKind = HeadKind.LINEAR,
    size: int = 3,
    activation: Activation = Activation(DEFAULT_ACTIVATION),
) -> MlpModel:
    """
    Glorot uniform hidden layers. The output layer starts at zero weights with
    the identity CST as bias, so the untrained model predicts the identity.
    """
    if hidden < 1 or layers < 1:
        raise ConfigurationError(f"Need at least one hidden layer of one unit, instead got {layers} x {hidden}.")
    weights, biases = [], []
    fan_in = encoding.dim
    for _ in range(layers):
        limit = np.sqrt(6.0 / (fan_in + hidden))
        weights.append(rng.uniform(-limit, limit, size=(hidden, fan_in)))
        biases.append(np.zeros(hidden))
        fan_in = hidden
    weights.append(np.zeros((free_entries(size), hidden)))
    biases.append(disassemble_cst(Cst.identity(head, size)))
    return MlpModel(encoding, weights, biases, head, size, activation)


def forward_encoded(model: MlpModel, x: ArrayLike) -> NDArray:
    """Network outputs for encoded inputs of shape (dim,) or (n, dim)."""
    a = np.asarray(x, dtype=np.float64)
    for w, b in zip(model.weights[:-1], model.biases[:-1]):
        a = model.activation(a @ w.T + b)
    return a @ model.weights[-1].T + model.biases[-1]


def predict_cst(model: MlpModel, w: WhitePoint) -> Cst:
    """The CST the model predicts for a white point."""
    return assemble_cst(forward_encoded(model, encode_input(w, model.encoding)), model.head, model.size)
