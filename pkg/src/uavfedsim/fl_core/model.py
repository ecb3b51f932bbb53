"""From-scratch multilayer perceptron on a flat float64 parameter vector.

Hidden layers use tanh, the output layer is softmax, and the training loss
is mean cross-entropy. Keeping every parameter in one flat vector makes
model exchange, averaging, and payload accounting trivial.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ModelState",
    "param_count",
    "init_model",
    "unpack_params",
    "pack_params",
    "forward",
    "loss",
    "gradient",
    "predict",
    "accuracy",
]


def param_count(layer_dims: tuple[int, ...] | list[int]) -> int:
    """Total number of weights and biases for the given layer widths."""
    dims = tuple(int(d) for d in layer_dims)
    if len(dims) < 2:
        raise ValueError(f"need at least input and output widths, got {dims!r}")
    if any(d < 1 for d in dims):
        raise ValueError(f"layer widths must be positive, got {dims!r}")
    return sum((fan_in + 1) * fan_out for fan_in, fan_out in zip(dims[:-1], dims[1:]))


@dataclass
class ModelState:
    """Flat parameter vector plus the layer widths that give it shape."""

    layer_dims: tuple[int, ...]
    params: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.layer_dims = tuple(int(d) for d in self.layer_dims)
        self.params = np.asarray(self.params, dtype=np.float64)
        expected = param_count(self.layer_dims)
        if self.params.shape != (expected,):
            raise ValueError(
                f"params shape {self.params.shape} does not match "
                f"{expected} parameters for layers {self.layer_dims}"
            )

    def copy(self) -> "ModelState":
        return ModelState(layer_dims=self.layer_dims, params=self.params.copy())


def init_model(
    layer_dims: tuple[int, ...] | list[int],
    rng: np.random.Generator,
    scale: float = 0.05,
) -> ModelState:
    """Initialize all parameters uniformly in [-scale, scale]."""
    dims = tuple(int(d) for d in layer_dims)
    n = param_count(dims)
    params = rng.uniform(-scale, scale, size=n)
    return ModelState(layer_dims=dims, params=params)


def unpack_params(state: ModelState) -> list[tuple[np.ndarray, np.ndarray]]:
    """Views of the flat vector as per-layer (weights, bias) pairs.

    Layer l's block is the (fan_in, fan_out) weight matrix followed by the
    fan_out bias entries. The returned arrays share memory with
    `state.params`.
    """
    dims = state.layer_dims
    layers = []
    offset = 0
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        w = state.params[offset : offset + fan_in * fan_out].reshape(fan_in, fan_out)
        offset += fan_in * fan_out
        b = state.params[offset : offset + fan_out]
        offset += fan_out
        layers.append((w, b))
    return layers


def pack_params(
    layer_dims: tuple[int, ...] | list[int],
    layers: list[tuple[np.ndarray, np.ndarray]],
) -> ModelState:
    """Inverse of unpack_params: flatten (weights, bias) pairs into a vector."""
    chunks = []
    for w, b in layers:
        chunks.append(np.asarray(w, dtype=np.float64).ravel())
        chunks.append(np.asarray(b, dtype=np.float64).ravel())
    return ModelState(layer_dims=tuple(layer_dims), params=np.concatenate(chunks))


def _affine_stack(state: ModelState, x: np.ndarray) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Forward pass keeping pre-activations and activations for backprop."""
    layers = unpack_params(state)
    activations = [x]
    pre_acts = []
    h = x
    for i, (w, b) in enumerate(layers):
        z = h @ w + b
        pre_acts.append(z)
        h = z if i == len(layers) - 1 else np.tanh(z)
        activations.append(h)
    return pre_acts, activations


def forward(state: ModelState, x: np.ndarray) -> np.ndarray:
    """Class probabilities, shape (n, num_classes).

    Accepts a single sample (d,) or a batch (n, d); a single sample is
    promoted to a batch of one.
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[1] != state.layer_dims[0]:
        raise ValueError(
            f"input width {x.shape[1]} does not match model input {state.layer_dims[0]}"
        )
    _, activations = _affine_stack(state, x)
    logits = activations[-1]
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def loss(state: ModelState, x: np.ndarray, y: np.ndarray) -> float:
    """Mean cross-entropy of the batch, computed via log-sum-exp."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    y = np.asarray(y, dtype=np.int64).ravel()
    if y.shape[0] != x.shape[0]:
        raise ValueError(f"{x.shape[0]} samples but {y.shape[0]} labels")
    _, activations = _affine_stack(state, x)
    logits = activations[-1]
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    log_probs = shifted[np.arange(len(y)), y] - log_norm
    return float(-log_probs.mean())


def gradient(state: ModelState, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Flat gradient of the mean cross-entropy over the batch.

    Same layout as `state.params`: per layer, weights then bias.
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    y = np.asarray(y, dtype=np.int64).ravel()
    if y.shape[0] != x.shape[0]:
        raise ValueError(f"{x.shape[0]} samples but {y.shape[0]} labels")
    n = x.shape[0]
    layers = unpack_params(state)
    pre_acts, activations = _affine_stack(state, x)

    logits = activations[-1]
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    probs = exp / exp.sum(axis=1, keepdims=True)
    delta = probs.copy()
    delta[np.arange(n), y] -= 1.0
    delta /= n

    grads: list[tuple[np.ndarray, np.ndarray]] = [None] * len(layers)  # type: ignore[list-item]
    for i in range(len(layers) - 1, -1, -1):
        grads[i] = (activations[i].T @ delta, delta.sum(axis=0))
        if i > 0:
            w, _ = layers[i]
            delta = (delta @ w.T) * (1.0 - np.tanh(pre_acts[i - 1]) ** 2)

    return pack_params(state.layer_dims, grads).params


def predict(state: ModelState, x: np.ndarray) -> np.ndarray:
    """Most-likely class per sample, shape (n,)."""
    return forward(state, x).argmax(axis=1)


def accuracy(state: ModelState, x: np.ndarray, y: np.ndarray) -> float:
    """Fraction of samples whose argmax class matches the label."""
    y = np.asarray(y, dtype=np.int64).ravel()
    return float((predict(state, x) == y).mean())
