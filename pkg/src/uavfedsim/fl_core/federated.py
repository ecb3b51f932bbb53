"""Federated averaging: client selection, local SGD, weighted aggregation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .datasets import Dataset
from .model import ModelState, accuracy, gradient
from .model import loss as model_loss

__all__ = [
    "TrainingPolicy",
    "num_selected",
    "select_clients",
    "local_update",
    "fedavg_aggregate",
    "evaluate",
]


@dataclass(frozen=True)
class TrainingPolicy:
    """Knobs governing one federated training run.

    client_fraction is the share of clients sampled each round;
    local_epochs is the number of full passes each selected client makes
    over its shard before uploading.
    """

    client_fraction: float = 0.1
    local_epochs: int = 1
    batch_size: int = 50
    learning_rate: float = 0.05
    max_rounds: int = 100

    def __post_init__(self) -> None:
        if not 0.0 < self.client_fraction <= 1.0:
            raise ValueError(f"client_fraction must be in (0, 1], got {self.client_fraction!r}")
        if self.local_epochs < 1:
            raise ValueError(f"local_epochs must be >= 1, got {self.local_epochs!r}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size!r}")
        if not self.learning_rate >= 0.0:
            raise ValueError(f"learning_rate must be >= 0, got {self.learning_rate!r}")
        if self.max_rounds < 0:
            raise ValueError(f"max_rounds must be >= 0, got {self.max_rounds!r}")


def num_selected(num_clients: int, fraction: float) -> int:
    """Clients sampled per round: ceil(fraction * num_clients), at least 1.

    Products within 1e-9 of an integer count as that integer, so decimal
    fractions like 0.1 of 100 clients give exactly 10 rather than tripping
    on binary rounding.
    """
    if num_clients < 1:
        raise ValueError(f"num_clients must be >= 1, got {num_clients!r}")
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0, 1], got {fraction!r}")
    return max(1, math.ceil(fraction * num_clients - 1e-9))


def select_clients(
    num_clients: int,
    fraction: float,
    round_rng: np.random.Generator,
) -> list[int]:
    """Sample a round's participants uniformly without replacement.

    Returns sorted client ids so downstream accumulation order is fixed.
    """
    k = num_selected(num_clients, fraction)
    picked = round_rng.permutation(num_clients)[:k]
    return sorted(int(i) for i in picked)


def local_update(
    state: ModelState,
    features: np.ndarray,
    labels: np.ndarray,
    policy: TrainingPolicy,
    client_rng: np.random.Generator,
) -> ModelState:
    """One client's contribution: local minibatch SGD from the global model.

    Runs policy.local_epochs passes over the shard; each epoch draws a
    fresh shuffle from client_rng and walks contiguous batches of
    policy.batch_size (the last batch may be short). The input state is
    left untouched.

    Args:
        state: global model at the start of the round.
        features: shard feature matrix, shape (n, d).
        labels: shard labels, shape (n,).
        policy: epoch count, batch size, and learning rate to apply.
        client_rng: this client's dedicated stream for epoch shuffles.

    Returns:
        The locally trained model.
    """
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64).ravel()
    n = features.shape[0]
    if n == 0:
        raise ValueError("client shard is empty")
    params = state.params.copy()
    local = ModelState(layer_dims=state.layer_dims, params=params)
    for _ in range(policy.local_epochs):
        order = client_rng.permutation(n)
        for start in range(0, n, policy.batch_size):
            batch = order[start : start + policy.batch_size]
            grad = gradient(local, features[batch], labels[batch])
            params -= policy.learning_rate * grad
    return local


def fedavg_aggregate(updates: list[ModelState], weights: list[float]) -> ModelState:
    """Weighted average of client models, weights normalized to sum 1.

    Accumulation starts from the first term, so a single update passes
    through bit-for-bit.
    """
    if not updates:
        raise ValueError("no updates to aggregate")
    if len(weights) != len(updates):
        raise ValueError(f"{len(updates)} updates but {len(weights)} weights")
    dims = updates[0].layer_dims
    for u in updates[1:]:
        if u.layer_dims != dims:
            raise ValueError(f"mismatched model shapes: {dims} vs {u.layer_dims}")
    w = np.asarray(weights, dtype=np.float64)
    if (w < 0).any():
        raise ValueError("weights must be nonnegative")
    total = float(w.sum())
    if not total > 0:
        raise ValueError(f"weights must sum to a positive value, got {total!r}")
    acc = (w[0] / total) * updates[0].params
    for u, wi in zip(updates[1:], w[1:]):
        acc += (wi / total) * u.params
    return ModelState(layer_dims=dims, params=acc)


def evaluate(state: ModelState, testset: Dataset) -> tuple[float, float]:
    """(accuracy, mean cross-entropy) of the model on a held-out set.

    Argmax ties resolve to the lowest class index, so grading is
    deterministic.
    """
    if len(testset) == 0:
        raise ValueError("test set is empty")
    return (
        accuracy(state, testset.features, testset.labels),
        model_loss(state, testset.features, testset.labels),
    )
