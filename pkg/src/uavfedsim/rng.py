"""Named deterministic RNG streams derived from one master seed.

Every stochastic draw in a run comes from a stream keyed by a domain tag
plus optional indices (round, client). Streams are mutually independent
`SeedSequence` children of the master seed, so results never depend on
call order or on how work is scheduled across threads.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "seed_sequence",
    "stream",
    "geometry_stream",
    "init_stream",
    "selection_stream",
    "client_stream",
    "partition_seed",
    "data_seed",
]

# domain tags; keys are (domain, *indices)
_GEOMETRY = 0
_INIT = 1
_SELECTION = 2
_CLIENT = 3
_PARTITION = 4
_DATA = 5


def seed_sequence(master_seed: int, *key: int) -> np.random.SeedSequence:
    """Child seed for the stream identified by `key` under `master_seed`."""
    return np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))


def stream(master_seed: int, *key: int) -> np.random.Generator:
    """Fresh generator for the stream identified by `key`."""
    return np.random.default_rng(seed_sequence(master_seed, *key))


def geometry_stream(master_seed: int) -> np.random.Generator:
    """Stream for sampling UE positions and CPU capacities."""
    return stream(master_seed, _GEOMETRY)


def init_stream(master_seed: int) -> np.random.Generator:
    """Stream for the global model's initial parameters."""
    return stream(master_seed, _INIT)


def selection_stream(master_seed: int, round_index: int) -> np.random.Generator:
    """Per-round stream for client selection."""
    return stream(master_seed, _SELECTION, round_index)


def client_stream(master_seed: int, round_index: int, client_id: int) -> np.random.Generator:
    """Per-(round, client) stream for local minibatch shuffles."""
    return stream(master_seed, _CLIENT, round_index, client_id)


def partition_seed(master_seed: int) -> np.random.SeedSequence:
    """Seed for partitioning the dataset across clients."""
    return seed_sequence(master_seed, _PARTITION)


def data_seed(master_seed: int) -> np.random.SeedSequence:
    """Seed for synthetic dataset generation."""
    return seed_sequence(master_seed, _DATA)
