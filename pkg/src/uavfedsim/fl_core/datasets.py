"""Dataset loading, synthesis, and partitioning across clients."""

from __future__ import annotations

import gzip
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO

import numpy as np

__all__ = [
    "Dataset",
    "Shard",
    "IdxFormatError",
    "load_mnist_idx",
    "synth_dataset",
    "partition_iid",
    "partition_shards_noniid",
]

# IDX binary layout (big-endian 32-bit header fields, then unsigned bytes):
#   images: magic 0x00000803, count, rows, cols, pixels row-major
#   labels: magic 0x00000801, count, labels
IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801


class IdxFormatError(ValueError):
    """An IDX file violates the expected binary layout."""


@dataclass
class Dataset:
    """A labeled classification dataset.

    `features` is (n, d) float64 with values in [0, 1]; `labels` is (n,)
    integer in [0, num_classes).
    """

    features: np.ndarray
    labels: np.ndarray
    num_classes: int
    name: str = ""

    def __post_init__(self) -> None:
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.ndim != 2:
            raise ValueError(f"features must be 2-D, got shape {self.features.shape}")
        if self.labels.shape != (self.features.shape[0],):
            raise ValueError(
                f"labels shape {self.labels.shape} does not match "
                f"{self.features.shape[0]} samples"
            )
        if len(self.labels) and (self.labels.min() < 0 or self.labels.max() >= self.num_classes):
            raise ValueError(f"labels must lie in [0, {self.num_classes})")

    def __len__(self) -> int:
        return self.features.shape[0]

    @property
    def feature_dim(self) -> int:
        return int(self.features.shape[1])

    def subset(self, indices: np.ndarray, name: str = "") -> "Dataset":
        """New dataset holding copies of the rows at `indices`."""
        return Dataset(
            features=self.features[indices].copy(),
            labels=self.labels[indices].copy(),
            num_classes=self.num_classes,
            name=name or self.name,
        )


@dataclass(frozen=True)
class Shard:
    """One client's slice of a dataset: indices into the parent arrays."""

    owner_ue: int
    indices: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return int(self.indices.shape[0])


def _read_exact(f: BinaryIO, nbytes: int, what: str) -> bytes:
    data = f.read(nbytes)
    if len(data) != nbytes:
        raise IdxFormatError(f"truncated {what}: wanted {nbytes} bytes, got {len(data)}")
    return data


def _open_binary(path: str | Path) -> BinaryIO:
    """Open an IDX file, transparently ungzipping if it carries the gzip magic."""
    f = open(path, "rb")
    head = f.read(2)
    f.seek(0)
    if head == b"\x1f\x8b":
        return gzip.open(f, "rb")  # type: ignore[return-value]
    return f


def load_mnist_idx(images_path: str | Path, labels_path: str | Path) -> Dataset:
    """Load an MNIST-style IDX image/label file pair.

    Pixels are scaled to [0, 1] by division by 255 and flattened row-major
    to one feature vector per image. Plain and gzip-compressed files are
    both accepted.
    """
    with _open_binary(images_path) as f:
        magic, count, rows, cols = struct.unpack(">IIII", _read_exact(f, 16, "image header"))
        if magic != IMAGES_MAGIC:
            raise IdxFormatError(
                f"bad image magic number: expected {IMAGES_MAGIC:#010x}, got {magic:#010x}"
            )
        pixels = _read_exact(f, count * rows * cols, "image payload")
    with _open_binary(labels_path) as f:
        magic, label_count = struct.unpack(">II", _read_exact(f, 8, "label header"))
        if magic != LABELS_MAGIC:
            raise IdxFormatError(
                f"bad label magic number: expected {LABELS_MAGIC:#010x}, got {magic:#010x}"
            )
        raw_labels = _read_exact(f, label_count, "label payload")
    if label_count != count:
        raise IdxFormatError(
            f"image/label count mismatch: {count} images but {label_count} labels"
        )
    features = np.frombuffer(pixels, dtype=np.uint8).reshape(count, rows * cols)
    labels = np.frombuffer(raw_labels, dtype=np.uint8)
    return Dataset(
        features=features.astype(np.float64) / 255.0,
        labels=labels.astype(np.int64),
        num_classes=10,
        name="mnist",
    )


def synth_dataset(
    num_samples: int,
    num_classes: int,
    feature_dim: int,
    seed: int | np.random.SeedSequence | np.random.Generator,
) -> Dataset:
    """Deterministic Gaussian-blob classification set.

    Each class gets a seeded random center (standard normal entries);
    samples are that center plus unit isotropic noise, labels assigned
    round-robin so classes stay balanced. The whole feature matrix is then
    squashed into [0, 1] by one affine map, preserving geometry.
    """
    if num_samples < 1 or num_classes < 1 or feature_dim < 1:
        raise ValueError("num_samples, num_classes, and feature_dim must all be >= 1")
    rng = np.random.default_rng(seed)
    centers = rng.normal(0.0, 1.0, size=(num_classes, feature_dim))
    labels = np.arange(num_samples, dtype=np.int64) % num_classes
    features = centers[labels] + rng.normal(0.0, 1.0, size=(num_samples, feature_dim))
    lo, hi = features.min(), features.max()
    span = hi - lo if hi > lo else 1.0
    features = (features - lo) / span
    return Dataset(features=features, labels=labels, num_classes=num_classes, name="synthetic")


def partition_iid(
    dataset: Dataset,
    num_clients: int,
    seed: int | np.random.SeedSequence | np.random.Generator,
) -> list[Shard]:
    """Uniform shuffle, then contiguous near-equal slices per client.

    The remainder after equal division is dealt one extra sample per client
    starting from client 0.
    """
    if num_clients < 1:
        raise ValueError(f"num_clients must be >= 1, got {num_clients!r}")
    n = len(dataset)
    if n == 0:
        raise ValueError("dataset is empty")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    base, remainder = divmod(n, num_clients)
    shards: list[Shard] = []
    start = 0
    for client in range(num_clients):
        size = base + (1 if client < remainder else 0)
        shards.append(Shard(owner_ue=client, indices=perm[start : start + size]))
        start += size
    return shards


def partition_shards_noniid(
    dataset: Dataset,
    num_clients: int,
    shards_per_client: int,
    seed: int | np.random.SeedSequence | np.random.Generator,
) -> list[Shard]:
    """Pathological label-skewed split: sort by label, slice, deal slices.

    The dataset is sorted by label, cut into num_clients*shards_per_client
    equal slices, and each client receives shards_per_client randomly dealt
    slices, so each client sees only a few distinct labels.
    """
    if num_clients < 1 or shards_per_client < 1:
        raise ValueError("num_clients and shards_per_client must be >= 1")
    n = len(dataset)
    num_slices = num_clients * shards_per_client
    if n % num_slices != 0:
        raise ValueError(
            f"{n} samples cannot be cut into {num_slices} equal slices "
            f"({num_clients} clients x {shards_per_client} shards)"
        )
    slice_size = n // num_slices
    order = np.argsort(dataset.labels, kind="stable")
    rng = np.random.default_rng(seed)
    dealt = rng.permutation(num_slices)
    shards: list[Shard] = []
    for client in range(num_clients):
        mine = dealt[client * shards_per_client : (client + 1) * shards_per_client]
        indices = np.concatenate([order[s * slice_size : (s + 1) * slice_size] for s in mine])
        shards.append(Shard(owner_ue=client, indices=indices))
    return shards
