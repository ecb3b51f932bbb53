"""IDX parsing, synthetic data generation, and partitioning properties."""

import gzip
import struct

import numpy as np
import pytest

from uavfedsim.fl_core import (
    Dataset,
    IdxFormatError,
    load_mnist_idx,
    partition_iid,
    partition_shards_noniid,
    synth_dataset,
)

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801


def make_idx_pair(count, rows=2, cols=2, *, image_magic=IMAGES_MAGIC,
                  label_magic=LABELS_MAGIC, label_count=None, truncate_images=0):
    """Fabricate a matching IDX image/label byte pair by hand."""
    rng = np.random.default_rng(99)
    pixels = rng.integers(0, 256, size=count * rows * cols, dtype=np.uint8)
    images = struct.pack(">IIII", image_magic, count, rows, cols) + pixels.tobytes()
    if truncate_images:
        images = images[:-truncate_images]
    n_labels = count if label_count is None else label_count
    labels = struct.pack(">II", label_magic, n_labels) + bytes(
        i % 10 for i in range(n_labels)
    )
    return images, labels


def write_pair(tmp_path, images, labels, gz=False):
    img_path = tmp_path / ("img.idx.gz" if gz else "img.idx")
    lab_path = tmp_path / ("lab.idx.gz" if gz else "lab.idx")
    if gz:
        img_path.write_bytes(gzip.compress(images))
        lab_path.write_bytes(gzip.compress(labels))
    else:
        img_path.write_bytes(images)
        lab_path.write_bytes(labels)
    return img_path, lab_path


def test_load_idx_roundtrip(tmp_path):
    images, labels = make_idx_pair(12, rows=3, cols=5)
    img, lab = write_pair(tmp_path, images, labels)
    ds = load_mnist_idx(img, lab)
    assert len(ds) == 12
    assert ds.feature_dim == 15
    assert ds.num_classes == 10
    assert ds.features.min() >= 0.0 and ds.features.max() <= 1.0
    # pixel 0..255 maps to value/255 exactly
    raw = np.frombuffer(images[16:], dtype=np.uint8).reshape(12, 15)
    assert np.array_equal(ds.features, raw.astype(np.float64) / 255.0)
    assert np.array_equal(ds.labels, np.arange(12) % 10)


def test_load_idx_gzip(tmp_path):
    images, labels = make_idx_pair(7)
    plain = load_mnist_idx(*write_pair(tmp_path, images, labels))
    gzipped = load_mnist_idx(*write_pair(tmp_path, images, labels, gz=True))
    assert np.array_equal(plain.features, gzipped.features)
    assert np.array_equal(plain.labels, gzipped.labels)


def test_load_idx_bad_image_magic(tmp_path):
    images, labels = make_idx_pair(4, image_magic=0x00000802)
    img, lab = write_pair(tmp_path, images, labels)
    with pytest.raises(IdxFormatError, match="image magic"):
        load_mnist_idx(img, lab)


def test_load_idx_bad_label_magic(tmp_path):
    images, labels = make_idx_pair(4, label_magic=0x00000999)
    img, lab = write_pair(tmp_path, images, labels)
    with pytest.raises(IdxFormatError, match="label magic"):
        load_mnist_idx(img, lab)


def test_load_idx_truncated(tmp_path):
    images, labels = make_idx_pair(4, truncate_images=3)
    img, lab = write_pair(tmp_path, images, labels)
    with pytest.raises(IdxFormatError, match="image payload"):
        load_mnist_idx(img, lab)


def test_load_idx_count_mismatch(tmp_path):
    images, labels = make_idx_pair(10, label_count=9)
    img, lab = write_pair(tmp_path, images, labels)
    with pytest.raises(IdxFormatError, match="count mismatch"):
        load_mnist_idx(img, lab)


def test_synth_deterministic():
    a = synth_dataset(1000, 10, 784, seed=7)
    b = synth_dataset(1000, 10, 784, seed=7)
    assert np.array_equal(a.features, b.features)
    assert np.array_equal(a.labels, b.labels)
    c = synth_dataset(1000, 10, 784, seed=8)
    assert not np.array_equal(a.features, c.features)


def test_synth_shapes_and_range():
    ds = synth_dataset(10, 2, 4, seed=3)
    assert len(ds) == 10
    assert ds.feature_dim == 4
    assert set(np.unique(ds.labels)) == {0, 1}
    assert ds.features.min() >= 0.0 and ds.features.max() <= 1.0


def test_synth_labels_balanced():
    ds = synth_dataset(100, 10, 8, seed=0)
    counts = np.bincount(ds.labels, minlength=10)
    assert (counts == 10).all()


def test_synth_validation():
    with pytest.raises(ValueError):
        synth_dataset(0, 2, 4, seed=1)
    with pytest.raises(ValueError):
        synth_dataset(10, 0, 4, seed=1)


def test_dataset_validation():
    with pytest.raises(ValueError):
        Dataset(features=np.zeros((3, 2)), labels=np.array([0, 1]), num_classes=2)
    with pytest.raises(ValueError):
        Dataset(features=np.zeros((2, 2)), labels=np.array([0, 5]), num_classes=2)


def check_partition(shards, n):
    all_idx = np.concatenate([s.indices for s in shards])
    assert len(all_idx) == n
    assert np.array_equal(np.sort(all_idx), np.arange(n))


def test_partition_iid_sizes():
    ds = synth_dataset(10, 2, 4, seed=1)
    shards = partition_iid(ds, 3, seed=11)
    assert sorted(len(s) for s in shards) == [3, 3, 4]
    assert len(shards[0]) == 4  # remainder goes to the first clients
    check_partition(shards, 10)


def test_partition_iid_properties_randomized():
    rng = np.random.default_rng(5)
    for _ in range(10):
        n = int(rng.integers(10, 300))
        k = int(rng.integers(1, 20))
        ds = synth_dataset(n, 2, 3, seed=int(rng.integers(1e6)))
        seed = int(rng.integers(1e6))
        shards = partition_iid(ds, k, seed)
        check_partition(shards, n)
        again = partition_iid(ds, k, seed)
        for s, t in zip(shards, again):
            assert np.array_equal(s.indices, t.indices)
        sizes = {len(s) for s in shards}
        assert max(sizes) - min(sizes) <= 1


def test_partition_iid_owner_ids():
    ds = synth_dataset(20, 2, 3, seed=1)
    shards = partition_iid(ds, 5, seed=2)
    assert [s.owner_ue for s in shards] == list(range(5))


def test_partition_noniid_label_concentration():
    ds = synth_dataset(600, 10, 4, seed=2)
    shards = partition_shards_noniid(ds, 100, 2, seed=9)
    check_partition(shards, 600)
    # 200 slices of 3 samples; each client holds 2 slices -> at most 4
    # distinct labels (each slice can straddle one label boundary)
    for s in shards:
        assert len(s) == 6
        assert len(np.unique(ds.labels[s.indices])) <= 4
    # skew exists: some client sees fewer label values than the full set
    assert min(len(np.unique(ds.labels[s.indices])) for s in shards) < 10


def test_partition_noniid_deterministic():
    ds = synth_dataset(120, 4, 3, seed=4)
    a = partition_shards_noniid(ds, 10, 3, seed=21)
    b = partition_shards_noniid(ds, 10, 3, seed=21)
    for s, t in zip(a, b):
        assert np.array_equal(s.indices, t.indices)


def test_partition_noniid_indivisible():
    ds = synth_dataset(100, 4, 3, seed=4)
    with pytest.raises(ValueError, match="equal slices"):
        partition_shards_noniid(ds, 7, 3, seed=1)


def test_partition_validation():
    ds = synth_dataset(10, 2, 3, seed=1)
    with pytest.raises(ValueError):
        partition_iid(ds, 0, seed=1)
