"""Federated learning engine: data handling, a small MLP, and FedAvg."""

from .datasets import (
    Dataset,
    IdxFormatError,
    Shard,
    load_mnist_idx,
    partition_iid,
    partition_shards_noniid,
    synth_dataset,
)
from .federated import (
    TrainingPolicy,
    evaluate,
    fedavg_aggregate,
    local_update,
    num_selected,
    select_clients,
)
from .model import (
    ModelState,
    accuracy,
    forward,
    gradient,
    init_model,
    loss,
    pack_params,
    param_count,
    predict,
    unpack_params,
)

__all__ = [
    "Dataset",
    "IdxFormatError",
    "Shard",
    "load_mnist_idx",
    "partition_iid",
    "partition_shards_noniid",
    "synth_dataset",
    "TrainingPolicy",
    "evaluate",
    "fedavg_aggregate",
    "local_update",
    "num_selected",
    "select_clients",
    "ModelState",
    "accuracy",
    "forward",
    "gradient",
    "init_model",
    "loss",
    "pack_params",
    "param_count",
    "predict",
    "unpack_params",
]
