"""Deterministic simulator of federated learning hosted by a hovering UAV.

A UAV parameter server hangs at fixed altitude over a disk of ground
clients, broadcasts a global model, collects locally trained updates over
OFDMA uplinks, and averages them. The package models the air-ground link
budget, per-round latency, UAV flight and dissemination energy, and the
training curve itself, all reproducible bit-for-bit from one seed.
"""

from .channel import LinkParams, a2g_rate, a2g_snr, dbm_to_watts, db_to_linear, ofdma_share
from .config import ConfigError, ScenarioConfig, load_config
from .fl_core import (
    Dataset,
    ModelState,
    TrainingPolicy,
    evaluate,
    fedavg_aggregate,
    init_model,
    load_mnist_idx,
    local_update,
    partition_iid,
    partition_shards_noniid,
    select_clients,
    synth_dataset,
)
from .orchestrator import (
    RoundRecord,
    RunResult,
    Scenario,
    build_scenario,
    emit,
    run,
    run_scenario,
)
from .timing_energy import (
    ComputeSpec,
    PowerModel,
    RoundTiming,
    compute_time,
    model_payload_bits,
    round_timing,
    uav_energy,
)

__version__ = "0.1.0"

__all__ = [
    "LinkParams",
    "a2g_rate",
    "a2g_snr",
    "db_to_linear",
    "dbm_to_watts",
    "ofdma_share",
    "ConfigError",
    "ScenarioConfig",
    "load_config",
    "Dataset",
    "ModelState",
    "TrainingPolicy",
    "evaluate",
    "fedavg_aggregate",
    "init_model",
    "load_mnist_idx",
    "local_update",
    "partition_iid",
    "partition_shards_noniid",
    "select_clients",
    "synth_dataset",
    "RoundRecord",
    "RunResult",
    "Scenario",
    "build_scenario",
    "emit",
    "run",
    "run_scenario",
    "ComputeSpec",
    "PowerModel",
    "RoundTiming",
    "compute_time",
    "model_payload_bits",
    "round_timing",
    "uav_energy",
    "__version__",
]
