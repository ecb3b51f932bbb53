"""Scenario assembly, the federated round loop, and telemetry emission.

One round is: sample clients, broadcast the global model, let every
selected client train locally, collect uploads, average, evaluate, and
charge the UAV for the elapsed time. Telemetry goes out as CSV (one row
per round, fixed schema) or JSON (the full run result).
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .config import ScenarioConfig
from .fl_core import (
    Dataset,
    ModelState,
    Shard,
    TrainingPolicy,
    evaluate,
    fedavg_aggregate,
    init_model,
    load_mnist_idx,
    local_update,
    param_count,
    partition_iid,
    partition_shards_noniid,
    select_clients,
    synth_dataset,
)
from .rng import (
    client_stream,
    data_seed,
    geometry_stream,
    init_stream,
    partition_seed,
    selection_stream,
)
from .timing_energy import (
    ClientProfile,
    ComputeSpec,
    RoundTiming,
    model_payload_bits,
    round_timing,
)

__all__ = [
    "UserEquipment",
    "Scenario",
    "RoundRecord",
    "RunResult",
    "CSV_HEADER",
    "build_scenario",
    "run",
    "run_scenario",
    "to_csv_text",
    "to_json_text",
    "emit",
]

CSV_HEADER = (
    "round,selected_ids,t_down_s,t_round_s,"
    "flight_j_cum,dissem_j_cum,total_j_cum,test_accuracy,test_loss"
)


@dataclass(frozen=True)
class UserEquipment:
    """One ground client: where it sits, how fast it computes, what it holds."""

    ue_id: int
    radius_m: float
    cpu_hz: float
    shard: Shard
    shard_bits: int


@dataclass
class Scenario:
    """Everything a run needs, fully materialized and seeded."""

    config: ScenarioConfig
    ues: list[UserEquipment]
    train: Dataset
    test: Dataset
    model: ModelState
    payload_bits: int
    policy: TrainingPolicy


@dataclass(frozen=True)
class RoundRecord:
    """Telemetry for one completed round."""

    round_index: int
    selected_ids: tuple[int, ...]
    timing: RoundTiming
    cumulative_flight_j: float
    cumulative_dissemination_j: float
    cumulative_total_j: float
    test_accuracy: float
    test_loss: float


@dataclass
class RunResult:
    """Outcome of a full run: config echo, per-round records, model digest."""

    config: dict[str, dict[str, Any]]
    records: list[RoundRecord]
    model_digest: str
    wall_seconds_host: float = field(compare=False, default=0.0)


def _load_data(config: ScenarioConfig) -> tuple[Dataset, Dataset]:
    if config.data_source == "mnist":
        train = load_mnist_idx(config.mnist_paths[0], config.mnist_paths[1])
        test = load_mnist_idx(config.mnist_paths[2], config.mnist_paths[3])
        return train, test
    total = config.num_samples + config.test_samples
    full = synth_dataset(total, config.num_classes, config.feature_dim, data_seed(config.seed))
    train = full.subset(np.arange(config.num_samples), name="synthetic-train")
    test = full.subset(np.arange(config.num_samples, total), name="synthetic-test")
    return train, test


def build_scenario(config: ScenarioConfig) -> Scenario:
    """Materialize a scenario: data, shards, client geometry, initial model.

    Deterministic given config.seed; every random draw comes from its own
    named stream, so changing one aspect (say, the partition) cannot shift
    any other.
    """
    train, test = _load_data(config)

    geom = geometry_stream(config.seed)
    radii = geom.uniform(config.radius_min_m, config.radius_max_m, size=config.num_ues)
    cpus = geom.uniform(config.cpu_hz_min, config.cpu_hz_max, size=config.num_ues)

    if config.partition == "shards":
        shards = partition_shards_noniid(
            train, config.num_ues, config.shards_per_client, partition_seed(config.seed)
        )
    else:
        shards = partition_iid(train, config.num_ues, partition_seed(config.seed))

    bits_per_sample = train.feature_dim * 8
    ues = [
        UserEquipment(
            ue_id=i,
            radius_m=float(radii[i]),
            cpu_hz=float(cpus[i]),
            shard=shards[i],
            shard_bits=len(shards[i]) * bits_per_sample,
        )
        for i in range(config.num_ues)
    ]

    model = init_model(config.layer_dims, init_stream(config.seed))
    payload = model_payload_bits(param_count(config.layer_dims), config.bits_per_param)
    policy = TrainingPolicy(
        client_fraction=config.alpha,
        local_epochs=config.epochs,
        batch_size=config.batch_size,
        learning_rate=config.learning_rate,
        max_rounds=config.max_rounds,
    )
    return Scenario(
        config=config,
        ues=ues,
        train=train,
        test=test,
        model=model,
        payload_bits=payload,
        policy=policy,
    )


def run(
    scenario: Scenario,
    policy: TrainingPolicy | None = None,
    workers: int = 1,
) -> RunResult:
    """Execute the round loop until max_rounds or the accuracy target.

    Local updates for distinct clients may run on `workers` threads; each
    client draws from its own RNG stream and results are folded in sorted
    client-id order, so the outcome is bitwise identical to sequential
    execution.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers!r}")
    started = time.perf_counter()
    cfg = scenario.config
    policy = scenario.policy if policy is None else policy
    model = scenario.model.copy()
    train = scenario.train

    records: list[RoundRecord] = []
    sum_t_round = 0.0
    sum_t_down = 0.0

    for round_index in range(1, policy.max_rounds + 1):
        selected = select_clients(
            cfg.num_ues, policy.client_fraction, selection_stream(cfg.seed, round_index)
        )
        profiles = [
            ClientProfile(
                ue_id=ue.ue_id,
                horizontal_dist_m=ue.radius_m,
                compute=ComputeSpec(ue.cpu_hz, cfg.cycles_per_bit, ue.shard_bits),
            )
            for ue in (scenario.ues[i] for i in selected)
        ]
        timing = round_timing(profiles, cfg.link, scenario.payload_bits, policy.local_epochs)

        def train_one(ue_id: int, global_model: ModelState = model) -> ModelState:
            shard = scenario.ues[ue_id].shard
            return local_update(
                global_model,
                train.features[shard.indices],
                train.labels[shard.indices],
                policy,
                client_stream(cfg.seed, round_index, ue_id),
            )

        if workers == 1:
            updates = [train_one(i) for i in selected]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                updates = list(pool.map(train_one, selected))
        weights = [float(len(scenario.ues[i].shard)) for i in selected]
        model = fedavg_aggregate(updates, weights)

        test_accuracy, test_loss = evaluate(model, scenario.test)

        sum_t_round += timing.t_round_s
        sum_t_down += timing.t_down_s
        flight = cfg.power.propulsion_w * sum_t_round
        dissemination = cfg.power.uav_tx_w * sum_t_down
        records.append(
            RoundRecord(
                round_index=round_index,
                selected_ids=tuple(selected),
                timing=timing,
                cumulative_flight_j=flight,
                cumulative_dissemination_j=dissemination,
                cumulative_total_j=flight + dissemination,
                test_accuracy=test_accuracy,
                test_loss=test_loss,
            )
        )
        if cfg.target_accuracy is not None and test_accuracy >= cfg.target_accuracy:
            break

    digest = hashlib.sha256(model.params.tobytes()).hexdigest()
    return RunResult(
        config=cfg.mapping,
        records=records,
        model_digest=digest,
        wall_seconds_host=time.perf_counter() - started,
    )


def run_scenario(config: ScenarioConfig, workers: int = 1) -> RunResult:
    """Build and run in one call."""
    return run(build_scenario(config), workers=workers)


def _f17(x: float) -> str:
    """Shortest-faithful decimal: 17 significant digits round-trip float64."""
    return format(float(x), ".17g")


def to_csv_text(result: RunResult) -> str:
    """Render the fixed one-row-per-round CSV schema."""
    lines = [CSV_HEADER]
    for r in result.records:
        lines.append(
            ",".join(
                (
                    str(r.round_index),
                    ";".join(str(i) for i in r.selected_ids),
                    _f17(r.timing.t_down_s),
                    _f17(r.timing.t_round_s),
                    _f17(r.cumulative_flight_j),
                    _f17(r.cumulative_dissemination_j),
                    _f17(r.cumulative_total_j),
                    _f17(r.test_accuracy),
                    _f17(r.test_loss),
                )
            )
        )
    return "\n".join(lines) + "\n"


def _json_fragment(value: Any, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _f17(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, Mapping):
        if not value:
            return "{}"
        items = (
            f"{inner}{json.dumps(str(k))}: {_json_fragment(v, indent + 1)}"
            for k, v in value.items()
        )
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        if not len(value):
            return "[]"
        items = (f"{inner}{_json_fragment(v, indent + 1)}" for v in value)
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def to_json_text(result: RunResult) -> str:
    """Render the full run result, floats at 17 significant digits."""
    payload = {
        "config": result.config,
        "records": [
            {
                "round_index": r.round_index,
                "selected_ids": list(r.selected_ids),
                "timing": {
                    "t_down_s": r.timing.t_down_s,
                    "t_compute_max_s": r.timing.t_compute_max_s,
                    "t_up_max_s": r.timing.t_up_max_s,
                    "t_round_s": r.timing.t_round_s,
                    "per_client": [
                        {"ue_id": t.ue_id, "t_compute_s": t.t_compute_s, "t_up_s": t.t_up_s}
                        for t in r.timing.per_client
                    ],
                },
                "cumulative_flight_j": r.cumulative_flight_j,
                "cumulative_dissemination_j": r.cumulative_dissemination_j,
                "cumulative_total_j": r.cumulative_total_j,
                "test_accuracy": r.test_accuracy,
                "test_loss": r.test_loss,
            }
            for r in result.records
        ],
        "model_digest": result.model_digest,
        "wall_seconds_host": result.wall_seconds_host,
    }
    return _json_fragment(payload, 0) + "\n"


def emit(result: RunResult, fmt: str, path: str | Path) -> Path:
    """Write the run result to disk atomically.

    The file appears complete or not at all: content goes to a temp file in
    the destination directory first and is renamed into place.

    Args:
        result: the run to serialize.
        fmt: "csv" or "json".
        path: destination file.

    Returns:
        The destination path.

    Raises:
        ValueError: unknown format.
        OSError: any I/O failure, with the destination path in the message.
    """
    if fmt == "csv":
        text = to_csv_text(result)
    elif fmt == "json":
        text = to_json_text(result)
    else:
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    target = Path(path)
    try:
        fd, tmp_name = tempfile.mkstemp(
            prefix=target.name + ".", suffix=".tmp", dir=target.parent
        )
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
                f.write(text)
            os.replace(tmp_name, target)
        except BaseException:
            os.unlink(tmp_name)
            raise
    except OSError as exc:
        raise OSError(f"cannot write {target}: {exc}") from exc
    return target
