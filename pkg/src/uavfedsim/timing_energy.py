"""Per-round wall-clock latency and UAV energy accounting.

A round is: broadcast the global model to the selected clients, let them
train locally in parallel, then collect their uploads on orthogonal OFDMA
subchannels. The round ends when the slowest client finishes uploading.
The UAV pays propulsion power for the whole round and transmit power only
while broadcasting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .channel import LinkParams, downlink_rate, transmission_time, uplink_rate

__all__ = [
    "PowerModel",
    "ComputeSpec",
    "ClientProfile",
    "ClientTiming",
    "RoundTiming",
    "EnergyReport",
    "model_payload_bits",
    "compute_time",
    "round_timing",
    "uav_energy",
]


@dataclass(frozen=True)
class PowerModel:
    """UAV power draws: hovering propulsion and radio transmission, watts."""

    propulsion_w: float = 100.0
    uav_tx_w: float = 10e-3

    def __post_init__(self) -> None:
        if self.propulsion_w < 0 or self.uav_tx_w < 0:
            raise ValueError(
                f"power draws must be >= 0, got propulsion {self.propulsion_w!r}, "
                f"tx {self.uav_tx_w!r}"
            )


@dataclass(frozen=True)
class ComputeSpec:
    """One client's processing profile.

    cpu_hz is the clock rate, cycles_per_bit the work per bit of local
    data, and shard_bits the size of the local dataset in bits.
    """

    cpu_hz: float
    cycles_per_bit: float
    shard_bits: int

    def __post_init__(self) -> None:
        if not self.cpu_hz > 0:
            raise ValueError(f"cpu_hz must be > 0, got {self.cpu_hz!r}")
        if not self.cycles_per_bit > 0:
            raise ValueError(f"cycles_per_bit must be > 0, got {self.cycles_per_bit!r}")
        if self.shard_bits < 0:
            raise ValueError(f"shard_bits must be >= 0, got {self.shard_bits!r}")


@dataclass(frozen=True)
class ClientProfile:
    """A selected client as the timing model sees it: id, distance, compute."""

    ue_id: int
    horizontal_dist_m: float
    compute: ComputeSpec


class ClientTiming(NamedTuple):
    """Per-client round components, seconds."""

    ue_id: int
    t_compute_s: float
    t_up_s: float


@dataclass(frozen=True)
class RoundTiming:
    """Latency breakdown of one round.

    Invariant: t_round_s = t_down_s + max over clients of
    (t_compute_s + t_up_s), every component nonnegative.
    """

    t_down_s: float
    t_compute_max_s: float
    t_up_max_s: float
    t_round_s: float
    per_client: tuple[ClientTiming, ...]

    def __post_init__(self) -> None:
        parts = (self.t_down_s, self.t_compute_max_s, self.t_up_max_s, self.t_round_s)
        if any(p < 0 or not math.isfinite(p) for p in parts):
            raise ValueError(f"timing components must be finite and >= 0, got {parts!r}")


class EnergyReport(NamedTuple):
    """UAV energy split over a run, joules."""

    flight_j: float
    dissemination_j: float
    total_j: float


def model_payload_bits(param_count: int, bits_per_param: int) -> int:
    """Wire size of one model transfer."""
    if param_count < 1 or bits_per_param < 1:
        raise ValueError(
            f"param_count and bits_per_param must be >= 1, got "
            f"{param_count!r} and {bits_per_param!r}"
        )
    return param_count * bits_per_param


def compute_time(spec: ComputeSpec, epochs: int) -> float:
    """Seconds a client spends training: epochs x cycles_per_bit x bits / clock."""
    if epochs < 1:
        raise ValueError(f"epochs must be >= 1, got {epochs!r}")
    return epochs * spec.cycles_per_bit * spec.shard_bits / spec.cpu_hz


def round_timing(
    selected: Sequence[ClientProfile],
    link: LinkParams,
    payload_bits: int,
    epochs: int,
) -> RoundTiming:
    """Latency of one round for the given set of selected clients.

    The broadcast must reach every selected client, so the downlink phase
    lasts payload/min(downlink rate) over the set. Uploads share the system
    bandwidth equally, one orthogonal subchannel per client, and proceed in
    parallel with per-client rates set by each client's own distance.

    Args:
        selected: the round's participants with distances and compute specs.
        link: radio parameters shared by all links.
        payload_bits: size of one model transfer (same up and down).
        epochs: local passes each client makes over its shard.

    Returns:
        RoundTiming with per-client detail in `selected` order.
    """
    if not selected:
        raise ValueError("no clients selected")
    if payload_bits < 0:
        raise ValueError(f"payload_bits must be >= 0, got {payload_bits!r}")
    k = len(selected)
    if payload_bits:
        down_rate = min(downlink_rate(link, c.horizontal_dist_m) for c in selected)
        t_down = transmission_time(payload_bits, down_rate)
    else:
        t_down = 0.0
    per_client = []
    for c in selected:
        t_compute = compute_time(c.compute, epochs)
        if payload_bits:
            t_up = transmission_time(payload_bits, uplink_rate(link, c.horizontal_dist_m, k))
        else:
            t_up = 0.0
        per_client.append(ClientTiming(c.ue_id, t_compute, t_up))
    slowest = max(t.t_compute_s + t.t_up_s for t in per_client)
    return RoundTiming(
        t_down_s=t_down,
        t_compute_max_s=max(t.t_compute_s for t in per_client),
        t_up_max_s=max(t.t_up_s for t in per_client),
        t_round_s=t_down + slowest,
        per_client=tuple(per_client),
    )


def uav_energy(timings: Sequence[RoundTiming], power: PowerModel) -> EnergyReport:
    """Run-level UAV energy: propulsion over all rounds, tx over broadcasts."""
    flight = power.propulsion_w * sum(t.t_round_s for t in timings)
    dissemination = power.uav_tx_w * sum(t.t_down_s for t in timings)
    return EnergyReport(flight, dissemination, flight + dissemination)
