"""Air-to-ground link budget math for a hovering UAV serving ground clients.

Pure functions over SI units (hertz, watts, meters). Decibel-scaled
quantities are kept in their configured units and linearized at the call
site, so configs stay readable and no double conversion creeps in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "LinkParams",
    "db_to_linear",
    "linear_to_db",
    "dbm_to_watts",
    "a2g_snr",
    "a2g_rate",
    "ofdma_share",
    "transmission_time",
    "uplink_rate",
    "downlink_rate",
]


def db_to_linear(x_db: float) -> float:
    """Convert a decibel ratio to a linear power ratio: 10^(x/10)."""
    if not math.isfinite(x_db):
        raise ValueError(f"decibel value must be finite, got {x_db!r}")
    return 10.0 ** (x_db / 10.0)


def linear_to_db(ratio: float) -> float:
    """Convert a linear power ratio to decibels: 10*log10(x)."""
    if not math.isfinite(ratio) or ratio <= 0.0:
        raise ValueError(f"ratio must be finite and positive, got {ratio!r}")
    return 10.0 * math.log10(ratio)


def dbm_to_watts(x_dbm: float) -> float:
    """Convert a dBm power level to watts: 10^(x/10) mW."""
    if not math.isfinite(x_dbm):
        raise ValueError(f"dBm value must be finite, got {x_dbm!r}")
    return 10.0 ** (x_dbm / 10.0) * 1e-3


@dataclass(frozen=True)
class LinkParams:
    """Channel constants for the air-ground link.

    `beta0_db` is the channel power gain at the 1 m reference distance and
    `noise_dbm` the noise power; both are stored in their decibel units.
    Bandwidth, height, and transmit powers are SI (Hz, m, W).
    """

    beta0_db: float = -50.0
    noise_dbm: float = -110.0
    system_bandwidth_hz: float = 1e6
    uav_height_m: float = 100.0
    uav_tx_power_w: float = 10e-3
    ue_tx_power_w: float = 100e-3

    def __post_init__(self) -> None:
        if not (math.isfinite(self.system_bandwidth_hz) and self.system_bandwidth_hz > 0):
            raise ValueError(f"system_bandwidth_hz must be positive, got {self.system_bandwidth_hz!r}")
        if not (math.isfinite(self.uav_height_m) and self.uav_height_m > 0):
            raise ValueError(f"uav_height_m must be positive, got {self.uav_height_m!r}")
        for name in ("uav_tx_power_w", "ue_tx_power_w"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be nonnegative, got {value!r}")
        # raises on non-finite dB inputs; results are positive by construction
        db_to_linear(self.beta0_db)
        dbm_to_watts(self.noise_dbm)

    @property
    def beta0_linear(self) -> float:
        """Reference channel gain as a linear ratio."""
        return db_to_linear(self.beta0_db)

    @property
    def noise_w(self) -> float:
        """Noise power in watts."""
        return dbm_to_watts(self.noise_dbm)


def a2g_snr(p_tx_w: float, params: LinkParams, horizontal_dist_m: float) -> float:
    """SNR of the air-ground link at a given horizontal distance.

    Free-space-like line-of-sight model: beta0 * p / (sigma^2 * (H^2 + R^2)).
    The UAV height guarantees a nonzero denominator.
    """
    if not (math.isfinite(p_tx_w) and p_tx_w >= 0):
        raise ValueError(f"transmit power must be nonnegative, got {p_tx_w!r}")
    if not (math.isfinite(horizontal_dist_m) and horizontal_dist_m >= 0):
        raise ValueError(f"horizontal distance must be nonnegative, got {horizontal_dist_m!r}")
    dist_sq = params.uav_height_m**2 + horizontal_dist_m**2
    return params.beta0_linear * p_tx_w / (params.noise_w * dist_sq)


def a2g_rate(bandwidth_hz: float, snr: float) -> float:
    """Shannon rate in bits/s: B * log2(1 + snr)."""
    if not (math.isfinite(bandwidth_hz) and bandwidth_hz > 0):
        raise ValueError(f"bandwidth must be positive, got {bandwidth_hz!r}")
    if not (math.isfinite(snr) and snr >= 0):
        raise ValueError(f"snr must be nonnegative, got {snr!r}")
    return bandwidth_hz * math.log2(1.0 + snr)


def ofdma_share(system_bandwidth_hz: float, num_selected: int) -> float:
    """Per-client bandwidth under equal OFDMA spectrum sharing."""
    if not (math.isfinite(system_bandwidth_hz) and system_bandwidth_hz > 0):
        raise ValueError(f"system_bandwidth_hz must be positive, got {system_bandwidth_hz!r}")
    if num_selected < 1:
        raise ValueError(f"num_selected must be >= 1, got {num_selected!r}")
    return system_bandwidth_hz / num_selected


def transmission_time(payload_bits: float, rate_bps: float) -> float:
    """Airtime in seconds to move a payload at a fixed rate."""
    if payload_bits < 0:
        raise ValueError(f"payload_bits must be nonnegative, got {payload_bits!r}")
    if not (math.isfinite(rate_bps) and rate_bps > 0):
        raise ValueError(f"rate_bps must be positive, got {rate_bps!r}")
    return payload_bits / rate_bps


def uplink_rate(params: LinkParams, horizontal_dist_m: float, num_selected: int) -> float:
    """UE-to-UAV rate on this client's equal OFDMA share of the spectrum."""
    share = ofdma_share(params.system_bandwidth_hz, num_selected)
    return a2g_rate(share, a2g_snr(params.ue_tx_power_w, params, horizontal_dist_m))


def downlink_rate(params: LinkParams, horizontal_dist_m: float) -> float:
    """UAV-to-UE broadcast rate at full system bandwidth and UAV power."""
    snr = a2g_snr(params.uav_tx_power_w, params, horizontal_dist_m)
    return a2g_rate(params.system_bandwidth_hz, snr)
