"""Link-budget math against arbitrary-precision oracles and basic properties."""

import math

import numpy as np
import pytest
from mpmath import mp, mpf

from uavfedsim.channel import (
    LinkParams,
    a2g_rate,
    a2g_snr,
    db_to_linear,
    dbm_to_watts,
    downlink_rate,
    linear_to_db,
    ofdma_share,
    transmission_time,
    uplink_rate,
)

mp.dps = 50

DEFAULTS = LinkParams()

# Frozen from a 50-digit evaluation of B*log2(1 + beta0*p/(sigma^2*(H^2+R^2)))
# with B=1e5 (uplink, 10-way split) / 1e6 (downlink), p=0.1/0.01 W,
# beta0=-50 dB, sigma^2=-110 dBm, H=100 m, R=0.
UPLINK_R0_BPS = 1328785.6641840544
DOWNLINK_R0_BPS = 9967226.258835994


def oracle_rate(bandwidth_hz, p_w, r_m, params=DEFAULTS):
    beta0 = mpf(10) ** (mpf(params.beta0_db) / 10)
    noise = mpf(10) ** (mpf(params.noise_dbm) / 10) * mpf("1e-3")
    snr = beta0 * mpf(p_w) / (noise * (mpf(params.uav_height_m) ** 2 + mpf(r_m) ** 2))
    return float(mpf(bandwidth_hz) * mp.log(1 + snr) / mp.log(2))


def test_db_to_linear():
    assert db_to_linear(0.0) == 1.0
    assert db_to_linear(10.0) == pytest.approx(10.0, rel=1e-15)
    assert db_to_linear(-50.0) == pytest.approx(1e-5, rel=1e-15)
    assert db_to_linear(3.0) == pytest.approx(1.9952623149688795, rel=1e-14)


def test_linear_to_db_roundtrip():
    for x_db in (-110.0, -50.0, 0.0, 3.0, 20.0):
        assert linear_to_db(db_to_linear(x_db)) == pytest.approx(x_db, abs=1e-12)
    with pytest.raises(ValueError):
        linear_to_db(0.0)
    with pytest.raises(ValueError):
        linear_to_db(-1.0)


def test_dbm_to_watts():
    assert dbm_to_watts(0.0) == pytest.approx(1e-3, rel=1e-15)
    assert dbm_to_watts(30.0) == pytest.approx(1.0, rel=1e-15)
    assert dbm_to_watts(-110.0) == pytest.approx(1e-14, rel=1e-15)
    assert dbm_to_watts(20.0) == pytest.approx(0.1, rel=1e-15)


def test_link_params_defaults():
    assert DEFAULTS.beta0_linear == pytest.approx(1e-5, rel=1e-15)
    assert DEFAULTS.noise_w == pytest.approx(1e-14, rel=1e-15)
    assert DEFAULTS.system_bandwidth_hz == 1e6
    assert DEFAULTS.uav_height_m == 100.0
    assert DEFAULTS.uav_tx_power_w == 10e-3
    assert DEFAULTS.ue_tx_power_w == 100e-3


def test_link_params_validation():
    with pytest.raises(ValueError):
        LinkParams(system_bandwidth_hz=0.0)
    with pytest.raises(ValueError):
        LinkParams(uav_height_m=-1.0)
    with pytest.raises(ValueError):
        LinkParams(ue_tx_power_w=-0.1)
    with pytest.raises(ValueError):
        LinkParams(beta0_db=float("nan"))


def test_snr_reference_points():
    # beta0*p/(sigma^2*H^2): uplink 1e-5*0.1/(1e-14*1e4)=1e4, downlink 1e3
    assert a2g_snr(DEFAULTS.ue_tx_power_w, DEFAULTS, 0.0) == pytest.approx(1e4, rel=1e-12)
    assert a2g_snr(DEFAULTS.uav_tx_power_w, DEFAULTS, 0.0) == pytest.approx(1e3, rel=1e-12)


def test_snr_distance_monotone():
    snrs = [a2g_snr(0.1, DEFAULTS, r) for r in (0.0, 1.0, 5.0, 10.0, 100.0)]
    assert snrs == sorted(snrs, reverse=True)
    # doubling the slant-range-squared halves the SNR
    s0 = a2g_snr(0.1, DEFAULTS, 0.0)
    s100 = a2g_snr(0.1, DEFAULTS, 100.0)
    assert s100 == pytest.approx(s0 / 2, rel=1e-12)


def test_snr_validation():
    with pytest.raises(ValueError):
        a2g_snr(-1.0, DEFAULTS, 0.0)
    with pytest.raises(ValueError):
        a2g_snr(0.1, DEFAULTS, -5.0)


def test_rate_oracle_r0():
    up = uplink_rate(DEFAULTS, 0.0, 10)
    down = downlink_rate(DEFAULTS, 0.0)
    assert up == pytest.approx(UPLINK_R0_BPS, rel=1e-12)
    assert down == pytest.approx(DOWNLINK_R0_BPS, rel=1e-12)
    assert up == pytest.approx(oracle_rate(1e5, 0.1, 0.0), rel=1e-12)
    assert down == pytest.approx(oracle_rate(1e6, 0.01, 0.0), rel=1e-12)


def test_rate_oracle_random_grid():
    rng = np.random.default_rng(42)
    for _ in range(25):
        r = float(rng.uniform(0.0, 50.0))
        p = float(rng.uniform(1e-3, 1.0))
        bw = float(rng.uniform(1e4, 2e6))
        snr = a2g_snr(p, DEFAULTS, r)
        assert a2g_rate(bw, snr) == pytest.approx(oracle_rate(bw, p, r), rel=1e-12)


def test_rate_zero_snr():
    assert a2g_rate(1e6, 0.0) == 0.0


def test_rate_bandwidth_proportional():
    snr = a2g_snr(0.1, DEFAULTS, 3.0)
    assert a2g_rate(2e6, snr) == pytest.approx(2 * a2g_rate(1e6, snr), rel=1e-15)


def test_rate_validation():
    with pytest.raises(ValueError):
        a2g_rate(0.0, 1.0)
    with pytest.raises(ValueError):
        a2g_rate(1e6, -0.5)


def test_ofdma_share():
    assert ofdma_share(1e6, 10) == 1e5
    assert ofdma_share(1e6, 1) == 1e6
    assert ofdma_share(3e6, 4) == 750e3
    with pytest.raises(ValueError):
        ofdma_share(1e6, 0)
    with pytest.raises(ValueError):
        ofdma_share(0.0, 4)


def test_ofdma_shares_sum_to_system_bandwidth():
    for k in (1, 2, 7, 10, 100):
        assert k * ofdma_share(1e6, k) == pytest.approx(1e6, rel=1e-12)


def test_transmission_time():
    assert transmission_time(814400, DOWNLINK_R0_BPS) == pytest.approx(
        0.081707786986176874, rel=1e-12
    )
    assert transmission_time(0, 1e6) == 0.0
    with pytest.raises(ValueError):
        transmission_time(100, 0.0)
    with pytest.raises(ValueError):
        transmission_time(-1, 1e6)


def test_uplink_rate_splits_bandwidth():
    # k-way split scales the per-client rate by exactly 1/k at fixed SNR
    full = uplink_rate(DEFAULTS, 5.0, 1)
    for k in (2, 5, 10):
        assert uplink_rate(DEFAULTS, 5.0, k) == pytest.approx(full / k, rel=1e-12)


def test_more_power_never_hurts():
    weak = LinkParams(ue_tx_power_w=0.05)
    assert uplink_rate(DEFAULTS, 5.0, 10) > uplink_rate(weak, 5.0, 10)


def test_rate_finite_everywhere():
    for r in (0.0, 1e-9, 1.0, 1e3, 1e6):
        assert math.isfinite(downlink_rate(DEFAULTS, r))
