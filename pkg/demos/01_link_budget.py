"""
Air-to-ground link budget
=========================

How fast can a UAV hovering at 100 m talk to clients on the ground?
Walk the chain: received SNR, Shannon rate, OFDMA bandwidth splitting,
and finally the airtime of one model transfer.
"""

from uavfedsim import LinkParams, a2g_rate, a2g_snr, ofdma_share
from uavfedsim.channel import downlink_rate, transmission_time, uplink_rate

# The reference link: 1 MHz of spectrum, -50 dB channel gain at 1 m,
# -110 dBm noise floor, UAV transmitting at 10 mW, clients at 100 mW.
link = LinkParams()
print(f"UAV height          : {link.uav_height_m:.0f} m")
print(f"system bandwidth    : {link.system_bandwidth_hz / 1e6:.1f} MHz")
print(f"UE / UAV tx power   : {link.ue_tx_power_w * 1e3:.0f} mW / "
      f"{link.uav_tx_power_w * 1e3:.0f} mW")

# SNR falls with the squared slant range H^2 + R^2. Directly under the
# UAV (R = 0) the uplink enjoys SNR = 1e4 (40 dB) and the weaker-powered
# downlink SNR = 1e3 (30 dB).
print("\n   R (m)   uplink SNR   downlink SNR")
for r in (0.0, 5.0, 10.0, 50.0, 100.0):
    up = a2g_snr(link.ue_tx_power_w, link, r)
    down = a2g_snr(link.uav_tx_power_w, link, r)
    print(f"  {r:6.1f}   {up:10.1f}   {down:12.1f}")

# Uploads share the band: with 10 clients selected per round, each gets
# B/10 = 100 kHz. The per-client rate scales linearly with that share.
print("\nOFDMA: 1 MHz split across k selected clients")
for k in (1, 2, 5, 10):
    share = ofdma_share(link.system_bandwidth_hz, k)
    rate = a2g_rate(share, a2g_snr(link.ue_tx_power_w, link, 0.0))
    print(f"  k={k:2d}  share={share / 1e3:7.1f} kHz  rate={rate / 1e6:.4f} Mb/s")

# One full model is 25,450 parameters x 32 bits = 814,400 bits. The
# broadcast moves it at ~10 Mb/s; each of 10 uploads crawls at ~1.3 Mb/s,
# which is why the uplink phase dominates the radio time of a round.
payload = 25450 * 32
t_down = transmission_time(payload, downlink_rate(link, 10.0))
t_up = transmission_time(payload, uplink_rate(link, 10.0, 10))
print(f"\nmodel payload       : {payload} bits")
print(f"broadcast time      : {t_down * 1e3:7.2f} ms  (full band, 10 mW)")
print(f"upload time         : {t_up * 1e3:7.2f} ms  (1/10 band, 100 mW)")
