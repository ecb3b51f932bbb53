"""
Where a round's time and energy go
==================================

A round is broadcast, then parallel local training, then parallel
uploads on orthogonal subchannels; it ends when the slowest client
finishes. The UAV burns 100 W of propulsion power the whole time and
10 mW of radio power only while broadcasting — which is why the
dissemination energy never matters.
"""

from uavfedsim import ComputeSpec, LinkParams, PowerModel, round_timing, uav_energy
from uavfedsim.timing_energy import ClientProfile

link = LinkParams()
power = PowerModel()
payload = 25450 * 32

# Five selected clients at staggered distances and clock rates, each
# holding 600 samples of 784 bytes (the classic per-client slice of a
# 60k-sample set across 100 clients).
shard_bits = 600 * 784 * 8
clients = [
    ClientProfile(i, dist, ComputeSpec(cpu, 20.0, shard_bits))
    for i, (dist, cpu) in enumerate([
        (0.0, 2.0e9), (2.5, 1.95e9), (5.0, 1.9e9), (7.5, 1.85e9), (10.0, 1.8e9),
    ])
]

timing = round_timing(clients, link, payload, epochs=1)
print(f"broadcast (reaches the farthest client): {timing.t_down_s * 1e3:.2f} ms")
print("\n  id   dist    t_compute    t_upload     total")
for t in timing.per_client:
    dist = clients[t.ue_id].horizontal_dist_m
    print(f"  {t.ue_id:2d}  {dist:4.1f} m   {t.t_compute_s * 1e3:7.2f} ms"
          f"  {t.t_up_s * 1e3:8.2f} ms  {(t.t_compute_s + t.t_up_s) * 1e3:8.2f} ms")
print(f"\nround latency (broadcast + slowest client): {timing.t_round_s * 1e3:.2f} ms")

# Energy over 100 such rounds: propulsion x total airborne time versus
# radio x total broadcast time. Note the five orders of magnitude.
report = uav_energy([timing] * 100, power)
print(f"\nflight energy, 100 rounds       : {report.flight_j:10.2f} J")
print(f"dissemination energy, 100 rounds: {report.dissemination_j:10.6f} J")
print(f"dissemination / flight          : {report.dissemination_j / report.flight_j:.2e}")

# More local epochs linger longer in the air: compute time scales with E
# while the radio times stay fixed.
print("\n  E   t_round     flight energy/round")
for epochs in (1, 5, 20):
    t = round_timing(clients, link, payload, epochs)
    print(f" {epochs:2d}   {t.t_round_s:7.3f} s   {power.propulsion_w * t.t_round_s:9.2f} J")
