"""
Link budgets for the two tiers
==============================

Walks through the received power a ground user sees from the stratospheric
platform and from a small cell, and what that means for SINR once both
tiers share a carrier.
"""

# %%
# HAPS link: over a 500 m x 500 m area the platform at 20 km is almost
# straight overhead, so the elevation angle barely moves.
import numpy as np

from haps_cellswitch import propagation as prop
from haps_cellswitch.geometry import Position, elevation_angle, slant_distance
from haps_cellswitch.radio import NoiseModel, data_rate, noise_power

haps = Position(250.0, 250.0, 20_000.0)
for x, y in [(250, 250), (125, 125), (0, 0)]:
    theta = elevation_angle(Position(x, y, 1.5), haps)
    print(f"user at ({x:3d},{y:3d}): elevation {theta:6.3f} deg, slant range {slant_distance(theta):8.1f} m, "
          f"P(LoS) urban {prop.los_probability_ntn(theta):.3f}")

# %%
# Path loss at zenith: free space, scintillation and, under NLoS, clutter.
for los in (True, False):
    pl = prop.path_loss_ntn(90.0, 20_000.0, prop.LinkCondition(los, 0.0), 2.5)
    rx = prop.received_power(prop.HAPS_RF, pl)
    print(f"HAPS {'LoS ' if los else 'NLoS'}: PL {pl:6.2f} dB -> P_RX {rx:6.2f} dBm")

# %%
# Small-cell link: UMi street canyon from a 10 m mast.
d3 = np.array([10.0, 50.0, 100.0, 200.0, 350.0])
d2 = np.sqrt(d3**2 - 8.5**2)
for los in (True, False):
    pl = prop.path_loss_tn(d2, d3, prop.LinkCondition(np.full(d3.shape, los), 0.0), 2.5)
    rx = prop.received_power(prop.SC_RF, pl)
    print(f"SC {'LoS ' if los else 'NLoS'}:", "  ".join(f"{d:.0f}m {p:6.1f} dBm" for d, p in zip(d3, rx)))

# %%
# Interference-free HAPS service gives a very high SNR over the 200 kHz
# per-user channel; a small cell 100 m away (LoS) drags that down sharply.
n = noise_power(NoiseModel())
haps_rx = prop.received_power(prop.HAPS_RF, prop.path_loss_ntn(90.0, 20_000.0, prop.LinkCondition(True, 0.0), 2.5))
sc_rx = prop.received_power(prop.SC_RF, prop.path_loss_tn(99.64, 100.0, prop.LinkCondition(True, 0.0), 2.5))
snr = 10 ** ((haps_rx - n) / 10)
sinr = 10 ** (haps_rx / 10) / (10 ** (n / 10) + 10 ** (sc_rx / 10))
print(f"noise {n:.2f} dBm; SNR {10*np.log10(snr):.1f} dB -> {data_rate(snr, 200e3)/1e6:.2f} Mbit/s; "
      f"with one SC interferer {10*np.log10(sinr):.1f} dB -> {data_rate(sinr, 200e3)/1e6:.2f} Mbit/s")
