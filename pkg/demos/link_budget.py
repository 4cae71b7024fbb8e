"""
Antennas and the 60 GHz link budget
===================================

Builds the two beam patterns used throughout, checks they radiate the same
total power as an isotropic antenna, then walks one 5 m link from transmit
power to Shannon rate.
"""

import math

import numpy as np

from nrucoex.access import QUASI_OMNI_PATTERN, TX_PATTERN
from nrucoex.radio import OMNI, ChannelParams, Endpoint, gain, make_pattern, noise_power_dbm, pathloss_db, rx_power_dbm
from nrucoex.regulatory import lbr_overhead
from nrucoex.metrics import rate_bps

# a cone of constant gain plus a constant floor; the floor is whatever is
# left once the main lobe has taken its share of 4*pi
for p, label in [(TX_PATTERN, "beam 10 dB / 30 deg"), (QUASI_OMNI_PATTERN, "quasi-omni 7 dB / 90 deg")]:
    print(f"{label:26s} side gain {p.side_gain:.4f} ({p.side_gain_db:+.2f} dB)")

# energy check on a grid of off-axis angles
theta = np.linspace(0, np.pi, 200_001)
g = gain(TX_PATTERN, 0.0, theta)
print("integral of the beam over the sphere / 4pi:",
      round(float(np.trapezoid(g * np.sin(theta), theta) * 2 * np.pi / (4 * np.pi)), 4))

# too much gain in too wide a beam is impossible
try:
    make_pattern(12.0, 120.0)
except ValueError as e:
    print("rejected:", e)

ch = ChannelParams()
print()
print(f"free-space loss at 1 m: {pathloss_db(ch, 1.0):.2f} dB")
print(f"loss at 5 m:            {pathloss_db(ch, 5.0):.2f} dB")
print(f"noise floor over 1 GHz: {noise_power_dbm(ch):.1f} dBm")

# gNB at the origin beaming at its UE 5 m away
tx = Endpoint((0.0, 0.0), TX_PATTERN, 0.0)
for label, pattern in [("omni UE", OMNI), ("quasi-omni UE", QUASI_OMNI_PATTERN)]:
    rx = Endpoint((5.0, 0.0), pattern, math.pi)
    s = rx_power_dbm(ch, tx, rx)
    snr = s - noise_power_dbm(ch)
    print(f"{label:14s} S = {s:6.2f} dBm  SNR = {snr:5.2f} dB  rate = {rate_bps(snr, ch) / 1e9:.3f} Gbps")

# LBR spends one slot of the 9 ms channel occupancy on the RTS/CTS exchange
print()
for scs in (15, 30, 60, 120, 240):
    print(f"SCS {scs:3d} kHz: handshake takes {lbr_overhead(scs):.2%} of the occupancy time")
