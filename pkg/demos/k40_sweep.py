"""
Dense deployment at K = 40
==========================

Runs every access scheme on 40 links in a 25 m square, once with omni UEs
and once with quasi-omni UEs, and prints the numbers behind the rate and
access-count panels. Use more drops (the CLI default is 1000) for smooth
curves; 200 keeps this under a minute.
"""

import sys
import time

from nrucoex.access import ALL_STRATEGIES, ReceptionMode
from nrucoex.experiment import ExperimentConfig, simulate_cells
from nrucoex.metrics import aggregate

drops = int(sys.argv[1]) if len(sys.argv) > 1 else 200
cfg = ExperimentConfig(k_values=(40,), receptions=tuple(ReceptionMode), n_drops=drops)

t0 = time.perf_counter()
cells = simulate_cells(cfg)
print(f"{len(cells)} cells x {drops} drops in {time.perf_counter() - t0:.1f} s\n")

for mode in ReceptionMode:
    print(f"UE reception: {mode.value}")
    print(f"  {'scheme':14s} {'sum Gbps':>9s} {'mean Gbps':>10s} {'NR-U on':>8s} {'WiGig on':>9s}"
          f" {'NR-U Gbps':>10s} {'WiGig Gbps':>11s}")
    for s in ALL_STRATEGIES:
        a = aggregate([m for _, m in cells[(40, s, mode)]])
        print(f"  {s.name:14s} {a.sum_rate.mean / 1e9:9.2f} {a.mean_rate_accessed.mean / 1e9:10.3f}"
              f" {a.nru_access_count.mean:8.2f} {a.wigig_access_count.mean:9.2f}"
              f" {a.nru_mean_rate.mean / 1e9:10.3f} {a.wigig_mean_rate.mean / 1e9:11.3f}")
    print()

# no-LBT packs in every gNB, so its links crowd each other: the highest
# access count but the lowest per-link rate; LBR trades a little access for
# links that actually deliver
