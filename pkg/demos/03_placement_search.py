"""Exhaustive UAV placement search over a 3-D grid for one hotspot scenario.

Run: python3 demos/03_placement_search.py
"""

import numpy as np

from uav_iab.harness import desk_config, sub_seed
from uav_iab.solver_pi import solve_pi

cfg = desk_config("A")
scenario = cfg.scenario.build(sub_seed(cfg.master_seed, 0, "scenario"), cfg.radio, cfg.channel)
grid = cfg.grid(scenario.bounds)
print(f"{scenario.n_users} UEs, {scenario.n_uavs} UAV, {len(grid)} candidate positions")

with_uav = solve_pi(scenario, grid, cfg.pi_options())
without = solve_pi(scenario.without_uavs(), grid, cfg.pi_options())

pos = with_uav.uav_positions[0].as_tuple()
print(f"chosen UAV position: ({pos[0]:.0f}, {pos[1]:.0f}, {pos[2]:.0f}) m")
print(f"serving station per UE (0 = gNB): {list(with_uav.association.serving)}")
print(f"average-model sum-rate: {with_uav.avg_sum_rate / 1e6:.1f} Mbit/s "
      f"vs {without.avg_sum_rate / 1e6:.1f} Mbit/s without the UAV")
print(f"backhaul SINR {10 * np.log10(with_uav.avg_sinr_bh).round(2)} dB")
print(f"UE SINR {10 * np.log10(with_uav.avg_sinr).round(1)} dB")
