"""Monte Carlo comparison against the no-UAV baseline and a hovering-altitude sweep.

Run: python3 demos/05_experiments.py   (a few seconds)
"""

import numpy as np

from uav_iab.harness import altitude_sweep, desk_config, run_experiment

summary, _ = run_experiment(desk_config("A"))
d = summary.deltas()
uav, base = summary.arms["uav"], summary.arms["baseline"]
print("scenario A, 20 trials x 50 CSI instants")
print(f"  per-CSI sum-rate  {uav.mean_sum_rate / 1e6:7.1f} vs {base.mean_sum_rate / 1e6:7.1f} Mbit/s")
print(f"  placement model   {uav.mean_pi_objective / 1e6:7.1f} vs {base.mean_pi_objective / 1e6:7.1f} Mbit/s")
print(f"  trials with >= 1.5x placement gain: "
      f"{sum(r >= 1.5 for r in d['placement_trial_sum_rate_ratio'])}/20")

for kind in ("A", "B"):
    sweep, _ = altitude_sweep(desk_config(kind), (200.0, 500.0), baseline=False)
    low = np.array(sweep.sweep["200"].trial_pi_objective)
    high = np.array(sweep.sweep["500"].trial_pi_objective)
    print(f"scenario {kind}: mean rate at 200 m {low.mean() / 1e6:.1f}, "
          f"at 500 m {high.mean() / 1e6:.1f} Mbit/s; 200 m wins {np.sum(low >= high)}/20")
