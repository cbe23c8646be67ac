"""Zero-forcing precoding at the gNB and what each beam costs in transmit power.

Run: python3 demos/02_zero_forcing.py
"""

import numpy as np

from uav_iab.precoding import beam_cost, build_lzfbf, enforce_budget

rng = np.random.default_rng(7)
N = 8  # gNB antennas

for m in (2, 3, 4):
    H = (rng.standard_normal((m, N)) + 1j * rng.standard_normal((m, N))) / np.sqrt(2)
    V = build_lzfbf(H)
    residual = np.linalg.norm(H @ V - np.eye(m))
    print(f"{m} receivers: ||HV - I||_F = {residual:.1e}, beam costs {np.round(beam_cost(V), 3)}")

# Nearly parallel channels make zero-forcing expensive.
h = rng.standard_normal(N) + 1j * rng.standard_normal(N)
for eps in (1.0, 0.3, 0.1):
    H = np.vstack([h, h + eps * (rng.standard_normal(N) + 1j * rng.standard_normal(N))])
    print(f"perturbation {eps:.1f}: total cost {beam_cost(build_lzfbf(H)).sum():8.3f}")

# Stream powers that overshoot the budget are scaled back uniformly.
costs = np.array([0.5, 1.5, 2.0])
p = enforce_budget(np.array([10.0, 10.0, 10.0]), costs, 20.0)
print(f"\nscaled stream powers {np.round(p, 3)}; transmit power {p @ costs:.3f} W (budget 20 W)")
