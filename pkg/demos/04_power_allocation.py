"""Water-filling with SINR floors, checked against a brute-force search.

Run: python3 demos/04_power_allocation.py
"""

import itertools

import numpy as np

from uav_iab.solver_pii import PiiInstance, pii_objective, solve_waterfilling

noise = np.array([0.2, 1.0, 1.5])
cost = np.array([1.0, 0.8, 1.2])
floors = np.array([0.0, 0.5, 0.5])
budget = 10.0

inst = PiiInstance(noise, cost, floors, budget)
p = solve_waterfilling(inst)
print(f"water-filling powers {np.round(p, 4)}, spend {p @ cost:.4f} / {budget}")
print(f"objective {pii_objective(p, noise):.5f} bit/s/Hz")

# Brute force over a 0.05 W lattice on the first two links; the third takes the rest.
best = -np.inf
axis = np.arange(0.0, budget, 0.05)
for a, b in itertools.product(axis, axis):
    rest = (budget - cost[0] * a - cost[1] * b) / cost[2]
    q = np.array([a, b, rest])
    if np.all(q >= floors):
        best = max(best, pii_objective(q, noise))
print(f"lattice search best {best:.5f} bit/s/Hz")

# Capping a link at its floor frees budget for the others.
capped = PiiInstance(noise, cost, floors, budget, caps=np.array([np.inf, np.inf, 0.5]))
print(f"with the third link capped at its floor: {np.round(solve_waterfilling(capped), 4)}")
