"""Link budget: how altitude trades line-of-sight probability against distance.

Run: python3 demos/01_link_budget.py
"""

import numpy as np

from uav_iab.channel import atg_pathloss_db, fspl_db, los_probability, terrestrial_pathloss_db

FREQ = 2e9

print(f"free-space loss at 1 km: {fspl_db(1000.0, FREQ):.2f} dB")
print(f"terrestrial loss at 500 m (UE at 1.5 m): {terrestrial_pathloss_db(500.0, 1.5, FREQ):.2f} dB")
print()

# A UAV hovering above a point 400 m away (horizontally) from a ground UE.
horizontal = 400.0
print(" altitude  elevation  P(LOS)  air-to-ground loss")
for z in (100.0, 200.0, 300.0, 400.0, 500.0):
    d = np.hypot(horizontal, z)
    theta = np.degrees(np.arctan2(z, horizontal))
    pl = atg_pathloss_db(d, theta, FREQ)
    print(f"  {z:5.0f} m   {theta:5.1f} deg   {los_probability(theta):.3f}   {pl:7.2f} dB")

print("\nHigher altitude raises P(LOS) but also lengthens the path; the loss")
print("is minimised at an intermediate elevation for a given horizontal offset.")
