"""UAV drone base stations in an in-band integrated access and backhaul network.

Link budget, zero-forcing backhaul precoding, exhaustive UAV placement and
per-CSI-instant power allocation for a single gNB with UAV relays.
"""

__version__ = "0.1.0"
