"""Per-CSI-instant gNB power allocation.

With exact zero-forcing the gNB-side links decouple, so maximising
``sum log2(1 + P_m / n_m)`` subject to ``sum c_m P_m <= budget`` and
``floor_m <= P_m <= cap_m`` is a water-filling problem with a box:

    P_m = min(cap_m, max(floor_m, mu / c_m - n_m))

where the water level ``mu`` is found by bisection so that the budget binds.
Cross-tier interference (UAV access streams) is frozen at its value before
the update.

Backhaul streams are capped at their floor by default. Backhaul rate is not
part of the network sum-rate, and any power above the floor leaks into the
aerial UEs' band as gNB interference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelState
from .linkmetrics import (Association, LinkReport, PowerAllocation, instantaneous_report,
                          schedule_coresources, stream_powers)
from .precoding import GnbBeamforming, enforce_budget
from .scenario import RadioConfig

__all__ = ["InfeasibleInstanceError", "PiiInstance", "BH_POLICIES", "build_instance",
           "solve_waterfilling", "pii_objective", "apply_pii"]

_MAX_ITER = 200
_TOL = 1e-12


class InfeasibleInstanceError(ValueError):
    """The SINR floors cannot all be met within the power budget."""


@dataclass(frozen=True)
class PiiInstance:
    """One separable power-allocation problem.

    ``labels`` name each link as ``("bh", d)`` or ``("tue", u)`` (0-based).
    """

    effective_noise: np.ndarray
    beam_cost: np.ndarray
    floors: np.ndarray
    budget: float
    labels: tuple = ()
    caps: np.ndarray | None = None

    @property
    def upper(self) -> np.ndarray:
        if self.caps is None:
            return np.full(len(self.floors), np.inf)
        return np.asarray(self.caps, dtype=float)

    @property
    def floor_cost(self) -> float:
        return float(np.dot(self.floors, self.beam_cost))

    @property
    def feasible(self) -> bool:
        return self.floor_cost <= self.budget * (1 + 1e-12)


def pii_objective(powers, effective_noise) -> float:
    """Sum spectral efficiency ``sum log2(1 + P_m / n_m)``."""
    return float(np.sum(np.log2(1.0 + np.asarray(powers) / np.asarray(effective_noise))))


def solve_waterfilling(inst: PiiInstance) -> np.ndarray:
    """Optimal powers for ``inst``; see the module docstring for the rule.

    Raises
    ------
    InfeasibleInstanceError
        If the floors alone exceed the budget.
    """
    n = np.asarray(inst.effective_noise, dtype=float)
    c = np.asarray(inst.beam_cost, dtype=float)
    f = np.asarray(inst.floors, dtype=float)
    if n.size == 0:
        return np.zeros(0)
    if np.any(c <= 0) or np.any(n <= 0):
        raise ValueError("beam costs and effective noise must be positive")
    cap = inst.upper
    if np.any(cap < f):
        raise ValueError("caps must not be below floors")
    if not inst.feasible:
        raise InfeasibleInstanceError(
            f"floors need {inst.floor_cost:.6g} W but the budget is {inst.budget:.6g} W")
    if np.all(np.isfinite(cap)) and float(np.dot(c, cap)) <= inst.budget:
        return cap.copy()

    def level(mu):
        return np.minimum(cap, np.maximum(f, mu / c - n))

    def spend(mu):
        return float(np.dot(c, level(mu)))

    lo = 0.0
    hi = float(np.max(c * (n + f))) + inst.budget
    for _ in range(_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if spend(mid) > inst.budget:
            hi = mid
        else:
            lo = mid
        if abs(spend(lo) - inst.budget) <= _TOL * inst.budget:
            break

    # Exact water level for the active set found by bisection.
    mu = lo
    p = level(mu)

    def free(m):
        w = m / c - n
        return (w > f) & (w < cap)

    active = free(mu)
    if np.any(active):
        rest = inst.budget - float(np.dot(c[~active], p[~active]))
        mu_exact = (rest + float(np.dot(c[active], n[active]))) / np.count_nonzero(active)
        if np.array_equal(free(mu_exact), active):
            p = level(mu_exact)
    return p


def _useful_gain(h, sb, col):
    return abs(h @ sb.beams[:, col]) ** 2


BH_POLICIES = ("floor", "waterfill")


def build_instance(channels: ChannelState, bf: GnbBeamforming, assoc: Association,
                   powers: PowerAllocation, radio: RadioConfig,
                   bh_policy: str = "floor") -> PiiInstance:
    """Freeze interference at ``powers`` and factor each link's own power out of its SINR.

    Backhaul links use the backhaul threshold; terrestrial UEs use the UE
    threshold. Effective noise is interference-plus-noise divided by the
    link's useful gain (unity under exact zero-forcing).

    Parameters
    ----------
    bh_policy : {"floor", "waterfill"}
        ``"floor"`` caps each backhaul stream at its floor; ``"waterfill"``
        lets backhaul streams compete for the budget like any other link.
    """
    if bh_policy not in BH_POLICIES:
        raise ValueError(f"bh_policy must be one of {BH_POLICIES}")
    noise = radio.noise_power
    bh, tue = stream_powers(bf, assoc, powers)
    n_sub = bf.n_subbands
    sched = schedule_coresources(assoc)
    access = channels.access_gain()
    uav_gain = channels.uav_uav_gain()

    eff, cost, floors, labels = [], [], [], []
    for d in assoc.active_uavs:
        h = channels.h_gnb_to_uav[d]
        gain = 0.0
        leak = 0.0
        for sb in bf.subbands:
            gain += _useful_gain(h, sb, sb.column_of_uav(d)) / n_sub
            amp = np.abs(h @ sb.beams) ** 2
            leak += sum(bh[j] / n_sub * amp[col] for col, j in enumerate(sb.uavs) if j != d)
            if sb.tue is not None:
                leak += tue[sb.tue] * amp[sb.tue_column]
        cross = sum(uav_gain[j, d] * sum(powers.ue_power[i] for i in assoc.ues_of(j + 1))
                    for j in assoc.active_uavs if j != d)
        n_eff = (leak + cross + noise) / gain
        eff.append(n_eff)
        cost.append(bf.bh_cost(d))
        floors.append(radio.sinr_threshold_bh * n_eff)
        labels.append(("bh", d))
    for u in assoc.tues:
        h = channels.h_gnb_to_ue[u]
        sb = bf.subband_of_tue(u)
        amp = np.abs(h @ sb.beams) ** 2
        leak = sum(bh[j] / n_sub * amp[col] for col, j in enumerate(sb.uavs))
        cross = sum(access[s - 1, u] * powers.ue_power[i] for s, i in sched[u].items())
        n_eff = (leak + cross + noise) / amp[sb.tue_column]
        eff.append(n_eff)
        cost.append(bf.tue_cost(u))
        floors.append(radio.sinr_threshold_ue * n_eff)
        labels.append(("tue", u))
    floors = np.array(floors)
    caps = np.full(len(floors), np.inf)
    if bh_policy == "floor":
        is_bh = np.array([kind == "bh" for kind, _ in labels], dtype=bool)
        caps[is_bh] = floors[is_bh]
    return PiiInstance(np.array(eff), np.array(cost), floors,
                       float(radio.gnb_max_power), tuple(labels), caps)


def apply_pii(channels: ChannelState, bf: GnbBeamforming, assoc: Association,
              powers: PowerAllocation, inst: PiiInstance, solved,
              radio: RadioConfig) -> tuple[PowerAllocation, LinkReport]:
    """Install solved stream powers (budget re-enforced) and re-evaluate every link."""
    p = enforce_budget(np.asarray(solved, dtype=float), inst.beam_cost, inst.budget)
    bh = np.zeros(assoc.n_uavs)
    tue = np.zeros(assoc.n_users)
    for (kind, idx), val in zip(inst.labels, p):
        (bh if kind == "bh" else tue)[idx] = val
    updated = powers.with_streams(bh, tue)
    return updated, instantaneous_report(channels, assoc, updated, bf, radio)
