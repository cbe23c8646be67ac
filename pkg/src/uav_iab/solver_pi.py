"""Exhaustive search over UAV hovering positions (large-scale timescale).

For each candidate set of UAV positions on a 3D grid the solver associates
UEs by strongest average received power, splits each station's power evenly
over its UEs, gives every active backhaul link the smallest power meeting its
SINR threshold, checks the average-SINR and power constraints, and scores
the candidate by average sum-rate. The best feasible candidate wins; ties go
to the lexicographically smallest position tuple, so the result does not
depend on evaluation order.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .channel import LargeScaleGains, atg_gain, large_scale_gains, terrestrial_gain
from .linkmetrics import GNB, Association, LinkReport, PowerAllocation, average_report
from .scenario import AltitudeBounds, Position3D, Scenario
from .units import linear_to_db

__all__ = [
    "CandidateBudgetError", "PlacementGrid", "PiOptions", "Solution",
    "enumerate_grid", "associate", "allocate_powers", "feasible", "solve_pi",
]

_SINR_RTOL = 1e-9


class CandidateBudgetError(RuntimeError):
    def __init__(self, count: int, budget: int):
        super().__init__(f"exhaustive search needs {count} evaluations, budget is {budget}")
        self.count = count
        self.budget = budget


def _axis(lo: float, hi: float, step: float) -> tuple[float, ...]:
    if step <= 0:
        raise ValueError("grid resolution must be > 0")
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    n = math.ceil((hi - lo) / step + 1 - 1e-9)
    return tuple(min(lo + i * step, hi) for i in range(n))


@dataclass(frozen=True)
class PlacementGrid:
    xs: tuple[float, ...]
    ys: tuple[float, ...]
    zs: tuple[float, ...]

    @classmethod
    def from_bounds(cls, bounds: AltitudeBounds, resolution, z_levels=None) -> "PlacementGrid":
        """Inclusive samples per axis; ``z_levels`` overrides the z axis."""
        rx, ry, rz = (resolution,) * 3 if np.isscalar(resolution) else resolution
        zs = tuple(float(z) for z in z_levels) if z_levels is not None else _axis(*bounds.z, rz)
        for z in zs:
            if not bounds.z[0] - 1e-9 <= z <= bounds.z[1] + 1e-9:
                raise ValueError(f"altitude {z} outside bounds {bounds.z}")
        return cls(_axis(*bounds.x, rx), _axis(*bounds.y, ry), zs)

    def points(self) -> list[Position3D]:
        return [Position3D(x, y, z) for x in self.xs for y in self.ys for z in self.zs]

    def __len__(self):
        return len(self.xs) * len(self.ys) * len(self.zs)


def enumerate_grid(bounds: AltitudeBounds, resolution) -> list[Position3D]:
    """Cartesian product of inclusive axis samples, in lexicographic order."""
    return PlacementGrid.from_bounds(bounds, resolution).points()


@dataclass(frozen=True)
class PiOptions:
    """``power_levels`` > 1 additionally sweeps each UE's power over
    ``{1/L, ..., 1}`` of its equal share (small instances only).
    ``eval_order`` is one of ``natural``, ``reversed``, ``shuffled``.
    """

    power_levels: int = 1
    max_candidates: int = 10**6
    eval_order: str = "natural"
    shuffle_seed: int = 0


@dataclass(frozen=True)
class Solution:
    uav_positions: tuple[Position3D, ...]
    association: Association
    ue_power: np.ndarray
    bh_power: np.ndarray
    avg_sum_rate: float
    feasible: bool
    violations: tuple[str, ...] = ()
    avg_sinr: np.ndarray = field(default_factory=lambda: np.zeros(0))
    avg_sinr_bh: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def powers(self) -> PowerAllocation:
        return PowerAllocation(self.ue_power, self.bh_power)

    def location_matrix(self) -> np.ndarray:
        """``3 x D`` matrix of UAV coordinates."""
        return np.array([p.as_tuple() for p in self.uav_positions], dtype=float).reshape(-1, 3).T

    def same_as(self, other: "Solution") -> bool:
        return json.dumps(self.to_dict()) == json.dumps(other.to_dict())

    def to_dict(self) -> dict:
        return {
            "uav_positions": [list(p.as_tuple()) for p in self.uav_positions],
            "serving": list(self.association.serving),
            "n_uavs": self.association.n_uavs,
            "ue_power": [float(v) for v in self.ue_power],
            "bh_power": [float(v) for v in self.bh_power],
            "avg_sum_rate": self.avg_sum_rate,
            "feasible": self.feasible,
            "violations": list(self.violations),
            "avg_sinr": [float(v) for v in self.avg_sinr],
            "avg_sinr_bh": [float(v) for v in self.avg_sinr_bh],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Solution":
        return cls(
            uav_positions=tuple(Position3D.from_seq(p) for p in d["uav_positions"]),
            association=Association(tuple(d["serving"]), int(d["n_uavs"])),
            ue_power=np.array(d["ue_power"], dtype=float),
            bh_power=np.array(d["bh_power"], dtype=float),
            avg_sum_rate=float(d["avg_sum_rate"]),
            feasible=bool(d["feasible"]),
            violations=tuple(d.get("violations", ())),
            avg_sinr=np.array(d.get("avg_sinr", []), dtype=float),
            avg_sinr_bh=np.array(d.get("avg_sinr_bh", []), dtype=float),
        )


def _station_powers(scenario: Scenario) -> np.ndarray:
    r = scenario.radio
    return np.array([r.gnb_max_power] + [r.uav_max_power] * scenario.n_uavs)


def _received(gains: LargeScaleGains, powers) -> np.ndarray:
    """``(D+1, U)`` average received power per station and UE."""
    g = np.vstack([gains.gnb_ue[None, :], gains.uav_ue])
    p = np.asarray(powers, dtype=float)
    return (p[:, None] if p.ndim == 1 else p) * g


def associate(scenario: Scenario, uav_positions=None, per_ue_candidate_powers=None,
              gains: LargeScaleGains | None = None) -> Association:
    """Attach each UE to the station with the strongest average received power.

    Candidate powers default to each station's maximum power; they may be a
    ``(D+1,)`` per-station vector or a ``(D+1, U)`` per-UE table. Exact ties
    go to the lowest station index (gNB first).
    """
    if gains is None:
        gains = large_scale_gains(scenario, uav_positions)
    powers = _station_powers(scenario) if per_ue_candidate_powers is None else per_ue_candidate_powers
    if np.any(np.asarray(powers) < 0):
        raise ValueError("candidate powers must be >= 0")
    rx = _received(gains, powers)
    return Association(tuple(int(s) for s in np.argmax(rx, axis=0)), scenario.n_uavs)


def allocate_powers(scenario: Scenario, association: Association, uav_positions=None,
                    gains: LargeScaleGains | None = None, levels=None) -> PowerAllocation:
    """Equal power split per station plus minimal backhaul power.

    Each backhaul power meets its average SINR threshold with equality; the
    gNB spends what is left equally on its terrestrial UEs. If backhaul alone
    exceeds the gNB budget it is scaled down to fit, which the feasibility
    check then reports. ``levels`` optionally scales each UE's equal share.
    """
    if gains is None:
        gains = large_scale_gains(scenario, uav_positions)
    r = scenario.radio
    U, D = association.n_users, association.n_uavs
    lv = np.ones(U) if levels is None else np.asarray(levels, dtype=float)
    ue_power = np.zeros(U)
    for d in range(1, D + 1):
        ues = association.ues_of(d)
        for u in ues:
            ue_power[u] = r.uav_max_power / len(ues) * lv[u]
    bh = np.zeros(D)
    for d in association.active_uavs:
        interference = sum(gains.uav_uav[j, d] * sum(ue_power[i] for i in association.ues_of(j + 1))
                           for j in association.active_uavs if j != d)
        bh[d] = r.sinr_threshold_bh * (interference + r.noise_power) / gains.gnb_uav[d]
    if bh.sum() > r.gnb_max_power:
        bh *= r.gnb_max_power / bh.sum()
    tues = association.tues
    left = max(r.gnb_max_power - bh.sum(), 0.0)
    for u in tues:
        ue_power[u] = left / len(tues) * lv[u]
    return PowerAllocation(ue_power, bh)


def feasible(scenario: Scenario, association: Association, powers: PowerAllocation,
             gains: LargeScaleGains, uav_positions=(), report: LinkReport | None = None):
    """Check the placement constraints; returns ``(ok, violations)``.

    Threshold comparisons are inclusive (with a 1e-9 relative slack so a
    backhaul link set exactly at threshold counts as feasible).
    """
    r = scenario.radio
    rep = report or average_report(gains, association, powers, r)
    out = []
    for u in range(association.n_users):
        if rep.sinr[u] < r.sinr_threshold_ue * (1 - _SINR_RTOL):
            tag = "9-a" if association.is_aerial(u) else "9-b"
            out.append(f"{tag}: UE {u + 1} average SINR {linear_to_db(rep.sinr[u]):.2f} dB "
                       f"below {linear_to_db(r.sinr_threshold_ue):.2f} dB")
    for d in association.active_uavs:
        if rep.sinr_bh[d] < r.sinr_threshold_bh * (1 - _SINR_RTOL):
            out.append(f"9-c: UAV {d + 1} backhaul SINR {linear_to_db(rep.sinr_bh[d]):.2f} dB "
                       f"below {linear_to_db(r.sinr_threshold_bh):.2f} dB")
    # 9-d: a UAV-served UE must hear its server strictly loudest among UAVs
    # (exact ties resolved by index are accepted).
    if association.n_uavs > 1:
        rx = _received(gains, _station_powers(scenario))[1:]
        for u, s in enumerate(association.serving):
            if s != GNB and np.any(rx[:, u] > rx[s - 1, u]):
                out.append(f"9-d: UE {u + 1} hears another UAV louder than its server {s}")
    for u, s in enumerate(association.serving):
        cap = r.gnb_max_power if s == GNB else r.uav_max_power
        if not 0 <= powers.ue_power[u] <= cap * (1 + 1e-12):
            out.append(f"9-e: UE {u + 1} power {powers.ue_power[u]:.6g} W outside [0, {cap:.6g}]")
    gnb_tx = float(np.sum(powers.bh_power)) + sum(powers.ue_power[u] for u in association.tues)
    if gnb_tx > r.gnb_max_power * (1 + 1e-12):
        out.append(f"8-b: gNB transmit power {gnb_tx:.6g} W exceeds {r.gnb_max_power:.6g} W")
    for d, p in enumerate(uav_positions):
        if not scenario.bounds.contains(p):
            out.append(f"9-f: UAV {d + 1} position {p.as_tuple()} outside bounds")
    return not out, tuple(out)


@dataclass
class _Tables:
    points: list
    gnb_ue: np.ndarray
    uav_ue: np.ndarray      # (G, U)
    gnb_uav: np.ndarray     # (G,)
    uav_uav: np.ndarray | None  # (G, G)

    def gains(self, idx) -> LargeScaleGains:
        idx = list(idx)
        uu = (self.uav_uav[np.ix_(idx, idx)].copy() if self.uav_uav is not None
              else np.full((len(idx), len(idx)), np.nan))
        np.fill_diagonal(uu, np.nan)
        return LargeScaleGains(self.gnb_ue, self.uav_ue[idx], self.gnb_uav[idx], uu)


def _tables(scenario: Scenario, points) -> _Tables:
    P = np.array([p.as_tuple() for p in points], dtype=float).reshape(-1, 3)
    ue = scenario.user_positions()
    g = scenario.gnb.position.as_array()
    f = scenario.radio.carrier_freq
    ch = scenario.channel
    uu = None
    if scenario.n_uavs > 1:
        uu = np.full((len(P), len(P)), np.nan)
        diff = ~np.eye(len(P), dtype=bool)
        i, j = np.nonzero(diff)
        uu[i, j] = atg_gain(P[i], P[j], f, ch)
    return _Tables(
        points=list(points),
        gnb_ue=np.asarray(terrestrial_gain(g, ue, f), dtype=float).reshape(len(ue)),
        uav_ue=np.asarray(atg_gain(P[:, None, :], ue[None, :, :], f, ch),
                          dtype=float).reshape(len(P), len(ue)),
        gnb_uav=np.asarray(atg_gain(g, P, f, ch), dtype=float).reshape(len(P)),
        uav_uav=uu,
    )


def _evaluate(scenario, positions, gains, options) -> Solution:
    assoc = associate(scenario, gains=gains)
    U = scenario.n_users
    level_sets = [None]
    if options.power_levels > 1:
        L = options.power_levels
        level_sets = list(itertools.product([k / L for k in range(1, L + 1)], repeat=U))
    best = None
    for levels in level_sets:
        powers = allocate_powers(scenario, assoc, gains=gains, levels=levels)
        rep = average_report(gains, assoc, powers, scenario.radio)
        ok, viol = feasible(scenario, assoc, powers, gains, positions, rep)
        key = (ok, rep.sum_rate)
        if best is None or key > best[0]:
            best = (key, Solution(tuple(positions), assoc, powers.ue_power, powers.bh_power,
                                  rep.sum_rate, ok, viol, rep.sinr, rep.sinr_bh))
    return best[1]


def _better(a: Solution, b: Solution) -> bool:
    """Total order: feasible first, then objective, then smallest position tuple."""
    if a.feasible != b.feasible:
        return a.feasible
    if a.avg_sum_rate != b.avg_sum_rate:
        return a.avg_sum_rate > b.avg_sum_rate
    return tuple(p.as_tuple() for p in a.uav_positions) < tuple(p.as_tuple() for p in b.uav_positions)


def solve_pi(scenario: Scenario, grid, options: PiOptions | None = None) -> Solution:
    """Best placement, association and power split over every UAV position set.

    ``grid`` is a :class:`PlacementGrid` or a sequence of
    :class:`Position3D`. Each UAV set is a combination of distinct grid
    points (UAVs are interchangeable, and co-located UAVs are not a physical
    option). If nothing is feasible, the best infeasible candidate is
    returned with ``feasible=False``.

    Raises
    ------
    CandidateBudgetError
        If the number of evaluations exceeds ``options.max_candidates``.
    """
    options = options or PiOptions()
    points = grid.points() if isinstance(grid, PlacementGrid) else list(grid)
    D = scenario.n_uavs
    if D == 0:
        gains = large_scale_gains(scenario, [])
        return _evaluate(scenario, (), gains, options)
    if not points:
        raise ValueError("placement grid is empty")

    n_eval = math.comb(len(points), D) * options.power_levels ** (scenario.n_users if options.power_levels > 1 else 0)
    if n_eval > options.max_candidates:
        raise CandidateBudgetError(n_eval, options.max_candidates)

    tables = _tables(scenario, points)
    candidates = itertools.combinations(range(len(points)), D)
    if options.eval_order == "reversed":
        candidates = reversed(list(candidates))
    elif options.eval_order == "shuffled":
        candidates = list(candidates)
        np.random.default_rng(options.shuffle_seed).shuffle(candidates)
    elif options.eval_order != "natural":
        raise ValueError(f"unknown eval_order {options.eval_order!r}")

    best = None
    for idx in candidates:
        sol = _evaluate(scenario, [points[i] for i in idx], tables.gains(idx), options)
        if best is None or _better(sol, best):
            best = sol
    return best
