"""End-to-end experiments: UAV arm vs. no-UAV baseline, altitude sweeps.

Per trial: generate the UE drop, solve the placement problem once, then for
each CSI instant draw fading, build the zero-forcing precoders, re-allocate
gNB power and record every link. All randomness flows from
:func:`sub_seed`, so the baseline arm sees the same UEs and the same
gNB-to-UE fading as the UAV arm.

Seed splitting
--------------
``sub_seed(master, trial, tag)`` is the first 8 bytes (little endian) of
``blake2b(f"{master}:{trial}:{tag}", digest_size=8)``. Tags in use:
``"scenario"`` for the UE drop and ``"csi:<k>"`` for CSI instant ``k``.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .channel import realize_channels
from .precoding import build_gnb_beamforming, enforce_budget
from .scenario import (AltitudeBounds, ChannelParams, GnbNode, Position3D, RadioConfig,
                       Scenario, generate_scenario_a, generate_scenario_b, validate)
from .solver_pi import PiOptions, PlacementGrid, Solution, solve_pi
from .solver_pii import (BH_POLICIES, InfeasibleInstanceError, apply_pii, build_instance,
                         solve_waterfilling)
from .units import linear_to_db

__all__ = [
    "ConfigError", "ScenarioSpec", "ExperimentConfig", "sub_seed", "TrialResult",
    "ArmSummary", "MetricsSummary", "run_trial", "run_arm", "run_experiment",
    "run_baseline", "altitude_sweep", "emit_outputs", "write_trace", "desk_config",
    "summarize", "csi_instant",
]

SINR_DB_FLOOR = -300.0  # dB value reported for a link with zero useful power


class ConfigError(ValueError):
    pass


def sub_seed(master_seed: int, trial: int, tag: str) -> int:
    digest = hashlib.blake2b(f"{master_seed}:{trial}:{tag}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


@dataclass(frozen=True)
class ScenarioSpec:
    """UE-drop generator choice and parameters.

    ``kind`` "A" uses the ``n_hotspots``/``ues_per_hotspot``/``hotspot_radius``
    fields, "B" uses ``hotspot_ues``/``background_ues``/``hotspot_sigma``.
    """

    kind: str = "A"
    n_hotspots: int = 2
    ues_per_hotspot: int = 2
    hotspot_radius: float = 50.0
    hotspot_ues: int = 6
    background_ues: int = 2
    hotspot_sigma: float = 100.0
    area: tuple[float, float] = (1500.0, 1500.0)
    n_uavs: int = 1
    gnb_antennas: int = 8
    uav_antennas: int = 2
    gnb_position: tuple[float, float, float] | None = None
    altitude_bounds: tuple[float, float] = (100.0, 500.0)

    def build(self, seed: int, radio: RadioConfig, channel: ChannelParams) -> Scenario:
        area = tuple(self.area)
        gpos = self.gnb_position or (area[0] / 2, area[1] / 2, 25.0)
        kw = dict(area=area, seed=seed, n_uavs=self.n_uavs, radio=radio, channel=channel,
                  gnb=GnbNode(Position3D.from_seq(gpos), self.gnb_antennas),
                  bounds=AltitudeBounds.for_area(area, self.altitude_bounds),
                  uav_antennas=self.uav_antennas)
        if self.kind == "A":
            return generate_scenario_a(self.n_hotspots, self.ues_per_hotspot,
                                       self.hotspot_radius, **kw)
        if self.kind == "B":
            return generate_scenario_b(self.hotspot_ues, self.background_ues,
                                       self.hotspot_sigma, **kw)
        raise ConfigError(f"scenario kind must be 'A' or 'B', got {self.kind!r}")

    @property
    def n_users(self) -> int:
        if self.kind == "A":
            return self.n_hotspots * self.ues_per_hotspot
        return self.hotspot_ues + self.background_ues


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: ScenarioSpec = field(default_factory=ScenarioSpec)
    radio: RadioConfig = field(default_factory=RadioConfig)
    channel: ChannelParams = field(default_factory=ChannelParams)
    grid_step: float = 125.0
    z_step: float = 100.0
    power_levels: int = 1
    max_candidates: int = 10**6
    n_csi_instants: int = 50
    n_trials: int = 20
    master_seed: int = 0
    altitudes: tuple[float, ...] = (200.0, 500.0)
    output_dir: str = "out"
    workers: int = 1
    bh_policy: str = "floor"

    def validate(self) -> list[str]:
        """Config-level problems, including those of the trial-0 scenario."""
        out = []
        if self.n_trials < 1:
            out.append("n_trials must be >= 1")
        if self.n_csi_instants < 1:
            out.append("n_csi_instants must be >= 1")
        if self.grid_step <= 0 or self.z_step <= 0:
            out.append("grid steps must be > 0")
        if self.power_levels < 1:
            out.append("power_levels must be >= 1")
        if self.workers < 1:
            out.append("workers must be >= 1")
        if self.bh_policy not in BH_POLICIES:
            out.append(f"bh_policy must be one of {BH_POLICIES}")
        lo, hi = self.scenario.altitude_bounds
        for z in self.altitudes:
            if not lo <= z <= hi:
                out.append(f"altitude {z} outside bounds [{lo}, {hi}]")
        try:
            scen = self.scenario.build(sub_seed(self.master_seed, 0, "scenario"),
                                       self.radio, self.channel)
        except (ValueError, TypeError) as exc:
            out.append(f"scenario: {exc}")
        else:
            out.extend(validate(scen))
        return out

    def check(self) -> "ExperimentConfig":
        problems = self.validate()
        if problems:
            raise ConfigError("; ".join(problems))
        return self

    def pi_options(self) -> PiOptions:
        return PiOptions(power_levels=self.power_levels, max_candidates=self.max_candidates)

    def grid(self, bounds: AltitudeBounds, z_levels=None) -> PlacementGrid:
        return PlacementGrid.from_bounds(bounds, (self.grid_step, self.grid_step, self.z_step),
                                         z_levels)

    # -- JSON ---------------------------------------------------------------
    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        try:
            kw = {}
            if "scenario" in d:
                sd = dict(d.pop("scenario"))
                for key in ("area", "gnb_position", "altitude_bounds"):
                    if sd.get(key) is not None:
                        sd[key] = tuple(float(v) for v in sd[key])
                kw["scenario"] = ScenarioSpec(**sd)
            if "radio" in d:
                kw["radio"] = RadioConfig.from_dict(d.pop("radio"))
            if "channel" in d:
                kw["channel"] = ChannelParams.from_dict(d.pop("channel"))
            if "altitudes" in d:
                kw["altitudes"] = tuple(float(v) for v in d.pop("altitudes"))
            names = {f.name for f in fields(cls)}
            unknown = set(d) - names
            if unknown:
                raise ConfigError(f"unknown config keys {sorted(unknown)}")
            kw.update(d)
            return cls(**kw)
        except (TypeError, KeyError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            text = Path(path).read_text()
            return cls.from_dict(json.loads(text))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc

    def to_dict(self) -> dict:
        d = asdict(self)
        d["scenario"]["area"] = list(self.scenario.area)
        d["scenario"]["altitude_bounds"] = list(self.scenario.altitude_bounds)
        if self.scenario.gnb_position is not None:
            d["scenario"]["gnb_position"] = list(self.scenario.gnb_position)
        d["altitudes"] = list(self.altitudes)
        return d


# -- per-trial pipeline ------------------------------------------------------

@dataclass
class TrialResult:
    trial: int
    solution: Solution
    node_ids: tuple[str, ...]
    node_kinds: tuple[str, ...]
    sinr: np.ndarray          # (n_csi, U + D) linear, UEs then backhaul links
    rate: np.ndarray          # (n_csi, U + D) bit/s; backhaul entries are link capacity
    sum_rate: np.ndarray      # (n_csi,) bit/s, UEs only
    gnb_tx_power: np.ndarray  # (n_csi,) W after power allocation
    pii_feasible: np.ndarray  # (n_csi,) bool

    @property
    def n_users(self) -> int:
        return self.solution.association.n_users

    def ue_sinr_db(self) -> np.ndarray:
        return _db(self.sinr[:, :self.n_users])


def _db(x):
    return np.maximum(linear_to_db(np.maximum(np.asarray(x, dtype=float), 0.0)), SINR_DB_FLOOR)


def _node_labels(sol: Solution):
    a = sol.association
    ids = [f"ue{u + 1}" for u in range(a.n_users)] + [f"uav{d + 1}" for d in range(a.n_uavs)]
    kinds = ["aUE" if a.is_aerial(u) else "tUE" for u in range(a.n_users)] + ["BH"] * a.n_uavs
    return tuple(ids), tuple(kinds)


def csi_instant(scenario: Scenario, sol: Solution, seed: int, bh_policy: str = "floor"):
    """One CSI instant: channels, precoders, power allocation and link report.

    Returns ``(report, gnb_tx_power, pii_feasible)``. When the SINR floors
    cannot all be met the floors are scaled down to the budget instead.
    """
    assoc = sol.association
    radio = scenario.radio
    ch = realize_channels(scenario, sol.uav_positions, seed)
    bf = build_gnb_beamforming(ch.h_gnb_to_uav, ch.h_gnb_to_ue, assoc.active_uavs, assoc.tues)
    inst = build_instance(ch, bf, assoc, sol.powers, radio, bh_policy)
    try:
        p = solve_waterfilling(inst)
        ok = True
    except InfeasibleInstanceError:
        p = enforce_budget(inst.floors, inst.beam_cost, inst.budget)
        ok = False
    powers, report = apply_pii(ch, bf, assoc, sol.powers, inst, p, radio)
    bh = np.asarray(powers.gnb_link_power[:assoc.n_uavs])
    tue = np.asarray(powers.gnb_link_power[assoc.n_uavs:])
    tx = bf.transmit_power(dict(enumerate(bh)), dict(enumerate(tue)))
    return report, tx, ok


def run_trial(config: ExperimentConfig, trial: int, *, with_uavs: bool = True,
              z_levels=None) -> TrialResult:
    scenario = config.scenario.build(sub_seed(config.master_seed, trial, "scenario"),
                                     config.radio, config.channel)
    if not with_uavs:
        scenario = scenario.without_uavs()
    sol = solve_pi(scenario, config.grid(scenario.bounds, z_levels), config.pi_options())
    placed = scenario.with_uav_positions(sol.uav_positions)
    ids, kinds = _node_labels(sol)
    n = config.n_csi_instants
    U, D = scenario.n_users, scenario.n_uavs
    sinr = np.zeros((n, U + D))
    rate = np.zeros((n, U + D))
    total = np.zeros(n)
    tx = np.zeros(n)
    ok = np.zeros(n, dtype=bool)
    bw = config.radio.bandwidth
    for k in range(n):
        rep, tx[k], ok[k] = csi_instant(placed, sol, sub_seed(config.master_seed, trial, f"csi:{k}"),
                                        config.bh_policy)
        sinr[k, :U] = rep.sinr
        sinr[k, U:] = rep.sinr_bh
        rate[k, :U] = rep.rate
        rate[k, U:] = bw * np.log2(1.0 + rep.sinr_bh)
        total[k] = rep.sum_rate
    return TrialResult(trial, sol, ids, kinds, sinr, rate, total, tx, ok)


def _trial_job(args):
    config, trial, with_uavs, z_levels = args
    return run_trial(config, trial, with_uavs=with_uavs, z_levels=z_levels)


def run_arm(config: ExperimentConfig, *, with_uavs: bool = True, z_levels=None,
            trial_order=None) -> list[TrialResult]:
    """All trials of one arm, returned sorted by trial index.

    ``trial_order`` only changes execution order, never the result.
    """
    order = list(range(config.n_trials)) if trial_order is None else list(trial_order)
    if sorted(order) != list(range(config.n_trials)):
        raise ValueError("trial_order must be a permutation of range(n_trials)")
    jobs = [(config, t, with_uavs, z_levels) for t in order]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_trial_job, jobs))
    else:
        results = [_trial_job(j) for j in jobs]
    return sorted(results, key=lambda r: r.trial)


# -- aggregation -------------------------------------------------------------

@dataclass
class ArmSummary:
    """Per-trial metrics of one arm; aggregate statistics are derived."""

    label: str
    trial_sum_rate: list[float]          # bit/s, mean over CSI instants
    trial_mean_sinr_db: list[float]      # mean over UEs and CSI instants
    trial_pi_feasible: list[bool]
    trial_pi_objective: list[float]      # average sum-rate of the placement, bit/s
    trial_pi_mean_sinr_db: list[float]   # mean over UEs of the placement's average SINR
    trial_min_avg_ue_sinr_db: list[float]
    trial_min_avg_bh_sinr_db: list[float | None]
    trial_uav_positions: list[list[list[float]]]
    node_mean_sinr_db: dict[str, float]
    node_kind: dict[str, str]
    pii_infeasible_instants: int
    max_gnb_tx_power: float

    @property
    def mean_sum_rate(self) -> float:
        return math.fsum(self.trial_sum_rate) / len(self.trial_sum_rate)

    @property
    def ci95_sum_rate(self) -> float:
        """Half-width of a normal-approximation 95% interval on the mean."""
        x = np.asarray(self.trial_sum_rate)
        if len(x) < 2:
            return 0.0
        return float(1.96 * np.std(x, ddof=1) / math.sqrt(len(x)))

    @property
    def mean_sinr_db(self) -> float:
        return math.fsum(self.trial_mean_sinr_db) / len(self.trial_mean_sinr_db)

    @property
    def mean_pi_objective(self) -> float:
        return math.fsum(self.trial_pi_objective) / len(self.trial_pi_objective)

    @property
    def mean_pi_sinr_db(self) -> float:
        return math.fsum(self.trial_pi_mean_sinr_db) / len(self.trial_pi_mean_sinr_db)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["derived"] = {"mean_sum_rate_bps": self.mean_sum_rate,
                        "mean_sum_rate_mbps": self.mean_sum_rate / 1e6,
                        "ci95_sum_rate_mbps": self.ci95_sum_rate / 1e6,
                        "mean_sinr_db": self.mean_sinr_db,
                        "mean_pi_objective_mbps": self.mean_pi_objective / 1e6,
                        "mean_pi_sinr_db": self.mean_pi_sinr_db}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ArmSummary":
        d = {k: v for k, v in d.items() if k != "derived"}
        return cls(**d)


def summarize(label: str, results: list[TrialResult]) -> ArmSummary:
    results = sorted(results, key=lambda r: r.trial)
    node_vals: dict[str, list[float]] = {}
    node_kind: dict[str, str] = {}
    for r in results:
        db = _db(r.sinr)
        for j, (nid, kind) in enumerate(zip(r.node_ids, r.node_kinds)):
            node_vals.setdefault(nid, []).extend(db[:, j].tolist())
            node_kind.setdefault(nid, kind)
    min_bh = []
    for r in results:
        s = r.solution
        active = s.association.active_uavs
        min_bh.append(float(np.min(_db(s.avg_sinr_bh[list(active)]))) if active else None)
    return ArmSummary(
        label=label,
        trial_sum_rate=[float(np.mean(r.sum_rate)) for r in results],
        trial_mean_sinr_db=[float(np.mean(r.ue_sinr_db())) for r in results],
        trial_pi_feasible=[bool(r.solution.feasible) for r in results],
        trial_pi_objective=[float(r.solution.avg_sum_rate) for r in results],
        trial_pi_mean_sinr_db=[float(np.mean(_db(r.solution.avg_sinr))) for r in results],
        trial_min_avg_ue_sinr_db=[float(np.min(_db(r.solution.avg_sinr))) for r in results],
        trial_min_avg_bh_sinr_db=min_bh,
        trial_uav_positions=[[list(p.as_tuple()) for p in r.solution.uav_positions] for r in results],
        node_mean_sinr_db={k: math.fsum(v) / len(v) for k, v in node_vals.items()},
        node_kind=node_kind,
        pii_infeasible_instants=int(sum(int(np.sum(~r.pii_feasible)) for r in results)),
        max_gnb_tx_power=float(max(np.max(r.gnb_tx_power) for r in results)),
    )


@dataclass
class MetricsSummary:
    config: dict
    arms: dict[str, ArmSummary] = field(default_factory=dict)
    sweep: dict[str, ArmSummary] = field(default_factory=dict)

    def deltas(self) -> dict:
        """Paired UAV-vs-baseline comparison; empty unless both arms ran.

        Keys without a prefix compare the per-CSI-instant metrics; keys
        prefixed ``placement_`` compare the average-model metrics of the
        chosen placements.
        """
        if "uav" not in self.arms or "baseline" not in self.arms:
            return {}
        a, b = self.arms["uav"], self.arms["baseline"]

        def diff(x, y):
            return [i - j for i, j in zip(x, y)]

        def ratio(x, y):
            return [i / j for i, j in zip(x, y)]

        return {
            "delta_sinr_db": a.mean_sinr_db - b.mean_sinr_db,
            "sum_rate_ratio": a.mean_sum_rate / b.mean_sum_rate,
            "trial_delta_sinr_db": diff(a.trial_mean_sinr_db, b.trial_mean_sinr_db),
            "trial_sum_rate_ratio": ratio(a.trial_sum_rate, b.trial_sum_rate),
            "placement_delta_sinr_db": a.mean_pi_sinr_db - b.mean_pi_sinr_db,
            "placement_sum_rate_ratio": a.mean_pi_objective / b.mean_pi_objective,
            "placement_trial_delta_sinr_db": diff(a.trial_pi_mean_sinr_db, b.trial_pi_mean_sinr_db),
            "placement_trial_sum_rate_ratio": ratio(a.trial_pi_objective, b.trial_pi_objective),
        }

    def infeasible_everywhere(self) -> bool:
        """True when no trial of any UAV arm found a feasible placement.

        A baseline-only summary is judged on the baseline itself.
        """
        arms = [a for k, a in self.arms.items() if k != "baseline"] + list(self.sweep.values())
        arms = arms or list(self.arms.values())
        return bool(arms) and not any(any(a.trial_pi_feasible) for a in arms)

    def to_dict(self) -> dict:
        return {"config": self.config,
                "arms": {k: v.to_dict() for k, v in self.arms.items()},
                "sweep": {k: v.to_dict() for k, v in self.sweep.items()},
                "deltas": self.deltas()}

    @classmethod
    def from_dict(cls, d: dict) -> "MetricsSummary":
        return cls(config=d["config"],
                   arms={k: ArmSummary.from_dict(v) for k, v in d.get("arms", {}).items()},
                   sweep={k: ArmSummary.from_dict(v) for k, v in d.get("sweep", {}).items()})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "MetricsSummary":
        return cls.from_dict(json.loads(text))


def run_experiment(config: ExperimentConfig, *, baseline: bool = True, trial_order=None):
    """UAV arm (and, by default, the paired baseline).

    Returns ``(summary, traces)`` where ``traces`` maps arm name to its
    per-trial results.
    """
    config.check()
    traces = {"uav": run_arm(config, trial_order=trial_order)}
    if baseline:
        traces["baseline"] = run_arm(config, with_uavs=False, trial_order=trial_order)
    summary = MetricsSummary(config.to_dict(), {k: summarize(k, v) for k, v in traces.items()})
    return summary, traces


def run_baseline(config: ExperimentConfig, *, trial_order=None):
    """The no-UAV arm alone: every UE on the gNB, same seeds as the UAV arm."""
    config.check()
    traces = {"baseline": run_arm(config, with_uavs=False, trial_order=trial_order)}
    return MetricsSummary(config.to_dict(), {"baseline": summarize("baseline", traces["baseline"])}), traces


def _alt_key(z: float) -> str:
    return f"{z:g}"


def altitude_sweep(config: ExperimentConfig, altitudes=None, *, baseline: bool = True):
    """Placement restricted to one hovering altitude at a time.

    Returns ``(summary, traces)``; ``summary.sweep`` is keyed by altitude in
    metres (formatted with ``%g``).
    """
    config.check()
    alts = tuple(config.altitudes if altitudes is None else altitudes)
    lo, hi = config.scenario.altitude_bounds
    for z in alts:
        if not lo <= z <= hi:
            raise ConfigError(f"altitude {z} outside bounds [{lo}, {hi}]")
    traces = {}
    sweep = {}
    for z in alts:
        key = _alt_key(z)
        traces[f"z{key}"] = run_arm(config, z_levels=(z,))
        sweep[key] = summarize(f"z{key}", traces[f"z{key}"])
    arms = {}
    if baseline:
        traces["baseline"] = run_arm(config, with_uavs=False)
        arms["baseline"] = summarize("baseline", traces["baseline"])
    return MetricsSummary(config.to_dict(), arms, sweep), traces


# -- outputs -----------------------------------------------------------------

TRACE_HEADER = ("trial", "csi_instant", "node_id", "node_kind", "sinr_db", "rate_bps")


def write_trace(path, results: list[TrialResult]) -> int:
    """Per-instant CSV; returns the number of data rows."""
    rows = 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_HEADER)
        for r in sorted(results, key=lambda r: r.trial):
            db = _db(r.sinr)
            for k in range(r.sinr.shape[0]):
                for j, (nid, kind) in enumerate(zip(r.node_ids, r.node_kinds)):
                    w.writerow((r.trial, k, nid, kind, repr(float(db[k, j])), repr(float(r.rate[k, j]))))
                    rows += 1
    return rows


_RATE_COLUMNS = ("mean_sum_rate_mbps", "ci95_mbps", "mean_sinr_db",
                 "placement_sum_rate_mbps", "placement_sinr_db")


def _rate_row(arm: ArmSummary) -> tuple:
    return (repr(arm.mean_sum_rate / 1e6), repr(arm.ci95_sum_rate / 1e6), repr(arm.mean_sinr_db),
            repr(arm.mean_pi_objective / 1e6), repr(arm.mean_pi_sinr_db))


def emit_outputs(summary: MetricsSummary, traces: dict, out_dir) -> dict:
    """Write ``summary.json``, one ``trace_<arm>.csv`` per arm and plot-data CSVs.

    Plot data: ``sinr_per_node.csv`` (per-node mean SINR per arm) and, when a
    sweep ran, ``sum_rate_vs_altitude.csv``. Returns the written paths.
    """
    assert summary.arms or summary.sweep, "nothing to emit"
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}
    p = out / "summary.json"
    p.write_text(summary.to_json() + "\n")
    paths["summary"] = p
    for arm, results in traces.items():
        p = out / f"trace_{arm}.csv"
        write_trace(p, results)
        paths[f"trace_{arm}"] = p

    p = out / "sinr_per_node.csv"
    with open(p, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("arm", "node_id", "node_kind", "mean_sinr_db"))
        for name, arm in list(summary.arms.items()) + [(a.label, a) for a in summary.sweep.values()]:
            for nid in sorted(arm.node_mean_sinr_db, key=_node_sort_key):
                w.writerow((name, nid, arm.node_kind[nid], repr(arm.node_mean_sinr_db[nid])))
    paths["sinr_per_node"] = p

    p = out / "sum_rate.csv"
    with open(p, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("arm", "altitude_m") + _RATE_COLUMNS)
        for name, arm in summary.arms.items():
            w.writerow((name, "") + _rate_row(arm))
        for z, arm in summary.sweep.items():
            w.writerow((arm.label, z) + _rate_row(arm))
    paths["sum_rate"] = p
    if summary.sweep:
        p = out / "sum_rate_vs_altitude.csv"
        with open(p, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("altitude_m",) + _RATE_COLUMNS)
            for z, arm in summary.sweep.items():
                w.writerow((z,) + _rate_row(arm))
        paths["sum_rate_vs_altitude"] = p
    return paths


def _node_sort_key(nid: str):
    if nid.startswith("ue"):
        return (0, int(nid[2:]))
    return (1, int(nid[3:]))


def desk_config(kind: str = "A", **overrides) -> ExperimentConfig:
    """Default desk-scale configuration for scenario ``kind``."""
    spec = ScenarioSpec(kind=kind)
    return replace(ExperimentConfig(scenario=spec), **overrides)
