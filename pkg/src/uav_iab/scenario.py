"""Network description: radio parameters, node geometry and UE drops.

Every type here is a frozen dataclass, so a :class:`Scenario` can be shared
freely between worker processes. The two generators reproduce the clustered
user layouts used for evaluation:

* scenario A -- several small hotspots dropped uniformly over the area;
* scenario B -- one Gaussian hotspot plus uniformly scattered background UEs.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .units import db_to_linear, dbm_to_watt

__all__ = [
    "RadioConfig", "ChannelParams", "Position3D", "GnbNode", "UavNode",
    "UserNode", "AltitudeBounds", "Scenario", "generate_scenario_a",
    "generate_scenario_b", "validate", "DEFAULT_AREA",
]

DEFAULT_AREA = (1500.0, 1500.0)
DEFAULT_UE_HEIGHT = 1.5
DEFAULT_GNB_HEIGHT = 25.0
DEFAULT_GNB_ANTENNAS = 8
DEFAULT_UAV_ANTENNAS = 2


@dataclass(frozen=True)
class RadioConfig:
    """Radio parameters, all in linear SI units (Hz, W, ratios)."""

    carrier_freq: float = 2e9
    bandwidth: float = 20e6
    noise_power: float = dbm_to_watt(-104.0)
    gnb_max_power: float = dbm_to_watt(46.0)
    uav_max_power: float = dbm_to_watt(36.0)
    sinr_threshold_ue: float = db_to_linear(3.0)
    sinr_threshold_bh: float = db_to_linear(10.0)

    # JSON keys may carry a unit suffix; the value is converted on parse.
    _SUFFIXED = {
        "noise_power_dbm": ("noise_power", dbm_to_watt),
        "gnb_max_power_dbm": ("gnb_max_power", dbm_to_watt),
        "uav_max_power_dbm": ("uav_max_power", dbm_to_watt),
        "sinr_threshold_ue_db": ("sinr_threshold_ue", db_to_linear),
        "sinr_threshold_bh_db": ("sinr_threshold_bh", db_to_linear),
        "carrier_freq_ghz": ("carrier_freq", lambda v: float(v) * 1e9),
        "bandwidth_mhz": ("bandwidth", lambda v: float(v) * 1e6),
    }

    @classmethod
    def from_dict(cls, d: dict) -> "RadioConfig":
        kw = {}
        for key, value in d.items():
            if key in cls._SUFFIXED:
                name, conv = cls._SUFFIXED[key]
                kw[name] = float(conv(value))
            elif key in cls.__dataclass_fields__:
                kw[key] = float(value)
            else:
                raise KeyError(f"unknown radio key {key!r}")
        return cls(**kw)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ChannelParams:
    """Propagation-model constants.

    ``los_a``/``los_b`` parameterise the elevation-angle LOS probability of
    the air-to-ground model; ``eta_*_db`` are the mean excess losses added
    on top of free-space loss for LOS and NLOS paths.
    """

    los_a: float = 9.61
    los_b: float = 0.16
    eta_los_db: float = 1.0
    eta_nlos_db: float = 20.0
    k_factor_db: float = 10.0

    @property
    def k_factor(self) -> float:
        return db_to_linear(self.k_factor_db)

    @classmethod
    def from_dict(cls, d: dict) -> "ChannelParams":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise KeyError(f"unknown channel keys {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in d.items()})

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Position3D:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    @classmethod
    def from_seq(cls, seq) -> "Position3D":
        x, y, z = (float(v) for v in seq)
        return cls(x, y, z)


@dataclass(frozen=True)
class GnbNode:
    position: Position3D
    n_tx_antennas: int = DEFAULT_GNB_ANTENNAS


@dataclass(frozen=True)
class UavNode:
    index: int
    position: Position3D
    n_tx_antennas: int = DEFAULT_UAV_ANTENNAS


@dataclass(frozen=True)
class UserNode:
    index: int
    position: Position3D


@dataclass(frozen=True)
class AltitudeBounds:
    """Per-axis box ``[min, max]`` that UAV hovering positions must stay in."""

    x: tuple[float, float]
    y: tuple[float, float]
    z: tuple[float, float] = (100.0, 500.0)

    @classmethod
    def for_area(cls, area, z=(100.0, 500.0)) -> "AltitudeBounds":
        return cls((0.0, float(area[0])), (0.0, float(area[1])), (float(z[0]), float(z[1])))

    def axes(self):
        return (self.x, self.y, self.z)

    def contains(self, p: Position3D, tol: float = 1e-9) -> bool:
        return all(lo - tol <= v <= hi + tol for v, (lo, hi) in zip(p.as_tuple(), self.axes()))


@dataclass(frozen=True)
class Scenario:
    radio: RadioConfig
    gnb: GnbNode
    uavs: tuple[UavNode, ...]
    users: tuple[UserNode, ...]
    bounds: AltitudeBounds
    area: tuple[float, float] = DEFAULT_AREA
    channel: ChannelParams = field(default_factory=ChannelParams)

    @property
    def n_uavs(self) -> int:
        return len(self.uavs)

    @property
    def n_users(self) -> int:
        return len(self.users)

    def user_positions(self) -> np.ndarray:
        """``(U, 3)`` array of UE coordinates."""
        return np.array([u.position.as_tuple() for u in self.users], dtype=float).reshape(-1, 3)

    def uav_positions(self) -> list[Position3D]:
        return [u.position for u in self.uavs]

    def with_uav_positions(self, positions) -> "Scenario":
        if len(positions) != self.n_uavs:
            raise ValueError(f"expected {self.n_uavs} positions, got {len(positions)}")
        uavs = tuple(replace(u, position=Position3D.from_seq(_coords(p)))
                     for u, p in zip(self.uavs, positions))
        return replace(self, uavs=uavs)

    def without_uavs(self) -> "Scenario":
        """Same network with every UAV removed (the no-UAV baseline)."""
        return replace(self, uavs=())

    # -- serialization -----------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "radio": self.radio.to_dict(),
            "channel": self.channel.to_dict(),
            "gnb": {"position": list(self.gnb.position.as_tuple()),
                    "n_tx_antennas": self.gnb.n_tx_antennas},
            "uavs": [{"index": u.index, "position": list(u.position.as_tuple()),
                      "n_tx_antennas": u.n_tx_antennas} for u in self.uavs],
            "users": [{"index": u.index, "position": list(u.position.as_tuple())}
                      for u in self.users],
            "bounds": {"x": list(self.bounds.x), "y": list(self.bounds.y),
                       "z": list(self.bounds.z)},
            "area": list(self.area),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        g = d["gnb"]
        b = d["bounds"]
        return cls(
            radio=RadioConfig.from_dict(d.get("radio", {})),
            channel=ChannelParams.from_dict(d.get("channel", {})),
            gnb=GnbNode(Position3D.from_seq(g["position"]),
                        int(g.get("n_tx_antennas", DEFAULT_GNB_ANTENNAS))),
            uavs=tuple(UavNode(int(u["index"]), Position3D.from_seq(u["position"]),
                               int(u.get("n_tx_antennas", DEFAULT_UAV_ANTENNAS)))
                       for u in d.get("uavs", [])),
            users=tuple(UserNode(int(u["index"]), Position3D.from_seq(u["position"]))
                        for u in d["users"]),
            bounds=AltitudeBounds(tuple(map(float, b["x"])), tuple(map(float, b["y"])),
                                  tuple(map(float, b["z"]))),
            area=tuple(float(v) for v in d["area"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Scenario":
        return cls.from_dict(json.loads(text))


def _coords(p):
    return p.as_tuple() if isinstance(p, Position3D) else tuple(p)


def _check_area(area):
    if len(area) != 2 or min(area) <= 0:
        raise ValueError(f"area must be two positive lengths, got {area!r}")
    return float(area[0]), float(area[1])


def _assemble(xy: np.ndarray, area, *, n_uavs, radio, channel, gnb, bounds,
              ue_height, uav_antennas) -> Scenario:
    area = _check_area(area)
    bounds = bounds or AltitudeBounds.for_area(area)
    if gnb is None:
        gnb = GnbNode(Position3D(area[0] / 2, area[1] / 2, DEFAULT_GNB_HEIGHT))
    users = tuple(UserNode(i + 1, Position3D(float(x), float(y), ue_height))
                  for i, (x, y) in enumerate(xy))
    # Parking spots only; the placement solver moves the UAVs.
    ycen = (bounds.y[0] + bounds.y[1]) / 2
    uavs = tuple(
        UavNode(d + 1, Position3D(bounds.x[0] + (bounds.x[1] - bounds.x[0]) * (d + 1) / (n_uavs + 1),
                                  ycen, bounds.z[0]), uav_antennas)
        for d in range(n_uavs))
    return Scenario(radio=radio or RadioConfig(), gnb=gnb, uavs=uavs, users=users,
                    bounds=bounds, area=area, channel=channel or ChannelParams())


def generate_scenario_a(n_hotspots: int, ues_per_hotspot: int, hotspot_radius: float,
                        area=DEFAULT_AREA, seed: int = 0, *, n_uavs: int = 1,
                        radio: RadioConfig | None = None,
                        channel: ChannelParams | None = None,
                        gnb: GnbNode | None = None,
                        bounds: AltitudeBounds | None = None,
                        ue_height: float = DEFAULT_UE_HEIGHT,
                        uav_antennas: int = DEFAULT_UAV_ANTENNAS) -> Scenario:
    """Multiple-hotspot layout.

    Hotspot centres are uniform over the area, shrunk by ``hotspot_radius`` on
    each side so that every disc lies inside it; UEs are uniform within their
    hotspot's disc.
    """
    area = _check_area(area)
    if n_hotspots < 1:
        raise ValueError("n_hotspots must be >= 1")
    if ues_per_hotspot < 1:
        raise ValueError("ues_per_hotspot must be >= 1")
    if hotspot_radius < 0 or hotspot_radius > min(area) / 2:
        raise ValueError(f"hotspot_radius {hotspot_radius} must lie in [0, {min(area) / 2}]")

    rng = np.random.default_rng(seed)
    r = float(hotspot_radius)
    centres = np.column_stack([rng.uniform(r, area[0] - r, n_hotspots),
                               rng.uniform(r, area[1] - r, n_hotspots)])
    pts = []
    for c in centres:
        rho = r * np.sqrt(rng.uniform(0.0, 1.0, ues_per_hotspot))
        phi = rng.uniform(0.0, 2 * np.pi, ues_per_hotspot)
        pts.append(c + np.column_stack([rho * np.cos(phi), rho * np.sin(phi)]))
    xy = np.clip(np.vstack(pts), 0.0, area)
    return _assemble(xy, area, n_uavs=n_uavs, radio=radio, channel=channel, gnb=gnb,
                     bounds=bounds, ue_height=ue_height, uav_antennas=uav_antennas)


def generate_scenario_b(hotspot_ues: int, background_ues: int, hotspot_sigma: float,
                        area=DEFAULT_AREA, seed: int = 0, *, n_uavs: int = 1,
                        radio: RadioConfig | None = None,
                        channel: ChannelParams | None = None,
                        gnb: GnbNode | None = None,
                        bounds: AltitudeBounds | None = None,
                        ue_height: float = DEFAULT_UE_HEIGHT,
                        uav_antennas: int = DEFAULT_UAV_ANTENNAS) -> Scenario:
    """Single Gaussian hotspot plus uniform background UEs.

    Hotspot UEs come first in index order; positions are clamped to the area.
    """
    area = _check_area(area)
    if hotspot_ues < 0 or background_ues < 0 or hotspot_ues + background_ues == 0:
        raise ValueError("UE counts must be >= 0 and not both zero")
    if hotspot_sigma < 0:
        raise ValueError("hotspot_sigma must be >= 0")

    rng = np.random.default_rng(seed)
    centre = np.array([rng.uniform(0, area[0]), rng.uniform(0, area[1])])
    hot = centre + hotspot_sigma * rng.standard_normal((hotspot_ues, 2))
    bg = np.column_stack([rng.uniform(0, area[0], background_ues),
                          rng.uniform(0, area[1], background_ues)])
    xy = np.clip(np.vstack([hot, bg]), 0.0, area)
    return _assemble(xy, area, n_uavs=n_uavs, radio=radio, channel=channel, gnb=gnb,
                     bounds=bounds, ue_height=ue_height, uav_antennas=uav_antennas)


def validate(scenario: Scenario) -> list[str]:
    """Return every violated invariant as a readable message; empty means valid."""
    out = []
    r = scenario.radio
    for name in r.__dataclass_fields__:
        if not getattr(r, name) > 0:
            out.append(f"radio.{name} must be > 0 (got {getattr(r, name)})")
    if r.sinr_threshold_bh < r.sinr_threshold_ue:
        out.append("radio.sinr_threshold_bh must be >= sinr_threshold_ue")

    for axis, (lo, hi) in zip("xyz", scenario.bounds.axes()):
        if lo > hi:
            out.append(f"bounds.{axis}: min {lo} > max {hi}")

    g = scenario.gnb
    if g.n_tx_antennas < 1:
        out.append("gnb.n_tx_antennas must be >= 1")
    if g.position.z < 0:
        out.append("gnb.position.z must be >= 0")
    m = scenario.n_uavs + 1
    if g.n_tx_antennas < m:
        out.append(f"gnb.n_tx_antennas = {g.n_tx_antennas} < D+1 = {m}: "
                   "zero-forcing matrix would not have a right inverse")

    indices = [u.index for u in scenario.uavs]
    if indices != list(range(1, scenario.n_uavs + 1)):
        out.append(f"UAV indices must be 1..D without gaps, got {indices}")
    for u in scenario.uavs:
        if u.n_tx_antennas < 1:
            out.append(f"uav {u.index}: n_tx_antennas must be >= 1")
        if u.position.z < 0:
            out.append(f"uav {u.index}: z must be >= 0")
        if not scenario.bounds.contains(u.position):
            out.append(f"uav {u.index}: position {u.position.as_tuple()} outside bounds "
                       f"{scenario.bounds.axes()}")

    w, d = scenario.area
    if w <= 0 or d <= 0:
        out.append(f"area must be positive, got {scenario.area}")
    if not scenario.users:
        out.append("scenario has no users")
    for u in scenario.users:
        p = u.position
        if p.z < 0:
            out.append(f"user {u.index}: z must be >= 0")
        if not (0 <= p.x <= w and 0 <= p.y <= d):
            out.append(f"user {u.index}: ({p.x}, {p.y}) outside the service area")
    return out
