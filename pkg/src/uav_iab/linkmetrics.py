"""SINR and sum-rate evaluation.

Stations are numbered ``0`` (the gNB) and ``1..D`` (UAVs); UEs and UAVs are
0-based in arrays. Powers come in two flavours:

* transmit powers (``PowerAllocation.ue_power``/``bh_power``), used by the
  average-gain link budget that drives placement;
* gNB stream powers (``gnb_link_power``), the received-power convention of
  the zero-forcing precoder, used by the instantaneous metrics.

Within one station UEs are frequency-multiplexed and split the bandwidth
equally. A UE's co-channel interferers are found by :func:`schedule_coresources`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from .channel import ChannelState, LargeScaleGains
from .precoding import GnbBeamforming, Subband
from .scenario import RadioConfig

__all__ = [
    "GNB", "Association", "PowerAllocation", "LinkReport", "schedule_coresources",
    "avg_sinr_aue", "avg_sinr_tue", "avg_sinr_bh", "average_report",
    "sinr_aue", "sinr_tue", "sinr_bh", "instantaneous_report", "sum_rate",
    "stream_powers",
]

GNB = 0


@dataclass(frozen=True)
class Association:
    """Serving station per UE: ``serving[u] = 0`` for the gNB, ``d`` for UAV ``d``."""

    serving: tuple[int, ...]
    n_uavs: int

    def __post_init__(self):
        object.__setattr__(self, "serving", tuple(int(s) for s in self.serving))
        bad = [s for s in self.serving if not 0 <= s <= self.n_uavs]
        if bad:
            raise ValueError(f"serving station out of range 0..{self.n_uavs}: {bad}")

    @property
    def n_users(self) -> int:
        return len(self.serving)

    def ues_of(self, station: int) -> tuple[int, ...]:
        return self._groups[station]

    @cached_property
    def _groups(self) -> dict:
        groups = {s: [] for s in range(self.n_uavs + 1)}
        for u, s in enumerate(self.serving):
            groups[s].append(u)
        return {s: tuple(v) for s, v in groups.items()}

    @property
    def tues(self) -> tuple[int, ...]:
        return self.ues_of(GNB)

    @property
    def active_uavs(self) -> tuple[int, ...]:
        """0-based indices of UAVs that serve at least one UE."""
        return tuple(d - 1 for d in range(1, self.n_uavs + 1) if self._groups[d])

    def share(self, u: int) -> int:
        """Number of UEs splitting ``u``'s serving-station bandwidth."""
        return len(self._groups[self.serving[u]])

    def is_aerial(self, u: int) -> bool:
        return self.serving[u] != GNB


def schedule_coresources(assoc: Association) -> list[dict[int, int]]:
    """Co-channel interferer per UE and foreign station.

    UE lists of each station are sorted by index and aligned round-robin: the
    UE at position ``k`` of its station overlaps with position ``k mod n_s`` of
    every other station ``s`` that has ``n_s > 0`` UEs.
    """
    out = []
    for u, s in enumerate(assoc.serving):
        k = assoc.ues_of(s).index(u)
        co = {}
        for other in range(assoc.n_uavs + 1):
            ues = assoc.ues_of(other)
            if other != s and ues:
                co[other] = ues[k % len(ues)]
        out.append(co)
    return out


@dataclass(frozen=True)
class PowerAllocation:
    """Per-UE transmit power, per-UAV backhaul transmit power, and gNB stream powers.

    ``gnb_link_power`` has length ``D + U``: backhaul streams of UAV 1..D
    followed by one stream per UE (zero for UAV-served UEs). ``None`` means
    the streams are derived from the transmit powers.
    """

    ue_power: np.ndarray
    bh_power: np.ndarray
    gnb_link_power: np.ndarray | None = None

    def with_streams(self, bh_stream, tue_stream) -> "PowerAllocation":
        return replace(self, gnb_link_power=np.concatenate(
            [np.asarray(bh_stream, dtype=float), np.asarray(tue_stream, dtype=float)]))


@dataclass(frozen=True)
class LinkReport:
    sinr: np.ndarray      # (U,) linear
    sinr_bh: np.ndarray   # (D,) linear, 0 for idle UAVs
    rate: np.ndarray      # (U,) bit/s
    sum_rate: float       # bit/s
    aerial: tuple[bool, ...]


# -- average link budget -----------------------------------------------------

def _uav_interference_avg(u, gains, assoc, co, ue_power, exclude):
    total = 0.0
    for s, i in co.items():
        if s != GNB and s != exclude:
            total += gains.uav_ue[s - 1, u] * ue_power[i]
    return total


def avg_sinr_aue(u: int, gains: LargeScaleGains, assoc: Association, powers: PowerAllocation,
                 noise: float, schedule=None) -> float:
    """Average SINR of a UAV-served UE from large-scale gains only."""
    d = assoc.serving[u]
    if d == GNB:
        raise ValueError(f"UE {u} is not served by a UAV")
    co = (schedule or schedule_coresources(assoc))[u]
    p = powers.ue_power
    signal = p[u] * gains.uav_ue[d - 1, u]
    gnb_tx = float(np.sum(powers.bh_power))
    if GNB in co:
        gnb_tx += p[co[GNB]]
    interference = _uav_interference_avg(u, gains, assoc, co, p, d) + gains.gnb_ue[u] * gnb_tx
    return float(signal / (interference + noise))


def avg_sinr_tue(u: int, gains: LargeScaleGains, assoc: Association, powers: PowerAllocation,
                 noise: float, schedule=None) -> float:
    if assoc.serving[u] != GNB:
        raise ValueError(f"UE {u} is not served by the gNB")
    co = (schedule or schedule_coresources(assoc))[u]
    p = powers.ue_power
    signal = p[u] * gains.gnb_ue[u]
    # backhaul beams are nulled at the tUE by zero-forcing
    return float(signal / (_uav_interference_avg(u, gains, assoc, co, p, GNB) + noise))


def avg_sinr_bh(d: int, gains: LargeScaleGains, assoc: Association, powers: PowerAllocation,
                noise: float) -> float:
    """Average backhaul SINR at UAV ``d`` (0-based).

    The backhaul receiver spans the whole band, so every access stream of
    every other UAV counts as interference.
    """
    interference = 0.0
    for j in assoc.active_uavs:
        if j != d:
            interference += gains.uav_uav[j, d] * sum(powers.ue_power[i] for i in assoc.ues_of(j + 1))
    return float(powers.bh_power[d] * gains.gnb_uav[d] / (interference + noise))


def average_report(gains: LargeScaleGains, assoc: Association, powers: PowerAllocation,
                   radio: RadioConfig) -> LinkReport:
    sched = schedule_coresources(assoc)
    n = radio.noise_power
    sinr = np.array([
        avg_sinr_aue(u, gains, assoc, powers, n, sched) if assoc.is_aerial(u)
        else avg_sinr_tue(u, gains, assoc, powers, n, sched)
        for u in range(assoc.n_users)])
    active = set(assoc.active_uavs)
    sinr_bh = np.array([avg_sinr_bh(d, gains, assoc, powers, n) if d in active else 0.0
                        for d in range(assoc.n_uavs)])
    return sum_rate(sinr, sinr_bh, assoc, radio.bandwidth)


# -- instantaneous link budget ----------------------------------------------

def stream_powers(bf: GnbBeamforming, assoc: Association, powers: PowerAllocation):
    """gNB stream powers as ``(bh_stream, tue_stream)`` arrays of length D and U.

    Without explicit streams, each link's transmit power is converted through
    its beam cost.
    """
    D, U = assoc.n_uavs, assoc.n_users
    if powers.gnb_link_power is not None:
        g = np.asarray(powers.gnb_link_power, dtype=float)
        return g[:D].copy(), g[D:D + U].copy()
    bh = np.zeros(D)
    tue = np.zeros(U)
    for d in assoc.active_uavs:
        bh[d] = powers.bh_power[d] / bf.bh_cost(d)
    for u in assoc.tues:
        tue[u] = powers.ue_power[u] / bf.tue_cost(u)
    return bh, tue


def _gnb_power_at(h, sb: Subband, n_sub, bh, tue, skip_uav=None, skip_tue=False):
    """Power received through subband ``sb``'s beams by a receiver with channel ``h``."""
    amp = np.abs(h @ sb.beams) ** 2
    total = 0.0
    for col, d in enumerate(sb.uavs):
        if d != skip_uav:
            total += bh[d] / n_sub * amp[col]
    if sb.tue is not None and not skip_tue:
        total += tue[sb.tue] * amp[sb.tue_column]
    return total


def _aue_subband(u, assoc, bf):
    if bf.n_subbands == 0:
        return None
    tues = assoc.tues
    if not tues:
        return bf.subbands[0]
    k = assoc.ues_of(assoc.serving[u]).index(u)
    return bf.subband_of_tue(tues[k % len(tues)])


def sinr_aue(u: int, channels: ChannelState, assoc: Association, powers: PowerAllocation,
             bf: GnbBeamforming, noise: float, schedule=None, streams=None) -> float:
    d = assoc.serving[u]
    if d == GNB:
        raise ValueError(f"UE {u} is not served by a UAV")
    co = (schedule or schedule_coresources(assoc))[u]
    access = channels.access_gain()
    p = powers.ue_power
    bh, tue = streams if streams is not None else stream_powers(bf, assoc, powers)
    signal = p[u] * access[d - 1, u]
    interference = sum(access[s - 1, u] * p[i] for s, i in co.items() if s != GNB)
    sb = _aue_subband(u, assoc, bf)
    if sb is not None:
        interference += _gnb_power_at(channels.h_gnb_to_ue[u], sb, bf.n_subbands, bh, tue)
    return float(signal / (interference + noise))


def sinr_tue(u: int, channels: ChannelState, assoc: Association, powers: PowerAllocation,
             bf: GnbBeamforming, noise: float, schedule=None, streams=None) -> float:
    if assoc.serving[u] != GNB:
        raise ValueError(f"UE {u} is not served by the gNB")
    co = (schedule or schedule_coresources(assoc))[u]
    access = channels.access_gain()
    bh, tue = streams if streams is not None else stream_powers(bf, assoc, powers)
    sb = bf.subband_of_tue(u)
    h = channels.h_gnb_to_ue[u]
    signal = tue[u] * abs(h @ sb.beams[:, sb.tue_column]) ** 2
    leakage = _gnb_power_at(h, sb, bf.n_subbands, bh, tue, skip_tue=True)
    interference = sum(access[s - 1, u] * powers.ue_power[i] for s, i in co.items())
    return float(signal / (leakage + interference + noise))


def sinr_bh(d: int, channels: ChannelState, assoc: Association, powers: PowerAllocation,
            bf: GnbBeamforming, noise: float, streams=None) -> float:
    """Backhaul SINR at UAV ``d`` (0-based); self-interference is taken as cancelled."""
    bh, tue = streams if streams is not None else stream_powers(bf, assoc, powers)
    h = channels.h_gnb_to_uav[d]
    n_sub = bf.n_subbands
    signal = 0.0
    leakage = 0.0
    for sb in bf.subbands:
        col = sb.column_of_uav(d)
        signal += bh[d] / n_sub * abs(h @ sb.beams[:, col]) ** 2
        leakage += _gnb_power_at(h, sb, n_sub, bh, tue, skip_uav=d)
    uav_gain = channels.uav_uav_gain()
    access = 0.0
    for j in assoc.active_uavs:
        if j != d:
            access += uav_gain[j, d] * sum(powers.ue_power[i] for i in assoc.ues_of(j + 1))
    return float(signal / (leakage + access + noise))


def instantaneous_report(channels: ChannelState, assoc: Association, powers: PowerAllocation,
                         bf: GnbBeamforming, radio: RadioConfig) -> LinkReport:
    sched = schedule_coresources(assoc)
    streams = stream_powers(bf, assoc, powers)
    n = radio.noise_power
    sinr = np.array([
        sinr_aue(u, channels, assoc, powers, bf, n, sched, streams) if assoc.is_aerial(u)
        else sinr_tue(u, channels, assoc, powers, bf, n, sched, streams)
        for u in range(assoc.n_users)])
    active = set(assoc.active_uavs)
    sinr_bh_ = np.array([sinr_bh(d, channels, assoc, powers, bf, n, streams) if d in active else 0.0
                         for d in range(assoc.n_uavs)])
    return sum_rate(sinr, sinr_bh_, assoc, radio.bandwidth)


def sum_rate(sinr, sinr_bh, assoc: Association, bandwidth: float) -> LinkReport:
    """Shannon rates with the serving station's band split equally among its UEs.

    Backhaul links carry no rate of their own and do not cap the aerial UEs.
    """
    sinr = np.asarray(sinr, dtype=float)
    share = np.array([assoc.share(u) for u in range(assoc.n_users)], dtype=float)
    rate = bandwidth / share * np.log2(1.0 + sinr)
    return LinkReport(sinr=sinr, sinr_bh=np.asarray(sinr_bh, dtype=float), rate=rate,
                      sum_rate=float(np.sum(rate)),
                      aerial=tuple(assoc.is_aerial(u) for u in range(assoc.n_users)))
