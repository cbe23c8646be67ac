"""Linear zero-forcing beamforming at the gNB.

Each gNB subband carries the backhaul streams of all active UAVs plus the
one terrestrial UE that owns the subband, so every subband has its own
``M x N`` channel matrix (rows: UAV 1..D, then the tUE) and its own right
pseudo-inverse. Streams are expressed in *received* power: with ``H V = I``
a stream of power ``P`` arrives with power ``P`` and costs ``P * ||v||^2`` of
transmit power.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SingularChannelError", "build_lzfbf", "beam_cost", "enforce_budget",
    "Precoder", "Subband", "GnbBeamforming", "build_gnb_beamforming",
]

MAX_GRAM_CONDITION = 1e12


class SingularChannelError(np.linalg.LinAlgError):
    pass


def build_lzfbf(H) -> np.ndarray:
    """Right pseudo-inverse ``H^H (H H^H)^{-1}`` of an ``M x N`` channel, ``M <= N``.

    Raises
    ------
    SingularChannelError
        If the Gram matrix ``H H^H`` has condition number above 1e12.
    """
    H = np.atleast_2d(np.asarray(H))
    m, n = H.shape
    if m > n:
        raise SingularChannelError(f"{m} streams cannot be zero-forced with {n} antennas")
    gram = H @ H.conj().T
    if not np.all(np.isfinite(gram)) or np.linalg.cond(gram) > MAX_GRAM_CONDITION:
        raise SingularChannelError("channel matrix is (numerically) rank deficient")
    # gram is Hermitian, so V^H = gram^{-1} H
    return np.linalg.solve(gram, H).conj().T


def beam_cost(V) -> np.ndarray:
    """Squared column norms ``||v_m||^2``: transmit power per unit stream power."""
    V = np.asarray(V)
    return np.sum(np.abs(V) ** 2, axis=0).real


def enforce_budget(power_diag, costs, p_max: float) -> np.ndarray:
    """Scale stream powers down uniformly so ``sum(P_m * cost_m) <= p_max``."""
    p = np.asarray(power_diag, dtype=float)
    if np.any(p < 0):
        raise ValueError("powers must be non-negative")
    total = float(np.dot(p, np.asarray(costs, dtype=float)))
    if total <= p_max:
        return p.copy()
    return p * (p_max / total)


@dataclass(frozen=True)
class Precoder:
    beams: np.ndarray        # (N, M)
    power_diag: np.ndarray   # (M,)

    @property
    def costs(self) -> np.ndarray:
        return beam_cost(self.beams)

    def trace(self) -> float:
        """``Tr(P V^H V)``, the total transmit power."""
        return float(np.dot(self.power_diag, self.costs))

    def zf_residual(self, H) -> float:
        """Largest deviation of ``H V`` from the identity."""
        E = np.asarray(H) @ self.beams
        return float(np.max(np.abs(E - np.eye(E.shape[0]))))


@dataclass(frozen=True)
class Subband:
    """One FDM resource at the gNB.

    ``uavs`` are 0-based UAV indices in row order; ``tue`` is the 0-based
    UE owning the subband (``None`` for a backhaul-only band).
    """

    uavs: tuple[int, ...]
    tue: int | None
    beams: np.ndarray

    def column_of_uav(self, d: int) -> int:
        return self.uavs.index(d)

    @property
    def tue_column(self) -> int:
        return len(self.uavs)


@dataclass(frozen=True)
class GnbBeamforming:
    subbands: tuple[Subband, ...]

    @property
    def n_subbands(self) -> int:
        return len(self.subbands)

    def subband_of_tue(self, u: int) -> Subband:
        for sb in self.subbands:
            if sb.tue == u:
                return sb
        raise KeyError(f"UE {u} has no gNB subband")

    def bh_cost(self, d: int) -> float:
        """Transmit cost of a backhaul stream spread evenly across all subbands."""
        return float(np.mean([beam_cost(sb.beams)[sb.column_of_uav(d)] for sb in self.subbands]))

    def tue_cost(self, u: int) -> float:
        sb = self.subband_of_tue(u)
        return float(beam_cost(sb.beams)[sb.tue_column])

    def transmit_power(self, bh_stream: dict, tue_stream: dict) -> float:
        """Total gNB transmit power ``sum_k Tr(P_k V_k^H V_k)`` over subbands."""
        n = self.n_subbands
        total = 0.0
        for sb in self.subbands:
            cost = beam_cost(sb.beams)
            for col, d in enumerate(sb.uavs):
                total += bh_stream.get(d, 0.0) / n * cost[col]
            if sb.tue is not None:
                total += tue_stream.get(sb.tue, 0.0) * cost[sb.tue_column]
        return total


def build_gnb_beamforming(h_gnb_to_uav, h_gnb_to_ue, active_uavs, tues) -> GnbBeamforming:
    """Zero-forcing precoders for every gNB subband.

    One subband per terrestrial UE (in ``tues`` order); with no tUEs but
    active backhaul links a single backhaul-only subband is used.
    """
    active_uavs = tuple(active_uavs)
    tues = tuple(tues)
    rows_bh = [np.asarray(h_gnb_to_uav[d]) for d in active_uavs]
    subbands = []
    for u in tues:
        H = np.vstack(rows_bh + [np.asarray(h_gnb_to_ue[u])])
        subbands.append(Subband(active_uavs, u, build_lzfbf(H)))
    if not tues and active_uavs:
        subbands.append(Subband(active_uavs, None, build_lzfbf(np.vstack(rows_bh))))
    return GnbBeamforming(tuple(subbands))
