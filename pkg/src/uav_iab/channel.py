"""Large-scale pathloss and small-scale MISO fading.

Air-to-ground (and, by reciprocity, ground-to-air) links use free-space loss
plus an elevation-dependent mixture of LOS/NLOS excess loss. gNB to
terrestrial-UE links use the urban-macro NLOS closed form. Fading vectors
have unit mean power per entry; the large-scale gain is kept separately and
applied by the ``h_*`` accessors of :class:`ChannelState`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenario import ChannelParams, Position3D, Scenario
from .units import SPEED_OF_LIGHT

__all__ = [
    "GeometryError", "los_probability", "fspl_db", "atg_pathloss_db",
    "terrestrial_pathloss_db", "average_gain", "elevation_angle",
    "atg_gain", "terrestrial_gain", "draw_rician_miso", "draw_rayleigh_miso",
    "LargeScaleGains", "ChannelState", "large_scale_gains", "realize_channels",
]

# spawn-key tags, one per link family
_GNB_UE, _GNB_UAV, _UAV_UE, _UAV_UAV = 0, 1, 2, 3


class GeometryError(ValueError):
    """Transmitter and receiver coincide, so the link is undefined."""


def _ret(a):
    return float(a) if np.ndim(a) == 0 else a


def los_probability(elevation_angle, a: float = 9.61, b: float = 0.16):
    """Probability of a line-of-sight air-to-ground path.

    ``1 / (1 + a*exp(-b*(theta - a)))`` with ``theta`` in degrees.
    """
    theta = np.asarray(elevation_angle, dtype=float)
    if np.any((theta < 0) | (theta > 90)) or np.any(np.isnan(theta)):
        raise ValueError("elevation angle must lie in [0, 90] degrees")
    return _ret(1.0 / (1.0 + a * np.exp(-b * (theta - a))))


def _check_distance(distance):
    d = np.asarray(distance, dtype=float)
    if np.any(~(d > 0)):
        raise GeometryError("link distance must be > 0")
    return d


def fspl_db(distance, freq):
    """Free-space pathloss ``20*log10(4*pi*d*f/c)``."""
    d = _check_distance(distance)
    return _ret(20.0 * np.log10(4.0 * np.pi * d * freq / SPEED_OF_LIGHT))


def atg_pathloss_db(distance_3d, elevation_angle, freq, params: ChannelParams | None = None):
    """Mean air-to-ground pathloss: FSPL plus the LOS-probability-weighted excess loss."""
    p = params or ChannelParams()
    p_los = np.asarray(los_probability(elevation_angle, p.los_a, p.los_b))
    excess = p.eta_los_db * p_los + p.eta_nlos_db * (1.0 - p_los)
    return _ret(np.asarray(fspl_db(distance_3d, freq)) + excess)


def terrestrial_pathloss_db(distance_3d, ue_height, freq):
    """Urban-macro NLOS pathloss for gNB to ground-UE links."""
    d = _check_distance(distance_3d)
    f_ghz = freq / 1e9
    return _ret(13.54 + 39.08 * np.log10(d) + 20.0 * np.log10(f_ghz)
                - 0.6 * (np.asarray(ue_height, dtype=float) - 1.5))


def average_gain(pathloss_db):
    return _ret(np.power(10.0, -np.asarray(pathloss_db, dtype=float) / 10.0))


def elevation_angle(tx, rx):
    """Elevation in degrees between points, ``atan2(|dz|, horizontal distance)``.

    Accepts broadcastable ``(..., 3)`` arrays.
    """
    tx = np.asarray(tx, dtype=float)
    rx = np.asarray(rx, dtype=float)
    diff = rx - tx
    horiz = np.hypot(diff[..., 0], diff[..., 1])
    return _ret(np.degrees(np.arctan2(np.abs(diff[..., 2]), horiz)))


def _distance(tx, rx):
    diff = np.asarray(rx, dtype=float) - np.asarray(tx, dtype=float)
    return np.sqrt(np.sum(diff * diff, axis=-1))


def atg_gain(tx, rx, freq, params: ChannelParams | None = None):
    """Average air-to-ground power gain between broadcastable ``(..., 3)`` point arrays."""
    d = _distance(tx, rx)
    return average_gain(atg_pathloss_db(d, elevation_angle(tx, rx), freq, params))


def terrestrial_gain(tx, rx, freq):
    rx = np.asarray(rx, dtype=float)
    d = _distance(tx, rx)
    return average_gain(terrestrial_pathloss_db(d, rx[..., 2], freq))


def draw_rician_miso(n_tx: int, k_factor: float, rng: np.random.Generator) -> np.ndarray:
    """Rician row vector with unit mean power per entry.

    ``sqrt(K/(K+1)) e^{j phi} + sqrt(1/(K+1)) CN(0, 1)`` with i.i.d. uniform
    LOS phases. ``k_factor=np.inf`` gives the deterministic unit-modulus limit.
    """
    if n_tx < 1:
        raise ValueError("n_tx must be >= 1")
    if not k_factor >= 0:
        raise ValueError("k_factor must be >= 0")
    phi = rng.uniform(0.0, 2 * np.pi, n_tx)
    diffuse = (rng.standard_normal(n_tx) + 1j * rng.standard_normal(n_tx)) / np.sqrt(2)
    if np.isinf(k_factor):
        return np.exp(1j * phi)
    los_amp = np.sqrt(k_factor / (k_factor + 1.0))
    nlos_amp = np.sqrt(1.0 / (k_factor + 1.0))
    return los_amp * np.exp(1j * phi) + nlos_amp * diffuse


def draw_rayleigh_miso(n_tx: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. CN(0, 1) row vector."""
    if n_tx < 1:
        raise ValueError("n_tx must be >= 1")
    return (rng.standard_normal(n_tx) + 1j * rng.standard_normal(n_tx)) / np.sqrt(2)


@dataclass(frozen=True)
class LargeScaleGains:
    """Average linear power gains (inverse pathloss).

    ``uav_ue[d, u]`` is UAV ``d+1`` to UE ``u+1``; ``uav_uav[j, d]`` is the
    access transmission of UAV ``j+1`` as heard by UAV ``d+1``'s backhaul
    receiver (diagonal is undefined and stored as NaN).
    """

    gnb_ue: np.ndarray
    uav_ue: np.ndarray
    gnb_uav: np.ndarray
    uav_uav: np.ndarray


def large_scale_gains(scenario: Scenario, uav_positions=None) -> LargeScaleGains:
    pos = _uav_array(scenario, uav_positions)
    ue = scenario.user_positions()
    g = scenario.gnb.position.as_array()
    f = scenario.radio.carrier_freq
    p = scenario.channel
    n_d = len(pos)
    uav_uav = np.full((n_d, n_d), np.nan)
    for j in range(n_d):
        for d in range(n_d):
            if j != d:
                uav_uav[j, d] = atg_gain(pos[j], pos[d], f, p)
    return LargeScaleGains(
        gnb_ue=np.asarray(terrestrial_gain(g, ue, f), dtype=float).reshape(len(ue)),
        uav_ue=np.asarray(atg_gain(pos[:, None, :], ue[None, :, :], f, p),
                          dtype=float).reshape(n_d, len(ue)),
        # ground-to-air uses the air-to-ground formula at the same geometry
        gnb_uav=np.asarray(atg_gain(g, pos, f, p), dtype=float).reshape(n_d),
        uav_uav=uav_uav,
    )


def _uav_array(scenario, uav_positions):
    if uav_positions is None:
        uav_positions = scenario.uav_positions()
    if len(uav_positions) != scenario.n_uavs:
        raise ValueError(f"need one position per UAV ({scenario.n_uavs}), got {len(uav_positions)}")
    return np.array([p.as_tuple() if isinstance(p, Position3D) else tuple(p)
                     for p in uav_positions], dtype=float).reshape(-1, 3)


@dataclass(frozen=True)
class ChannelState:
    """One CSI instant.

    Fading arrays hold unit-power entries; the ``h_*`` properties return the
    physical channel ``sqrt(gain) * fading``.
    """

    gains: LargeScaleGains
    fading_gnb_ue: np.ndarray    # (U, Ng)
    fading_gnb_uav: np.ndarray   # (D, Ng)
    fading_uav_ue: np.ndarray    # (D, U, Nd)
    fading_uav_uav: np.ndarray   # (D, D, Nd), [tx, rx]

    @property
    def h_gnb_to_ue(self) -> np.ndarray:
        return np.sqrt(self.gains.gnb_ue)[:, None] * self.fading_gnb_ue

    @property
    def h_gnb_to_uav(self) -> np.ndarray:
        return np.sqrt(self.gains.gnb_uav)[:, None] * self.fading_gnb_uav

    @property
    def h_uav_to_ue(self) -> np.ndarray:
        return np.sqrt(self.gains.uav_ue)[:, :, None] * self.fading_uav_ue

    def access_gain(self) -> np.ndarray:
        """``(D, U)`` effective UAV-to-UE power gain.

        The UAV spreads its power evenly over its antennas without CSI-based
        beamforming, so the gain is ``gain * ||f||^2 / N_d`` (unit mean).
        """
        f = self.fading_uav_ue
        if f.size == 0:
            return np.zeros(self.gains.uav_ue.shape)
        return self.gains.uav_ue * np.sum(np.abs(f) ** 2, axis=-1) / f.shape[-1]

    def uav_uav_gain(self) -> np.ndarray:
        f = self.fading_uav_uav
        if f.size == 0:
            return np.zeros(self.gains.uav_uav.shape)
        return self.gains.uav_uav * np.sum(np.abs(f) ** 2, axis=-1) / f.shape[-1]


def _root_seed(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, np.random.Generator):
        return np.random.SeedSequence(int(seed.integers(2**63)))
    return np.random.SeedSequence(int(seed))


def _link_rng(root: np.random.SeedSequence, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(root.entropy, spawn_key=tuple(root.spawn_key) + key)
    return np.random.default_rng(ss)


def realize_channels(scenario: Scenario, uav_positions=None, seed=0) -> ChannelState:
    """Draw every MISO fading vector for one CSI instant.

    Each link gets its own stream keyed by (link family, tx index, rx index)
    under ``seed``, so a link's fading does not depend on which other links
    exist. This is what lets the no-UAV baseline see exactly the same
    gNB-to-UE fading as the treatment arm.
    """
    root = _root_seed(seed)
    pos = _uav_array(scenario, uav_positions)
    n_d = len(pos)
    for j in range(n_d):
        for d in range(j + 1, n_d):
            if np.allclose(pos[j], pos[d]):
                raise GeometryError(f"UAVs {j + 1} and {d + 1} coincide")
    gains = large_scale_gains(scenario, pos)
    n_u = scenario.n_users
    n_g = scenario.gnb.n_tx_antennas
    n_a = scenario.uavs[0].n_tx_antennas if n_d else 1
    k = scenario.channel.k_factor

    gnb_ue = np.empty((n_u, n_g), dtype=complex)
    for u in range(n_u):
        gnb_ue[u] = draw_rayleigh_miso(n_g, _link_rng(root, _GNB_UE, 0, u + 1))
    gnb_uav = np.empty((n_d, n_g), dtype=complex)
    uav_ue = np.empty((n_d, n_u, n_a), dtype=complex)
    uav_uav = np.zeros((n_d, n_d, n_a), dtype=complex)
    for d in range(n_d):
        gnb_uav[d] = draw_rician_miso(n_g, k, _link_rng(root, _GNB_UAV, 0, d + 1))
        for u in range(n_u):
            uav_ue[d, u] = draw_rician_miso(n_a, k, _link_rng(root, _UAV_UE, d + 1, u + 1))
        for r in range(n_d):
            if r != d:
                uav_uav[d, r] = draw_rician_miso(n_a, k, _link_rng(root, _UAV_UAV, d + 1, r + 1))
    return ChannelState(gains, gnb_ue, gnb_uav, uav_ue, uav_uav)
