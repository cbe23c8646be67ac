import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from uav_iab.channel import (GeometryError, atg_gain, atg_pathloss_db, average_gain,
                             draw_rayleigh_miso, draw_rician_miso, elevation_angle, fspl_db,
                             large_scale_gains, los_probability, realize_channels,
                             terrestrial_pathloss_db)
from uav_iab.scenario import ChannelParams, Position3D

from conftest import make_scenario

C = 2.998e8


def _los(theta, a=9.61, b=0.16):
    return 1.0 / (1.0 + a * math.exp(-b * (theta - a)))


@pytest.mark.parametrize("theta, expected, tol", [
    (90.0, 0.99997, 1e-4),
    (9.61, 1 / 10.61, 1e-6),
    (0.0, 0.0219, 1e-3),
])
def test_los_probability_anchors(theta, expected, tol):
    assert los_probability(theta) == pytest.approx(expected, abs=tol)


def test_los_probability_range_checked():
    with pytest.raises(ValueError):
        los_probability(-1.0)
    with pytest.raises(ValueError):
        los_probability(91.0)


def test_los_probability_monotone():
    th = np.linspace(0, 90, 181)
    p = los_probability(th)
    assert np.all(np.diff(p) >= 0)


def test_fspl_anchors():
    assert fspl_db(1000.0, 2e9) == pytest.approx(98.47, abs=0.01)
    assert fspl_db(100.0, 2e9) == pytest.approx(78.47, abs=0.01)
    assert fspl_db(1000.0, 2e9) == pytest.approx(20 * math.log10(4 * math.pi * 1000 * 2e9 / C))


@pytest.mark.parametrize("d, expected", [(500.0, 125.03), (5000.0, 164.11)])
def test_terrestrial_anchors(d, expected):
    assert terrestrial_pathloss_db(d, 1.5, 2e9) == pytest.approx(expected, abs=0.01)


def test_terrestrial_height_correction():
    base = terrestrial_pathloss_db(300.0, 1.5, 2e9)
    assert terrestrial_pathloss_db(300.0, 11.5, 2e9) == pytest.approx(base - 6.0)


def test_atg_matches_closed_form():
    d, th = 640.0, 37.0
    p = _los(th)
    expected = 20 * math.log10(4 * math.pi * d * 2e9 / C) + 1.0 * p + 20.0 * (1 - p)
    assert atg_pathloss_db(d, th, 2e9) == pytest.approx(expected, rel=1e-12)


def test_atg_vertical_limit():
    assert atg_pathloss_db(300.0, 90.0, 2e9) == pytest.approx(fspl_db(300.0, 2e9) + 1.0, abs=1e-3)


def test_atg_monotone():
    d = np.linspace(50, 3000, 60)
    assert np.all(np.diff(atg_pathloss_db(d, 30.0, 2e9)) > 0)
    th = np.linspace(0, 90, 91)
    assert np.all(np.diff(atg_pathloss_db(500.0, th, 2e9)) <= 0)


@pytest.mark.parametrize("fn", [fspl_db, lambda d, f: terrestrial_pathloss_db(d, 1.5, f)])
def test_nonpositive_distance_rejected(fn):
    with pytest.raises(ValueError):
        fn(0.0, 2e9)


@pytest.mark.parametrize("pl, g", [(0.0, 1.0), (100.0, 1e-10)])
def test_average_gain_exact(pl, g):
    assert average_gain(pl) == pytest.approx(g, rel=1e-15)


def test_average_gain_anchor():
    assert average_gain(98.47) == pytest.approx(1.42e-10, rel=0.01)


@settings(max_examples=100)
@given(st.floats(1e-15, 1.0))
def test_average_gain_inverts_db(g):
    assert average_gain(-10 * math.log10(g)) == pytest.approx(g, rel=1e-12)


def test_elevation_geometry():
    assert elevation_angle((10.0, 20.0, 200.0), (10.0, 20.0, 1.5)) == pytest.approx(90.0)
    assert elevation_angle((0.0, 0.0, 101.0), (100.0, 0.0, 1.0)) == pytest.approx(45.0)


def test_rician_normalisation_and_limits():
    rng = np.random.default_rng(0)
    x = np.concatenate([draw_rician_miso(10, 10.0, rng) for _ in range(10_000)])
    assert abs(np.mean(np.abs(x) ** 2) - 1.0) <= 0.02
    inf = draw_rician_miso(16, np.inf, np.random.default_rng(1))
    np.testing.assert_allclose(np.abs(inf), 1.0, rtol=0, atol=1e-15)


def test_rician_k_zero_is_the_diffuse_part():
    g1, g2 = np.random.default_rng(5), np.random.default_rng(5)
    x = draw_rician_miso(4, 0.0, g1)
    g2.uniform(0, 2 * np.pi, 4)  # phases are drawn first
    ref = (g2.standard_normal(4) + 1j * g2.standard_normal(4)) / np.sqrt(2)
    np.testing.assert_allclose(x, ref)


def test_rayleigh_moments_and_independence():
    rng_a, rng_b = np.random.default_rng(10), np.random.default_rng(11)
    a = np.concatenate([draw_rayleigh_miso(10, rng_a) for _ in range(10_000)])
    b = np.concatenate([draw_rayleigh_miso(10, rng_b) for _ in range(10_000)])
    assert abs(np.mean(np.abs(a) ** 2) - 1.0) <= 0.02
    assert abs(a.real.mean()) <= 0.02 and abs(a.imag.mean()) <= 0.02
    assert abs(np.corrcoef(a.real, b.real)[0, 1]) <= 0.02


def test_generators_reject_bad_sizes():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        draw_rayleigh_miso(0, rng)
    with pytest.raises(ValueError):
        draw_rician_miso(2, -1.0, rng)


def test_realize_channels_deterministic_and_shaped(two_hotspots):
    a = realize_channels(two_hotspots, seed=42)
    b = realize_channels(two_hotspots, seed=42)
    c = realize_channels(two_hotspots, seed=43)
    np.testing.assert_array_equal(a.fading_uav_ue, b.fading_uav_ue)
    np.testing.assert_array_equal(a.fading_gnb_ue, b.fading_gnb_ue)
    assert not np.array_equal(a.fading_gnb_ue, c.fading_gnb_ue)
    assert a.h_gnb_to_ue.shape == (4, 8)
    assert a.h_gnb_to_uav.shape == (1, 8)
    assert a.h_uav_to_ue.shape == (1, 4, 2)


def test_gnb_fading_does_not_depend_on_uavs(two_hotspots):
    with_uav = realize_channels(two_hotspots, seed=7)
    without = realize_channels(two_hotspots.without_uavs(), seed=7)
    np.testing.assert_array_equal(with_uav.fading_gnb_ue, without.fading_gnb_ue)


def test_uav_above_ue_and_distance_monotone():
    s = make_scenario([(400.0, 400.0, 1.5)], uavs=[(400.0, 400.0, 200.0)])
    near = large_scale_gains(s).uav_ue[0, 0]
    p = atg_pathloss_db(198.5, 90.0, 2e9)
    assert near == pytest.approx(10 ** (-p / 10), rel=1e-12)
    far = large_scale_gains(s, [Position3D(700.0, 400.0, 200.0)]).uav_ue[0, 0]
    assert far < near


def test_backhaul_reciprocity():
    s = make_scenario([(0.0, 0.0, 1.5)], uavs=[(300.0, 200.0, 250.0)])
    g = large_scale_gains(s)
    uav = (300.0, 200.0, 250.0)
    assert g.gnb_uav[0] == atg_gain(uav, s.gnb.position.as_tuple(), 2e9, ChannelParams())


def test_coincident_uavs_rejected():
    s = make_scenario([(0.0, 0.0, 1.5)], uavs=[(100.0, 100.0, 200.0), (100.0, 100.0, 200.0)])
    with pytest.raises(GeometryError):
        realize_channels(s, seed=0)


def test_access_gain_unit_mean(two_hotspots):
    acc = np.mean([realize_channels(two_hotspots, seed=k).access_gain() for k in range(4000)], axis=0)
    g = large_scale_gains(two_hotspots).uav_ue
    np.testing.assert_allclose(acc / g, 1.0, atol=0.03)
