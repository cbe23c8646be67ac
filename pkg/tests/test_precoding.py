import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from uav_iab.precoding import (Precoder, SingularChannelError, beam_cost, build_gnb_beamforming,
                               build_lzfbf, enforce_budget)


def _cn(rng, m, n):
    return (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / np.sqrt(2)


def test_row_vector_closed_form():
    V = build_lzfbf(np.array([[3.0, 4.0]]))
    np.testing.assert_allclose(V.ravel(), [3 / 25, 4 / 25], rtol=1e-15)
    assert (np.array([[3.0, 4.0]]) @ V)[0, 0] == pytest.approx(1.0, abs=1e-15)
    assert beam_cost(V)[0] == pytest.approx(1 / 25)


def test_orthonormal_rows():
    Q, _ = np.linalg.qr(_cn(np.random.default_rng(0), 8, 8))
    H = Q[:3]
    V = build_lzfbf(H)
    np.testing.assert_allclose(V, H.conj().T, atol=1e-12)
    np.testing.assert_allclose(beam_cost(V), 1.0, atol=1e-12)


def test_random_residual_and_pinv_agreement():
    rng = np.random.default_rng(1)
    for _ in range(200):
        H = _cn(rng, 3, 8)
        V = build_lzfbf(H)
        assert np.linalg.norm(H @ V - np.eye(3)) <= 1e-9
        np.testing.assert_allclose(V, np.linalg.pinv(H), atol=1e-10)


def test_homogeneity():
    rng = np.random.default_rng(2)
    H = _cn(rng, 2, 8)
    c = 0.3 - 1.7j
    np.testing.assert_allclose(build_lzfbf(c * H), build_lzfbf(H) / c, rtol=1e-10)


def test_cost_grows_as_rows_align():
    rng = np.random.default_rng(3)
    a = _cn(rng, 1, 8)[0]
    b = _cn(rng, 1, 8)[0]
    prev = 0.0
    for eps in (1.0, 1e-1, 1e-2, 1e-3):
        H = np.vstack([a, a + eps * b])
        cost = beam_cost(build_lzfbf(H)).sum()
        sv = np.linalg.svd(H, compute_uv=False)
        # ||V||_F^2 = sum 1/sigma_i^2 >= 1/sigma_min^2
        assert cost == pytest.approx(np.sum(1 / sv ** 2), rel=1e-6)
        assert cost >= 1 / sv.min() ** 2
        assert cost > prev
        prev = cost


def test_rank_deficient_and_too_many_rows():
    a = np.ones(8, dtype=complex)
    with pytest.raises(SingularChannelError):
        build_lzfbf(np.vstack([a, 2 * a]))
    with pytest.raises(SingularChannelError):
        build_lzfbf(_cn(np.random.default_rng(0), 3, 2))


def test_enforce_budget_examples():
    costs = np.array([1.0, 2.0])
    p = np.array([1.0, 0.5])  # trace 2
    np.testing.assert_array_equal(enforce_budget(p, costs, 4.0), p)
    np.testing.assert_allclose(enforce_budget(p, costs, 1.0), p / 2)
    with pytest.raises(ValueError):
        enforce_budget([-1.0, 1.0], costs, 1.0)


@settings(max_examples=200)
@given(st.lists(st.floats(0, 1e3), min_size=1, max_size=5), st.floats(1e-6, 1e3),
       st.floats(1e-3, 1e3))
def test_enforce_budget_properties(ps, p_max, scale):
    p = np.array(ps)
    costs = np.linspace(0.5, 3.0, len(p))
    once = enforce_budget(p, costs, p_max)
    assert np.dot(once, costs) <= p_max + 1e-12 * max(1.0, p_max)
    np.testing.assert_allclose(enforce_budget(once, costs, p_max), once, rtol=1e-12)
    np.testing.assert_allclose(enforce_budget(scale * p, costs, scale * p_max), scale * once,
                               rtol=1e-9, atol=1e-300)


def test_precoder_trace_and_residual():
    rng = np.random.default_rng(4)
    H = _cn(rng, 2, 8)
    pre = Precoder(build_lzfbf(H), np.array([0.5, 2.0]))
    assert pre.trace() == pytest.approx(np.trace(np.diag(pre.power_diag) @ pre.beams.conj().T
                                                 @ pre.beams).real)
    assert pre.zf_residual(H) <= 1e-9


def test_gnb_subbands():
    rng = np.random.default_rng(5)
    h_uav = _cn(rng, 2, 8)
    h_ue = _cn(rng, 3, 8)
    bf = build_gnb_beamforming(h_uav, h_ue, active_uavs=(0, 1), tues=(0, 2))
    assert bf.n_subbands == 2
    for sb in bf.subbands:
        H = np.vstack([h_uav[0], h_uav[1], h_ue[sb.tue]])
        assert np.linalg.norm(H @ sb.beams - np.eye(3)) <= 1e-9
    # backhaul cost is averaged over the subbands it is spread across
    expected = np.mean([beam_cost(sb.beams)[1] for sb in bf.subbands])
    assert bf.bh_cost(1) == pytest.approx(expected)
    tx = bf.transmit_power({0: 1.0, 1: 2.0}, {0: 3.0, 2: 4.0})
    manual = sum(1.0 / 2 * beam_cost(sb.beams)[0] + 2.0 / 2 * beam_cost(sb.beams)[1]
                 + {0: 3.0, 2: 4.0}[sb.tue] * beam_cost(sb.beams)[2] for sb in bf.subbands)
    assert tx == pytest.approx(manual)
    with pytest.raises(KeyError):
        bf.subband_of_tue(1)


def test_backhaul_only_band():
    rng = np.random.default_rng(6)
    bf = build_gnb_beamforming(_cn(rng, 1, 8), _cn(rng, 2, 8), active_uavs=(0,), tues=())
    assert bf.n_subbands == 1 and bf.subbands[0].tue is None
    assert build_gnb_beamforming(_cn(rng, 1, 8), _cn(rng, 2, 8), (), ()).n_subbands == 0
