import math

import numpy as np
import pytest

from uwofdm import receiver as rx
from uwofdm.channel import ChannelTaps, NoiseModel, identity_channel, transmit
from uwofdm.generator import generate_direct, generate_two_step, uw_carrier_loading
from uwofdm.linalg import SingularMatrixError
from uwofdm.sequences import UniqueWord, zadoff_chu, zero_word
from conftest import crandn


def q_function(x):
    return 0.5 * math.erfc(x / math.sqrt(2))


# -- constellations ---------------------------------------------------------

def test_qpsk_table():
    c = rx.qam(4)
    assert rx.map_bits([0, 0], c)[0] == pytest.approx((1 + 1j) / np.sqrt(2))
    assert rx.map_bits([0, 0], rx.qam(4, 2.0))[0] == pytest.approx((1 + 1j))
    pts = rx.map_bits([0, 0, 0, 1, 1, 0, 1, 1], c)
    assert abs(np.mean(pts)) < 1e-15
    assert np.mean(np.abs(pts) ** 2) == pytest.approx(1.0)


@pytest.mark.parametrize("order", [4, 16])
def test_gray_adjacency_and_energy(order):
    c = rx.qam(order, 2.5)
    assert abs(np.mean(c.points)) < 1e-12
    assert np.mean(np.abs(c.points) ** 2) == pytest.approx(2.5)
    dist = np.abs(c.points[:, None] - c.points[None, :])
    dmin = np.min(dist[dist > 0])
    for a, b in zip(*np.nonzero(np.isclose(dist, dmin))):
        assert bin(a ^ b).count("1") == 1


def test_map_bits_statistics(rng):
    c = rx.qam(4)
    sym = rx.map_bits(rng.integers(0, 2, 2 * 10**5), c)
    assert abs(np.mean(sym)) < 0.02
    assert 0.98 <= np.mean(np.abs(sym) ** 2) <= 1.02


def test_map_bits_rejects_partial_symbol():
    with pytest.raises(ValueError):
        rx.map_bits([0, 1, 1], rx.qam(4))


@pytest.mark.parametrize("order", [4, 16])
def test_demap_roundtrip(order, rng):
    c = rx.qam(order)
    bits = rng.integers(0, 2, (7, 40 * c.bits_per_symbol)).astype(np.uint8)
    assert np.array_equal(rx.demap(rx.map_bits(bits, c), c), bits)
    labels = np.arange(order)
    assert np.array_equal(rx.demap(c.points, c).reshape(order, -1) @ (1 << np.arange(c.bits_per_symbol)[::-1]),
                          labels)


def test_demap_nearest_and_ties():
    c = rx.qam(4)
    assert list(rx.demap([0.9 + 0.8j], c)) == [0, 0]
    # origin is equidistant from all four points -> lowest label
    assert list(rx.demap([0j], c)) == [0, 0]


# -- Wiener smoother ----------------------------------------------------------

def literal_smoother(g, h, sigma2_n, sigma2_d, n):
    reg = n * sigma2_n / sigma2_d * np.diag(1 / np.abs(h) ** 2)
    return g.conj().T @ np.linalg.inv(g @ g.conj().T + reg)


def test_smoother_matches_literal_formula(gen, rng):
    h = crandn(rng, 52) + 2
    w = rx.wiener_smoother(gen.g_matrix, h, 0.05, 1.0, 64)
    assert np.allclose(w, literal_smoother(gen.g_matrix, h, 0.05, 1.0, 64), atol=1e-9)


def test_smoother_zero_noise_limit(gen):
    w = rx.wiener_smoother(gen.g_matrix, np.ones(52), 1e-12, 1.0, 64)
    assert np.max(np.abs(w @ gen.g_matrix - np.eye(36))) < 1e-5
    assert np.allclose(w, np.linalg.pinv(gen.g_matrix), atol=1e-5)


def test_smoother_shrinks_with_noise(gen):
    norms = [np.linalg.norm(rx.wiener_smoother(gen.g_matrix, np.ones(52), s, 1.0, 64), 2)
             for s in (1e-3, 1e-2, 1e-1, 1.0)]
    assert all(b < a for a, b in zip(norms, norms[1:]))


def test_smoother_orthonormal_g(rng):
    q, _ = np.linalg.qr(crandn(rng, 52, 36))
    w = rx.wiener_smoother(q, np.ones(52), 1e-12, 1.0, 64)
    assert np.allclose(w, q.conj().T, atol=1e-9)


def test_smoother_requires_noise_floor(gen):
    with pytest.raises(SingularMatrixError, match="positive"):
        rx.wiener_smoother(gen.g_matrix, np.ones(52), 0.0, 1.0, 64)


# -- decoding -----------------------------------------------------------------

def _loopback(gen, approach, taps, data, uw, sigma2_n=1e-12):
    fn = generate_two_step if approach == "two_step" else generate_direct
    r = transmit(fn(gen, data, uw).time, taps, NoiseModel(0.0))
    op = rx.build_receiver(gen, taps, sigma2_n, 1.0, uw_carrier_loading(gen, uw, approach))
    return rx.decode(r, op)


@pytest.mark.parametrize("approach", ["two_step", "direct"])
def test_noiseless_loopback_identity(gen, rng, approach):
    d = rx.map_bits(rng.integers(0, 2, 72), rx.qam(4))
    est = _loopback(gen, approach, identity_channel(), d, zadoff_chu(16, 1))
    assert np.max(np.abs(est - d)) < 1e-5


@pytest.mark.parametrize("approach", ["two_step", "direct"])
def test_estimator_consistency_random_channels(gen, approach):
    rng = np.random.default_rng(99)
    for _ in range(100):
        taps = ChannelTaps(crandn(rng, 4) / 2 + np.array([1, 0, 0, 0]))
        d = crandn(rng, 36) / np.sqrt(2)
        uw = UniqueWord(crandn(rng, 16) * 0.3)
        est = _loopback(gen, approach, taps, d, uw)
        assert np.max(np.abs(est - d)) < 1e-5


def test_zero_input_decodes_to_zero(gen):
    op = rx.build_receiver(gen, identity_channel(), 0.1, 1.0, np.zeros(64))
    assert np.all(rx.decode(np.zeros(64), op) == 0)


def test_decode_linear_in_received(gen, rng):
    op = rx.build_receiver(gen, ChannelTaps([1, 0.3j]), 0.1, 1.0, np.zeros(64))
    a, b = crandn(rng, 64), crandn(rng, 64)
    assert np.allclose(rx.decode(a + 2 * b, op), rx.decode(a, op) + 2 * rx.decode(b, op))


def test_mismatched_uw_pairing_is_worse(gen, cfg):
    rng = np.random.default_rng(7)
    uw = zadoff_chu(16, 1)
    uw = UniqueWord(uw.samples * 0.15)
    c = rx.qam(4)
    d = rx.map_bits(rng.integers(0, 2, (200, 72)), c)
    r = transmit(generate_direct(gen, d, uw).time, identity_channel(), NoiseModel(1e-6, seed=1))
    right = rx.build_receiver(gen, identity_channel(), 1e-6, 1.0, uw_carrier_loading(gen, uw, "direct"))
    wrong = rx.build_receiver(gen, identity_channel(), 1e-6, 1.0, uw_carrier_loading(gen, uw, "two_step"))
    mse_right = np.mean(np.abs(rx.decode(r, right) - d) ** 2)
    mse_wrong = np.mean(np.abs(rx.decode(r, wrong) - d) ** 2)
    assert mse_wrong > 10 * mse_right


def test_decode_rejects_wrong_length(gen):
    op = rx.build_receiver(gen, identity_channel(), 0.1, 1.0, np.zeros(64))
    with pytest.raises(ValueError):
        rx.decode(np.zeros(63), op)


# -- CP-OFDM reference ------------------------------------------------------

def test_cp_layout():
    layout = rx.CpOfdmLayout()
    assert layout.n_data == 48
    assert rx.cp_symbol_energy(layout) == pytest.approx(52 / 64 * 80 / 64)
    assert rx.cp_symbol_energy(layout, count_overhead=False) == pytest.approx(48 / 64)


@pytest.mark.parametrize("taps", [identity_channel(), ChannelTaps([0.8, 0.0, 0.4 - 0.3j, 0.1])])
def test_cp_noiseless_bit_exact(rng, taps):
    bits = rng.integers(0, 2, (20, 96)).astype(np.uint8)
    out = rx.cp_ofdm_reference(bits, taps, NoiseModel(0.0))
    assert np.array_equal(out, bits)


def test_cp_awgn_matches_closed_form_with_overhead(rng):
    layout = rx.CpOfdmLayout()
    ebn0 = 10 ** (4 / 10)
    e_total = rx.cp_symbol_energy(layout)
    sigma2_n = e_total / (48 * 2) / ebn0
    bits = rng.integers(0, 2, (4000, 96)).astype(np.uint8)
    out = rx.cp_ofdm_reference(bits, identity_channel(), NoiseModel(sigma2_n), rng=rng)
    ber = np.mean(out != bits)
    overhead = e_total / rx.cp_symbol_energy(layout, count_overhead=False)
    expected = q_function(math.sqrt(2 * ebn0 / overhead))
    assert np.count_nonzero(out != bits) > 1000
    assert ber == pytest.approx(expected, rel=0.1)


def test_cp_deterministic(rng):
    bits = rng.integers(0, 2, (50, 96)).astype(np.uint8)
    noise = NoiseModel(0.02, seed=11)
    a = rx.cp_ofdm_reference(bits, identity_channel(), noise)
    b = rx.cp_ofdm_reference(bits, identity_channel(), noise)
    assert np.array_equal(a, b)
