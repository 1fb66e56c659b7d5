import numpy as np
import pytest

from uwofdm import energy as en
from uwofdm.receiver import map_bits, qam
from uwofdm.sequences import UniqueWord, scale_to_fraction, zadoff_chu, zero_word
from conftest import crandn


def qpsk_data(seed, n):
    rng = np.random.default_rng(seed)
    return map_bits(rng.integers(0, 2, (n, 72)), qam(4))


def test_e_d_default(gen, cfg):
    e = en.energy_two_step(gen, cfg, zero_word(16))
    assert e.e_d == pytest.approx(36 / 64)
    assert e.e_u == 0 and e.excess == 0
    assert e.e_total == pytest.approx(e.e_d + e.e_r, rel=1e-12)


def test_e_r_against_monte_carlo(gen, cfg):
    e = en.energy_two_step(gen, cfg, zero_word(16))
    mc = en.monte_carlo_energy(gen, zero_word(16), "two_step", qpsk_data(1, 10**4))
    assert mc["redundant"] == pytest.approx(e.e_r, rel=0.02)


def test_direct_e_u_against_monte_carlo(gen, cfg):
    uw = zadoff_chu(16, 1)
    e = en.energy_direct(gen, cfg, uw)
    mc = en.monte_carlo_energy(gen, uw, "direct", qpsk_data(2, 10**4))
    assert mc["redundant"] - e.e_r == pytest.approx(e.e_u, rel=0.02)


def test_direct_zero_uw_equals_two_step(gen, cfg):
    a = en.energy_direct(gen, cfg, zero_word(16))
    b = en.energy_two_step(gen, cfg, zero_word(16))
    assert (a.e_d, a.e_r, a.e_u, a.e_total, a.excess) == (b.e_d, b.e_r, b.e_u, b.e_total, b.excess)


def test_breakdown_invariants(gen, cfg, rng):
    for _ in range(20):
        uw = UniqueWord(crandn(rng, 16))
        two, direct = en.energy_two_step(gen, cfg, uw), en.energy_direct(gen, cfg, uw)
        assert direct.e_u >= uw.energy
        assert direct.e_total >= two.e_total
        assert direct.excess == pytest.approx(direct.e_u - uw.energy)
        assert direct.e_r == two.e_r == en.energy_two_step(gen, cfg, zero_word(16)).e_r
        for e in (two, direct):
            assert e.e_total == pytest.approx(e.e_d + e.e_r + e.e_u, rel=1e-12)


def test_two_step_parseval_consistency(gen, cfg):
    uw = zadoff_chu(16, 3)
    base = en.energy_two_step(gen, cfg, zero_word(16))
    uw = scale_to_fraction(uw, cfg, base.e_d + base.e_r)
    e = en.energy_two_step(gen, cfg, uw)
    mc = en.monte_carlo_energy(gen, uw, "two_step", qpsk_data(3, 10**4))
    assert mc["time"] == pytest.approx(e.e_total, rel=0.02)
    assert e.e_u / e.e_total == pytest.approx(4 / 52, rel=1e-12)


def test_direct_time_energy_matches_analytic(gen, cfg):
    uw = zadoff_chu(16, 1)
    e = en.energy_direct(gen, cfg, uw)
    mc = en.monte_carlo_energy(gen, uw, "direct", qpsk_data(4, 10**4))
    assert mc["time"] == pytest.approx(e.e_total, rel=0.02)


def test_db_shift():
    assert en.db_shift(9.96, 1.25) == pytest.approx(9.01, abs=0.01)
    assert en.db_shift(3.3, 3.3) == 0
    assert en.db_shift(2, 1) == pytest.approx(3.0103, abs=1e-4)
    with pytest.raises(ValueError):
        en.db_shift(0, 1)


def test_verify_inequality(gen):
    assert en.check_inequality(gen, np.zeros(16)) == 1.0
    report = en.verify_inequality(gen, 1000, seed=5)
    assert report.violations == 0 and report.trials == 1000
    assert report.min_ratio >= 1 - 1e-12
    assert report.min_ratio <= report.mean_ratio <= report.max_ratio


def test_inequality_violation_is_reported(gen):
    from dataclasses import replace
    shrunk = replace(gen, m22_inv=gen.m22_inv * 1e-3)
    with pytest.raises(en.InequalityViolation) as info:
        en.check_inequality(shrunk, np.ones(16))
    assert info.value.uw.shape == (16,)
