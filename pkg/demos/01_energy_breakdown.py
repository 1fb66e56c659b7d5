"""
Symbol energy of the two-step and the direct approach
=====================================================

Every UW is first scaled so that, in the two-step approach, it takes 4/52 of
the symbol energy. The two-step approach then spends the same energy for any
UW; the direct approach spends ``||M22^{-1} x_u||^2 / N`` on the UW, which is
never less than ``x_u^H x_u``.

Run with ``python demos/01_energy_breakdown.py``.
"""

import numpy as np

import uwofdm
from uwofdm.config import load_config
from uwofdm.energy import db_shift, energy_direct, energy_two_step
from uwofdm.generator import build_generator
from uwofdm.sequences import UniqueWord, scale_to_fraction, zadoff_chu, zero_word

#%% Two redundant-carrier placements: the evenly spaced default and a
# greedy placement that lowers tr(T T^H).
configs = {
    "even": uwofdm.default_80211a_like(),
    "greedy": load_config(uwofdm.data_file("greedy_80211a_like.cfg")),
}

#%% Candidate UWs. A length-12 sequence padded with four zeros stands in for
# sequences that are only available from files.
rng = np.random.default_rng(0)
padded = np.zeros(16, dtype=complex)
padded[:12] = np.exp(2j * np.pi * rng.integers(0, 4, 12) / 4)
candidates = [zadoff_chu(16, 1), zadoff_chu(16, 3), UniqueWord(padded, "qpsk12_padded")]

for name, cfg in configs.items():
    gen = build_generator(cfg)
    base = energy_two_step(gen, cfg, zero_word(16))
    print(f"\n{name} placement  cond(M22) = {gen.m22_condition:.1f}")
    print(f"  zero word            E_d={base.e_d:.4f}  E_r={base.e_r:.4f}  E_x={base.e_total:.4f}")
    for uw in candidates:
        uw = scale_to_fraction(uw, cfg, base.e_d + base.e_r)
        two = energy_two_step(gen, cfg, uw)
        direct = energy_direct(gen, cfg, uw)
        print(f"  {uw.label:<14} two-step E_x={two.e_total:.4f} (E_u={two.e_u:.4f})   "
              f"direct E_x={direct.e_total:9.4f} (excess {direct.excess:9.4f})   "
              f"ratio {db_shift(direct.e_total, two.e_total):5.2f} dB")
