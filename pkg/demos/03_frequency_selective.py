"""
UW-OFDM vs. CP-OFDM on frequency-selective channels
===================================================

The receiver knows the channel. CP-OFDM equalizes each carrier on its own,
so a deep notch destroys the bits on the faded carriers. The UW-OFDM Wiener
smoother uses the redundancy that the zero-word constraint puts on the
carriers and recovers data from faded carriers.

The tap files in ``uwofdm/data`` are made up for illustration; they are not
measured channels.

Run with ``python demos/03_frequency_selective.py``.
"""

import numpy as np

import uwofdm
from uwofdm.channel import freq_response, load_taps
from uwofdm.config import load_config
from uwofdm.simulation import make_link, run_point

cfg = load_config(uwofdm.data_file("greedy_80211a_like.cfg"))
uw = uwofdm.zadoff_chu(16, 1)

for name in ("taps_illustrative_faded.txt", "taps_illustrative_mild.txt"):
    taps = load_taps(uwofdm.data_file(name))
    h = np.abs(freq_response(taps, cfg))
    print(f"\n{taps.label}: |H| on used carriers in [{h.min():.3f}, {h.max():.3f}]")
    for approach in ("two_step", "cp_reference"):
        link = make_link(cfg, approach, uw, taps=taps)
        row = [run_point(link, e, 300, 5 * 10**5, seed=3) for e in (10.0, 15.0, 20.0, 25.0)]
        print(f"  {approach:<13}" + "".join(f"  {p.ebn0_db:4.0f} dB: {p.ber:.2e}" for p in row))
