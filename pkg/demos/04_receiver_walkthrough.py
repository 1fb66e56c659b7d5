"""
One symbol through the UW-OFDM chain, step by step
=================================================

Builds one direct-approach symbol, sends it over a short multipath channel
with noise and runs the four receiver steps by hand, then checks the result
against :func:`uwofdm.receiver.decode`.
"""

import numpy as np

import uwofdm
from uwofdm.channel import ChannelTaps, NoiseModel, freq_response, transmit
from uwofdm.generator import build_generator, generate_direct, uw_carrier_loading
from uwofdm.receiver import build_receiver, decode, demap, map_bits, qam

cfg = uwofdm.default_80211a_like()
gen = build_generator(cfg)
const = qam(4)
rng = np.random.default_rng(42)

bits = rng.integers(0, 2, 2 * cfg.n_data)
data = map_bits(bits, const)
uw = uwofdm.zadoff_chu(16, 1)
frames = generate_direct(gen, data, uw)
print("tail equals UW:", np.allclose(frames.time[-16:], uw.samples))

taps = ChannelTaps([0.9, 0.3 - 0.2j, 0.1j])
sigma2_n = 1e-3
r = transmit(frames.time, taps, NoiseModel(sigma2_n, seed=1))

#%% 1) DFT and drop the zero carriers.
used = list(cfg.used_carrier_indices)
y = np.fft.fft(r)[used]
#%% 2) Remove the UW contribution as seen through the channel.
h = freq_response(taps, cfg)
loading = uw_carrier_loading(gen, uw, "direct")[used]
y = y - h * loading
#%% 3) Zero-forcing per carrier.
y = y / h
#%% 4) Wiener smoothing.
op = build_receiver(gen, taps, sigma2_n, cfg.sigma2_d, uw_carrier_loading(gen, uw, "direct"))
estimate = op.wiener @ y

print("matches decode():", np.allclose(estimate, decode(r, op)))
print("bit errors:", int(np.sum(demap(estimate, const) != bits)))
print("symbol MSE:", float(np.mean(np.abs(estimate - data) ** 2)))
