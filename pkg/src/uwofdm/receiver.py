"""
UW-OFDM receiver, QAM mapping and an uncoded CP-OFDM reference chain.

Decoding follows four steps: DFT and removal of the zero carriers,
subtraction of the (channel-weighted) UW contribution, per-carrier
zero-forcing, and the LMMSE Wiener smoother

    W = G^H (G G^H + (N sigma_n^2 / sigma_d^2) (H^H H)^{-1})^{-1}.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.signal

from .channel import ChannelTaps, NoiseModel, complex_noise, freq_response
from .config import SystemConfig
from .generator import GeneratorMatrices
from .linalg import SingularMatrixError, dft_apply, idft_apply, invert


# -- constellations ---------------------------------------------------------

# Gray-coded amplitude levels per axis, indexed by the axis label.
_AXIS_LEVELS = {
    1: np.array([1.0, -1.0]),
    2: np.array([-3.0, -1.0, 3.0, 1.0]),
}


@dataclass(frozen=True)
class Constellation:
    """Square Gray-mapped QAM; ``points[label]`` is the symbol for ``label``.

    Label bits are MSB first; the upper half of the bits selects the in-phase
    level, the lower half the quadrature level.
    """
    order: int
    points: np.ndarray = field(repr=False)

    @property
    def bits_per_symbol(self) -> int:
        return int(np.log2(self.order))


def qam(order: int = 4, sigma2_d: float = 1.0) -> Constellation:
    """Gray-mapped QPSK (``order=4``) or 16-QAM with average energy ``sigma2_d``."""
    if order not in (4, 16):
        raise ValueError("only QPSK (4) and 16-QAM (16) are supported")
    half = int(np.log2(order)) // 2
    levels = _AXIS_LEVELS[half]
    labels = np.arange(order)
    i_level = levels[labels >> half]
    q_level = levels[labels & ((1 << half) - 1)]
    points = i_level + 1j * q_level
    points = points / np.sqrt(np.mean(np.abs(points) ** 2)) * np.sqrt(sigma2_d)
    points.setflags(write=False)
    return Constellation(order, points)


def _labels_from_bits(bits, m):
    bits = np.asarray(bits, dtype=np.int64)
    if bits.shape[-1] % m:
        raise ValueError(f"bit count {bits.shape[-1]} not divisible by {m}")
    groups = bits.reshape(bits.shape[:-1] + (-1, m))
    return groups @ (1 << np.arange(m - 1, -1, -1))


def map_bits(bits, constellation: Constellation) -> np.ndarray:
    """Map bits (last axis) to Gray-coded symbols."""
    return constellation.points[_labels_from_bits(bits, constellation.bits_per_symbol)]


def demap(symbols, constellation: Constellation) -> np.ndarray:
    """Minimum-distance hard decisions; ties go to the lower label."""
    symbols = np.asarray(symbols, dtype=complex)
    dist = np.abs(symbols[..., None] - constellation.points) ** 2
    labels = np.argmin(dist, axis=-1)
    m = constellation.bits_per_symbol
    bits = (labels[..., None] >> np.arange(m - 1, -1, -1)) & 1
    return bits.reshape(symbols.shape[:-1] + (-1,)).astype(np.uint8)


# -- UW-OFDM receiver -------------------------------------------------------

@dataclass(frozen=True)
class ReceiverOperator:
    config: SystemConfig
    wiener: np.ndarray
    h_used: np.ndarray
    uw_freq_used: np.ndarray


def wiener_smoother(g_matrix, h_used, sigma2_n: float, sigma2_d: float, n_total: int) -> np.ndarray:
    """LMMSE smoother ``G^H (G G^H + eps (H^H H)^{-1})^{-1}``, ``eps = N sigma_n^2 / sigma_d^2``.

    Evaluated through the equivalent form
    ``(G^H |H|^2 G + eps I)^{-1} G^H |H|^2``, which only inverts an
    N_d x N_d matrix and stays well conditioned as ``sigma_n^2 -> 0``.
    """
    if not sigma2_n > 0:
        raise SingularMatrixError(
            "sigma2_n must be positive: G G^H is rank deficient without a noise floor")
    if not sigma2_d > 0:
        raise ValueError("sigma2_d must be positive")
    g = np.asarray(g_matrix, dtype=complex)
    gain = np.abs(np.asarray(h_used)) ** 2
    eps = n_total * sigma2_n / sigma2_d
    gh_d = g.conj().T * gain
    inner = gh_d @ g + eps * np.eye(g.shape[1])
    return invert(inner) @ gh_d


def build_receiver(gen: GeneratorMatrices, taps: ChannelTaps, sigma2_n: float,
                   sigma2_d: float, uw_spectrum) -> ReceiverOperator:
    """Precompute the smoother, used-carrier channel response and UW term.

    ``uw_spectrum`` is the UW contribution to the transmitted spectrum on all
    N bins and must match the generation approach; see
    :func:`uwofdm.generator.uw_carrier_loading`.
    """
    cfg = gen.config
    h_used = freq_response(taps, cfg)
    wiener = wiener_smoother(gen.g_matrix, h_used, sigma2_n, sigma2_d, cfg.n_total)
    uw_used = np.asarray(uw_spectrum, dtype=complex)[list(cfg.used_carrier_indices)]
    for a in (wiener, h_used, uw_used):
        a.setflags(write=False)
    return ReceiverOperator(cfg, wiener, h_used, uw_used)


def decode(received, rx: ReceiverOperator) -> np.ndarray:
    """Estimate the data symbols from received time-domain symbol(s)."""
    cfg = rx.config
    received = np.asarray(received, dtype=complex)
    if received.shape[-1] != cfg.n_total:
        raise ValueError(f"expected {cfg.n_total} samples, got {received.shape[-1]}")
    y = dft_apply(received)[..., list(cfg.used_carrier_indices)]
    y = (y - rx.h_used * rx.uw_freq_used) / rx.h_used
    return y @ rx.wiener.T


# -- CP-OFDM reference ------------------------------------------------------

@dataclass(frozen=True)
class CpOfdmLayout:
    """802.11a-like CP-OFDM symbol: 64 bins, 16-sample CP, 48 data + 4 pilots."""
    n_total: int = 64
    cp_len: int = 16
    zero_carrier_indices: tuple = (0,) + tuple(range(27, 38))
    pilot_carrier_indices: tuple = (7, 21, 43, 57)
    pilot_values: tuple = (1.0, 1.0, 1.0, -1.0)

    @property
    def data_carrier_indices(self) -> tuple:
        taken = set(self.zero_carrier_indices) | set(self.pilot_carrier_indices)
        return tuple(k for k in range(self.n_total) if k not in taken)

    @property
    def n_data(self) -> int:
        return len(self.data_carrier_indices)


def cp_symbol_energy(layout: CpOfdmLayout, sigma2_d: float = 1.0, count_overhead: bool = True) -> float:
    """Mean transmitted energy per CP-OFDM symbol.

    With ``count_overhead`` the pilots and the cyclic prefix are included;
    otherwise only the data carriers inside the DFT interval are counted.
    """
    n = layout.n_total
    if not count_overhead:
        return layout.n_data * sigma2_d / n
    used = layout.n_data + len(layout.pilot_carrier_indices)
    return used * sigma2_d / n * (n + layout.cp_len) / n


def cp_ofdm_modulate(bits, layout: CpOfdmLayout, constellation: Constellation) -> np.ndarray:
    """Bits -> CP-OFDM symbols of length ``n_total + cp_len`` (one per row)."""
    per_symbol = layout.n_data * constellation.bits_per_symbol
    bits = np.asarray(bits).reshape(-1, per_symbol)
    sigma2_d = np.mean(np.abs(constellation.points) ** 2)
    freq = np.zeros((bits.shape[0], layout.n_total), dtype=complex)
    freq[:, list(layout.data_carrier_indices)] = map_bits(bits, constellation)
    freq[:, list(layout.pilot_carrier_indices)] = np.sqrt(sigma2_d) * np.array(layout.pilot_values)
    time = idft_apply(freq)
    return np.concatenate([time[:, -layout.cp_len:], time], axis=1)


def cp_ofdm_reference(bits, taps: ChannelTaps, noise: NoiseModel,
                      layout: CpOfdmLayout = CpOfdmLayout(),
                      constellation: Constellation | None = None,
                      rng: np.random.Generator | None = None) -> np.ndarray:
    """Uncoded CP-OFDM chain: map, IDFT, CP, channel + AWGN, DFT, ZF, demap.

    The channel linearly convolves each CP-extended symbol (no inter-symbol
    carry-over); with ``len(taps) <= cp_len + 1`` this is cyclic over the DFT
    interval.
    Pilots carry known symbols but are not used by the receiver.
    """
    if constellation is None:
        constellation = qam(4)
    if len(taps) > layout.cp_len + 1:
        raise ValueError("channel longer than the cyclic prefix")
    tx = cp_ofdm_modulate(bits, layout, constellation)
    rx = scipy.signal.lfilter(taps.taps, [1.0], tx, axis=-1)
    if noise.sigma2_n > 0:
        if rng is None:
            rng = np.random.default_rng(noise.seed)
        rx = rx + complex_noise(rng, rx.shape, noise.sigma2_n)
    y = dft_apply(rx[:, layout.cp_len:])
    h_freq = dft_apply(np.pad(taps.taps, (0, layout.n_total - len(taps))))
    data = list(layout.data_carrier_indices)
    if np.min(np.abs(h_freq[data])) < 1e-12:
        raise ValueError("channel response vanishes on a data carrier")
    est = y[:, data] / h_freq[data]
    return demap(est, constellation).reshape(np.shape(bits))
