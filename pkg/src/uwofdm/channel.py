"""
Per-symbol channel model ``r = H x + n`` with circulant H and complex AWGN.

Tap files use the same ``re im`` per-line format as sequence files.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg

from .config import SystemConfig, validate
from .linalg import dft_apply, idft_apply


class ChannelError(ValueError):
    pass


@dataclass(frozen=True)
class ChannelTaps:
    taps: np.ndarray
    label: str = "channel"

    def __post_init__(self):
        taps = np.array(self.taps, dtype=complex).reshape(-1)
        if taps.size < 1:
            raise ChannelError("channel needs at least one tap")
        if not np.all(np.isfinite(taps)):
            raise ChannelError("channel taps must be finite")
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    def __len__(self):
        return self.taps.size


@dataclass(frozen=True)
class NoiseModel:
    sigma2_n: float
    seed: int = 0

    def __post_init__(self):
        if not self.sigma2_n >= 0:
            raise ChannelError("sigma2_n must be >= 0")


def identity_channel() -> ChannelTaps:
    return ChannelTaps([1.0], "awgn")


def load_taps(path) -> ChannelTaps:
    path = Path(path)
    taps = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ChannelError(f"{path}:{lineno}: expected 're im'")
        try:
            taps.append(complex(float(parts[0]), float(parts[1])))
        except ValueError:
            raise ChannelError(f"{path}:{lineno}: not a number") from None
    return ChannelTaps(taps, path.stem)


def _padded(taps: ChannelTaps, n_total: int) -> np.ndarray:
    if len(taps) > n_total:
        raise ChannelError(f"{len(taps)} taps exceed the symbol length {n_total}")
    h = np.zeros(n_total, dtype=complex)
    h[:len(taps)] = taps.taps
    return h


def cyclic_matrix(taps: ChannelTaps, n_total: int) -> np.ndarray:
    """Circulant H whose first column is the zero-padded impulse response."""
    return scipy.linalg.circulant(_padded(taps, n_total))


def full_response(taps: ChannelTaps, n_total: int) -> np.ndarray:
    """Channel frequency response on all N bins, ``F_N h``."""
    return dft_apply(_padded(taps, n_total))


def freq_response(taps: ChannelTaps, config: SystemConfig, min_magnitude: float = 1e-12) -> np.ndarray:
    """Diagonal of ``B^T F_N H F_N^{-1} B``: the response on the used carriers.

    Raises :class:`ChannelError` when any used carrier is faded below
    ``min_magnitude``, since zero-forcing would divide by it.
    """
    validate(config)
    if len(taps) > config.n_uw:
        raise ChannelError(f"{len(taps)} taps exceed the guard length {config.n_uw}")
    h = full_response(taps, config.n_total)[list(config.used_carrier_indices)]
    weak = np.flatnonzero(np.abs(h) < min_magnitude)
    if weak.size:
        bins = [config.used_carrier_indices[i] for i in weak]
        raise ChannelError(f"channel response vanishes on used carriers {bins}")
    return h


def complex_noise(rng: np.random.Generator, shape, sigma2_n: float) -> np.ndarray:
    """Circular complex Gaussian samples with variance ``sigma2_n``."""
    scale = np.sqrt(sigma2_n / 2)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def apply_channel(time_signal, taps: ChannelTaps) -> np.ndarray:
    """Noiseless cyclic convolution along the last axis."""
    x = np.asarray(time_signal, dtype=complex)
    if len(taps) == 1:
        return taps.taps[0] * x
    return idft_apply(dft_apply(x) * full_response(taps, x.shape[-1]))


def transmit(time_signal, taps: ChannelTaps, noise: NoiseModel,
             rng: np.random.Generator | None = None) -> np.ndarray:
    """Return ``H x + n``.

    The noise is drawn from ``rng`` when given, otherwise from a fresh
    generator seeded with ``noise.seed`` so repeated calls are identical.
    """
    x = np.asarray(time_signal, dtype=complex)
    out = apply_channel(x, taps)
    if noise.sigma2_n > 0:
        if rng is None:
            rng = np.random.default_rng(noise.seed)
        out = out + complex_noise(rng, x.shape, noise.sigma2_n)
    return out
