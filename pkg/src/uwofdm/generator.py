"""
UW-OFDM symbol generation.

Two ways of placing the unique word ``x_u`` at the tail of the IDFT output:

* two-step: load the redundant carriers so the tail is a zero word, then add
  ``[0; x_u]`` in the time domain;
* direct: load the redundant carriers so the tail *is* ``x_u``.

All generation functions accept a single data vector of length N_d or a batch
of shape ``(..., N_d)``.
"""

from dataclasses import dataclass

import numpy as np

from .config import SystemConfig, validate
from .linalg import (
    SingularMatrixError,
    carrier_insertion_matrix,
    dft_apply,
    idft_apply,
    invert,
    partition_generator,
    permutation_matrix,
    trace_of_gram,
)
from .sequences import UniqueWord


class ZeroWordError(RuntimeError):
    """Two-step intermediate symbol does not end in a zero word."""


@dataclass(frozen=True)
class GeneratorMatrices:
    config: SystemConfig
    m21: np.ndarray
    m22: np.ndarray
    m22_inv: np.ndarray
    t_matrix: np.ndarray
    g_matrix: np.ndarray
    b_matrix: np.ndarray
    p_matrix: np.ndarray

    @property
    def m22_condition(self) -> float:
        return float(np.linalg.cond(self.m22))

    @property
    def trace_tth(self) -> float:
        """``tr(T T^H)``; sets the redundant-carrier energy."""
        return trace_of_gram(self.t_matrix)


@dataclass(frozen=True)
class SymbolFrames:
    freq: np.ndarray
    time: np.ndarray
    data_symbols: np.ndarray
    redundant_symbols: np.ndarray


def build_generator(config: SystemConfig, max_condition: float = 1e12) -> GeneratorMatrices:
    """Derive M21, M22, T = -M22^{-1} M21 and G = P [I; T] for ``config``.

    Raises :class:`~uwofdm.linalg.SingularMatrixError` when the redundant
    carrier placement makes M22 singular, or so ill-conditioned
    (condition number above ``max_condition``) that T is meaningless.
    """
    validate(config)
    _, _, m21, m22 = partition_generator(config)
    placement = config.redundant_carrier_indices
    try:
        m22_inv = invert(m22)
    except SingularMatrixError as exc:
        raise SingularMatrixError(f"M22 is singular for redundant carriers {placement}") from exc
    cond = np.linalg.cond(m22)
    if cond > max_condition:
        raise SingularMatrixError(
            f"M22 condition number {cond:.2e} too large for redundant carriers {placement}")
    t = -m22_inv @ m21
    p = permutation_matrix(config)
    g = p @ np.vstack([np.eye(config.n_data), t])
    for a in (m21, m22, m22_inv, t, g):
        a.setflags(write=False)
    return GeneratorMatrices(config, m21, m22, m22_inv, t, g,
                             carrier_insertion_matrix(config), p)


def _insert_carriers(config: SystemConfig, used_values) -> np.ndarray:
    """Apply B: scatter used-carrier values onto the N DFT bins."""
    used_values = np.asarray(used_values)
    out = np.zeros(used_values.shape[:-1] + (config.n_total,), dtype=complex)
    out[..., list(config.used_carrier_indices)] = used_values
    return out


def _check_data(gen, data):
    data = np.asarray(data, dtype=complex)
    if data.shape[-1] != gen.config.n_data:
        raise ValueError(f"expected {gen.config.n_data} data symbols, got {data.shape[-1]}")
    return data


def _check_uw(gen, uw):
    if len(uw) != gen.config.n_uw:
        raise ValueError(f"unique word has {len(uw)} samples, expected {gen.config.n_uw}")
    return uw.samples


def _tail_pad(config, samples):
    padded = np.zeros(config.n_total, dtype=complex)
    padded[config.n_total - config.n_uw:] = samples
    return padded


def generate_two_step(gen: GeneratorMatrices, data, uw: UniqueWord,
                      strict: bool = True, tol: float = 1e-10) -> SymbolFrames:
    """Zero-word symbol from ``B G data``, then add the UW in the time domain.

    With ``strict`` the intermediate tail is checked against ``tol`` (scaled
    by the data RMS when that exceeds one) and :class:`ZeroWordError` is
    raised on failure.
    """
    cfg = gen.config
    data = _check_data(gen, data)
    x_u = _check_uw(gen, uw)
    x_prime = idft_apply(_insert_carriers(cfg, data @ gen.g_matrix.T))
    if strict:
        rms = np.sqrt(np.mean(np.abs(data) ** 2)) if data.size else 0.0
        residual = np.max(np.abs(x_prime[..., cfg.n_total - cfg.n_uw:]), initial=0.0)
        if residual > tol * max(1.0, rms):
            raise ZeroWordError(f"zero-word residual {residual:.3e} exceeds {tol:.1e}")
    time = x_prime + _tail_pad(cfg, x_u)
    return SymbolFrames(dft_apply(time), time, data, data @ gen.t_matrix.T)


def direct_uw_loading(gen: GeneratorMatrices, uw: UniqueWord) -> np.ndarray:
    """Used-carrier loading ``P [0; M22^{-1} x_u]`` (length N_d + N_r)."""
    x_u = _check_uw(gen, uw)
    return gen.p_matrix @ np.concatenate([np.zeros(gen.config.n_data), gen.m22_inv @ x_u])


def generate_direct(gen: GeneratorMatrices, data, uw: UniqueWord) -> SymbolFrames:
    """Redundant carriers ``T data + M22^{-1} x_u``; the IDFT tail is the UW itself."""
    cfg = gen.config
    data = _check_data(gen, data)
    x_u = _check_uw(gen, uw)
    redundant = data @ gen.t_matrix.T + gen.m22_inv @ x_u
    used = np.concatenate([data, redundant], axis=-1) @ gen.p_matrix.T
    freq = _insert_carriers(cfg, used)
    return SymbolFrames(freq, idft_apply(freq), data, redundant)


def uw_spectrum_two_step(uw: UniqueWord, n_total: int) -> np.ndarray:
    """``F_N [0; x_u]``: the UW as it enters every bin in the two-step approach."""
    padded = np.zeros(n_total, dtype=complex)
    padded[n_total - len(uw):] = uw.samples
    return dft_apply(padded)


def uw_spectrum_direct(gen: GeneratorMatrices, uw: UniqueWord) -> np.ndarray:
    """``F_N B P [0; M22^{-1} x_u]`` for the direct approach.

    The carrier-domain vector behind this spectrum is nonzero only on the
    redundant carriers. Because that vector is the IDFT input, transforming
    it forward gives ``N`` times the time-domain signal; the receiver only
    needs the carrier-domain loading, see :func:`uw_carrier_loading`.
    """
    return dft_apply(_insert_carriers(gen.config, direct_uw_loading(gen, uw)))


def uw_carrier_loading(gen: GeneratorMatrices, uw: UniqueWord, approach: str) -> np.ndarray:
    """UW contribution to the transmitted spectrum, on all N bins.

    For ``two_step`` this is ``F_N [0; x_u]``; for ``direct`` it is
    ``B P [0; M22^{-1} x_u]``, the part of the IDFT input caused by the UW.
    """
    if approach == "two_step":
        return uw_spectrum_two_step(uw, gen.config.n_total)
    if approach == "direct":
        return _insert_carriers(gen.config, direct_uw_loading(gen, uw))
    raise ValueError(f"unknown approach {approach!r}")


def greedy_redundant_placement(config: SystemConfig, max_passes: int = 20) -> SystemConfig:
    """Local search over redundant-carrier positions minimizing ``tr(T T^H)``.

    Starting from ``config``, repeatedly moves single redundant carriers to
    data positions while that lowers ``tr(T T^H)``. This is a convenience
    heuristic, not an optimal design.
    """
    def cost(red):
        try:
            return build_generator(config.replace(redundant_carrier_indices=tuple(sorted(red)))).trace_tth
        except SingularMatrixError:
            return np.inf

    red = list(config.redundant_carrier_indices)
    best = cost(red)
    for _ in range(max_passes):
        improved = False
        for i in range(len(red)):
            data = [k for k in config.used_carrier_indices if k not in red]
            for k in data:
                trial = red[:i] + [k] + red[i + 1:]
                c = cost(trial)
                if c < best - 1e-12:
                    best, red, improved = c, trial, True
        if not improved:
            break
    return config.replace(redundant_carrier_indices=tuple(sorted(red)))
