"""
Dense complex linear algebra used throughout the package.

DFT convention: the forward transform is unnormalized,
``[F_N]_{m,k} = exp(-j 2 pi m k / N)``, and the inverse carries the ``1/N``
factor, ``F_N^{-1} = F_N^H / N``. This matches ``numpy.fft.fft``/``ifft``,
which the batched code paths use directly.
"""

import warnings

import numpy as np
import scipy.linalg

from .config import SystemConfig, validate


class SingularMatrixError(np.linalg.LinAlgError):
    """Matrix is singular to working precision."""


def dft_matrix(n: int) -> np.ndarray:
    """Return the unnormalized ``n``-point DFT matrix."""
    if n < 1:
        raise ValueError("DFT length must be >= 1")
    k = np.arange(n)
    # reduce m*k mod n before the exponential to keep the phase exact
    return np.exp(-2j * np.pi * (np.outer(k, k) % n) / n)


def idft_matrix(n: int) -> np.ndarray:
    return dft_matrix(n).conj().T / n


def dft_apply(signal) -> np.ndarray:
    """Forward DFT along the last axis."""
    signal = np.asarray(signal, dtype=complex)
    if signal.shape[-1] == 0:
        raise ValueError("empty input")
    return np.fft.fft(signal, axis=-1)


def idft_apply(spectrum) -> np.ndarray:
    """Inverse DFT along the last axis, ``(1/N) F_N^H spectrum``."""
    spectrum = np.asarray(spectrum, dtype=complex)
    if spectrum.shape[-1] == 0:
        raise ValueError("empty input")
    return np.fft.ifft(spectrum, axis=-1)


def carrier_insertion_matrix(config: SystemConfig) -> np.ndarray:
    """0/1 matrix B (N x (N_d+N_r)) scattering used carriers onto DFT bins."""
    used = config.used_carrier_indices
    b = np.zeros((config.n_total, len(used)))
    b[list(used), np.arange(len(used))] = 1.0
    return b


def permutation_matrix(config: SystemConfig) -> np.ndarray:
    """0/1 matrix P mapping ``[data; redundant]`` onto used-carrier order.

    ``data[i]`` lands on the i-th data bin (ascending), the j-th redundant
    value on the j-th redundant bin.
    """
    rank = {k: r for r, k in enumerate(config.used_carrier_indices)}
    order = list(config.data_carrier_indices) + list(config.redundant_carrier_indices)
    n = len(order)
    p = np.zeros((n, n))
    p[[rank[k] for k in order], np.arange(n)] = 1.0
    return p


def generator_operator(config: SystemConfig) -> np.ndarray:
    """The full N x (N_d+N_r) matrix ``F_N^{-1} B P``."""
    return idft_matrix(config.n_total) @ carrier_insertion_matrix(config) @ permutation_matrix(config)


def partition_generator(config: SystemConfig):
    """Split ``F_N^{-1} B P`` into ``(M11, M12, M21, M22)``.

    Rows split after ``N - N_u``, columns after ``N_d``; M22 is N_u x N_r.
    """
    validate(config)
    full = generator_operator(config)
    r, c = config.n_total - config.n_uw, config.n_data
    return full[:r, :c], full[:r, c:], full[r:, :c], full[r:, c:]


def invert(m) -> np.ndarray:
    """Invert a square matrix by LU decomposition with partial pivoting.

    Raises :class:`SingularMatrixError` when a pivot falls below
    ``1e-13 * max|m|``.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    scale = np.max(np.abs(m)) if m.size else 0.0
    if scale == 0.0:
        raise SingularMatrixError("zero matrix")
    with warnings.catch_warnings():
        # exact singularity is reported below with our own threshold
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(m, check_finite=False)
    if np.min(np.abs(np.diag(lu))) < 1e-13 * scale:
        raise SingularMatrixError("matrix is singular to working precision")
    return scipy.linalg.lu_solve((lu, piv), np.eye(m.shape[0], dtype=complex),
                                 check_finite=False)


def trace_of_gram(m) -> float:
    """``tr(M M^H)``, i.e. the squared Frobenius norm."""
    m = np.asarray(m)
    return float(np.sum(np.abs(m) ** 2))


def hermitian(m) -> np.ndarray:
    return np.conj(np.swapaxes(np.asarray(m), -1, -2))
