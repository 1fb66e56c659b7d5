"""
Mean OFDM symbol energy for the two-step and direct UW generation approaches.

Both approaches share the data energy ``E_d = N_d sigma_d^2 / N`` and the
redundant energy ``E_r = sigma_d^2 tr(T T^H) / N``. They differ in the UW
term: the two-step symbol spends exactly ``x_u^H x_u``, the direct symbol
spends ``||M22^{-1} x_u||^2 / N``, which is never smaller. The difference is
reported as ``excess``.
"""

from dataclasses import dataclass

import numpy as np

from .config import SystemConfig
from .generator import GeneratorMatrices, generate_direct, generate_two_step
from .sequences import UniqueWord


@dataclass(frozen=True)
class EnergyBreakdown:
    e_d: float
    e_r: float
    e_u: float
    e_total: float
    approach: str
    excess: float = 0.0


def _shared_terms(gen: GeneratorMatrices, config: SystemConfig):
    n = config.n_total
    return config.n_data * config.sigma2_d / n, config.sigma2_d * gen.trace_tth / n


def energy_two_step(gen: GeneratorMatrices, config: SystemConfig, uw: UniqueWord) -> EnergyBreakdown:
    e_d, e_r = _shared_terms(gen, config)
    e_u = uw.energy
    return EnergyBreakdown(e_d, e_r, e_u, e_d + e_r + e_u, "two_step", 0.0)


def direct_uw_energy(gen: GeneratorMatrices, uw: UniqueWord) -> float:
    """``x_u^H M22^{-H} M22^{-1} x_u / N``."""
    v = gen.m22_inv @ uw.samples
    return float(np.vdot(v, v).real) / gen.config.n_total


def energy_direct(gen: GeneratorMatrices, config: SystemConfig, uw: UniqueWord) -> EnergyBreakdown:
    e_d, e_r = _shared_terms(gen, config)
    e_u = direct_uw_energy(gen, uw)
    # excess is nonnegative in exact arithmetic; clip rounding noise at uw = 0
    excess = max(e_u - uw.energy, 0.0)
    return EnergyBreakdown(e_d, e_r, e_u, e_d + e_r + e_u, "direct", excess)


def energy(gen: GeneratorMatrices, config: SystemConfig, uw: UniqueWord, approach: str) -> EnergyBreakdown:
    if approach == "two_step":
        return energy_two_step(gen, config, uw)
    if approach == "direct":
        return energy_direct(gen, config, uw)
    raise ValueError(f"unknown approach {approach!r}")


def db_shift(e_a: float, e_b: float) -> float:
    """Energy ratio ``e_a / e_b`` in dB."""
    if not (e_a > 0 and e_b > 0):
        raise ValueError("energies must be positive")
    return 10 * np.log10(e_a / e_b)


class InequalityViolation(AssertionError):
    def __init__(self, uw, lhs, rhs):
        super().__init__(f"x_u^H x_u = {lhs!r} > {rhs!r} for x_u = {np.array2string(uw, precision=17)}")
        self.uw = uw


@dataclass(frozen=True)
class InequalityReport:
    trials: int
    violations: int
    min_ratio: float
    mean_ratio: float
    max_ratio: float


def check_inequality(gen: GeneratorMatrices, samples, rtol: float = 1e-12) -> float:
    """Check ``x_u^H x_u <= ||M22^{-1} x_u||^2 / N`` for one UW; return the ratio rhs/lhs.

    A zero UW passes with ratio 1.
    """
    x_u = np.asarray(samples, dtype=complex)
    lhs = float(np.vdot(x_u, x_u).real)
    v = gen.m22_inv @ x_u
    rhs = float(np.vdot(v, v).real) / gen.config.n_total
    if rhs < lhs - rtol * lhs:
        raise InequalityViolation(x_u, lhs, rhs)
    return rhs / lhs if lhs > 0 else 1.0


def verify_inequality(gen: GeneratorMatrices, trials: int, seed: int = 0) -> InequalityReport:
    """Draw ``trials`` random complex Gaussian UWs and check the excess-energy inequality.

    Raises :class:`InequalityViolation` with the offending UW on the first
    failure.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    n_uw = gen.config.n_uw
    ratios = np.empty(trials)
    for i in range(trials):
        x_u = rng.standard_normal(n_uw) + 1j * rng.standard_normal(n_uw)
        ratios[i] = check_inequality(gen, x_u)
    return InequalityReport(trials, 0, float(ratios.min()), float(ratios.mean()), float(ratios.max()))


def monte_carlo_energy(gen: GeneratorMatrices, uw: UniqueWord, approach: str, data,
                       ) -> dict:
    """Sample means of the energy terms over a batch of data vectors (rows).

    Returns ``redundant`` (mean ``||x_r||^2 / N``) and ``time`` (mean ``||x||^2``).
    """
    n = gen.config.n_total
    if approach == "two_step":
        frames = generate_two_step(gen, data, uw)
    elif approach == "direct":
        frames = generate_direct(gen, data, uw)
    else:
        raise ValueError(f"unknown approach {approach!r}")
    red = np.mean(np.sum(np.abs(frames.redundant_symbols) ** 2, axis=-1)) / n
    time = np.mean(np.sum(np.abs(frames.time) ** 2, axis=-1))
    return {"redundant": float(red), "time": float(time)}
