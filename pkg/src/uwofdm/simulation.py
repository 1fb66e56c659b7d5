"""
Monte Carlo bit error rate sweeps over Eb/N0.

Eb counts *all* transmitted energy per information bit: data, redundant
carriers and UW for UW-OFDM; data, pilots and cyclic prefix for the CP-OFDM
reference (unless ``cp_count_overhead`` is off). With this accounting the
direct approach's excess energy shows up as a horizontal shift of its BER
curve by ``10 log10(E_direct / E_two_step)``.

Trials run in fixed-size chunks. Chunk ``i`` of a point draws from a
generator seeded by ``(seed, hash(approach, uw, Eb/N0), i)`` and chunk
results are merged in index order, so a sweep is reproducible regardless of
the number of worker threads.
"""

import csv
import logging
import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .channel import ChannelTaps, NoiseModel, apply_channel, complex_noise, identity_channel
from .config import SystemConfig
from .energy import EnergyBreakdown, energy
from .generator import (
    build_generator,
    generate_direct,
    generate_two_step,
    uw_carrier_loading,
)
from .receiver import (
    CpOfdmLayout,
    build_receiver,
    cp_ofdm_reference,
    cp_symbol_energy,
    decode,
    demap,
    map_bits,
    qam,
)
from .sequences import SequenceSpec, UniqueWord, scale_to_fraction

log = logging.getLogger(__name__)

APPROACHES = ("two_step", "direct", "cp_reference")


def noise_variance(e_total: float, n_info_carriers: int, ebn0_db: float, bits_per_symbol: int) -> float:
    """``N0`` for a symbol energy spread over ``n_info_carriers * bits_per_symbol`` bits."""
    eb = e_total / (n_info_carriers * bits_per_symbol)
    return eb / 10 ** (ebn0_db / 10)


def calibrate_noise(config: SystemConfig, energy: EnergyBreakdown, ebn0_db: float,
                    bits_per_symbol: int) -> float:
    """Complex noise variance per sample that realizes ``ebn0_db``."""
    if not energy.e_total > 0:
        raise ValueError("symbol energy must be positive")
    return noise_variance(energy.e_total, config.n_data, ebn0_db, bits_per_symbol)


def wilson_interval(errors: int, trials: int, z: float = 1.96):
    if trials == 0:
        return 0.0, 1.0
    p = errors / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass(frozen=True)
class BerPoint:
    ebn0_db: float
    ber: float
    bits_simulated: int
    bit_errors: int
    approach: str
    uw_label: str
    sigma2_n: float = 0.0

    @property
    def confidence_interval(self):
        """95 % Wilson score interval of the BER."""
        return wilson_interval(self.bit_errors, self.bits_simulated)

    @property
    def standard_error(self) -> float:
        n = self.bits_simulated
        return math.sqrt(self.ber * (1 - self.ber) / n) if n else 0.0


@dataclass(frozen=True)
class Link:
    """One simulated transmission chain: approach, UW, channel, modulation."""
    approach: str
    label: str
    taps: ChannelTaps
    order: int
    e_total: float
    n_info_carriers: int
    config: SystemConfig | None = None
    gen: object = None
    uw: UniqueWord | None = None
    layout: CpOfdmLayout | None = None

    @property
    def bits_per_symbol(self) -> int:
        return self.n_info_carriers * int(math.log2(self.order))

    def noise_for(self, ebn0_db: float) -> float:
        return noise_variance(self.e_total, self.n_info_carriers, ebn0_db, int(math.log2(self.order)))

    def run_chunk(self, sigma2_n: float, n_symbols: int, rng: np.random.Generator, rx=None):
        """Simulate ``n_symbols`` OFDM symbols; return ``(bits, bit_errors)``."""
        bits = rng.integers(0, 2, size=(n_symbols, self.bits_per_symbol), dtype=np.uint8)
        if self.approach == "cp_reference":
            const = qam(self.order)
            decided = cp_ofdm_reference(bits, self.taps, NoiseModel(sigma2_n), self.layout,
                                        const, rng=rng)
            return bits.size, int(np.count_nonzero(decided != bits))
        const = qam(self.order, self.config.sigma2_d)
        data = map_bits(bits, const)
        if self.approach == "two_step":
            frames = generate_two_step(self.gen, data, self.uw)
        else:
            frames = generate_direct(self.gen, data, self.uw)
        r = apply_channel(frames.time, self.taps)
        if sigma2_n > 0:
            r = r + complex_noise(rng, r.shape, sigma2_n)
        if rx is None:
            rx = self.receiver(sigma2_n)
        decided = demap(decode(r, rx), const)
        return bits.size, int(np.count_nonzero(decided != bits))

    def receiver(self, sigma2_n: float):
        if self.approach == "cp_reference":
            return None
        loading = uw_carrier_loading(self.gen, self.uw, self.approach)
        # the smoother needs a positive noise floor even for noiseless runs
        floor = max(sigma2_n, 1e-12)
        return build_receiver(self.gen, self.taps, floor, self.config.sigma2_d, loading)


def make_link(config: SystemConfig, approach: str, uw: UniqueWord | SequenceSpec | None = None,
              taps: ChannelTaps | None = None, order: int = 4,
              cp_count_overhead: bool = True, layout: CpOfdmLayout | None = None) -> Link:
    """Assemble a :class:`Link`, scaling the UW to ``config.uw_energy_fraction``.

    The UW is scaled against ``E_d + E_r`` of the two-step approach, so every
    nonzero UW carries the same energy whichever approach uses it.
    """
    taps = taps or identity_channel()
    if approach == "cp_reference":
        layout = layout or CpOfdmLayout()
        e = cp_symbol_energy(layout, config.sigma2_d, cp_count_overhead)
        label = "cp" if cp_count_overhead else "cp_plain"
        return Link(approach, label, taps, order, e, layout.n_data, config=config, layout=layout)
    if approach not in APPROACHES:
        raise ValueError(f"unknown approach {approach!r}")
    if isinstance(uw, SequenceSpec):
        uw = uw.build()
    gen = build_generator(config)
    if uw is None:
        uw = UniqueWord(np.zeros(config.n_uw), "zero")
    base = energy(gen, config, uw, "two_step")
    if uw.energy > 0:
        uw = scale_to_fraction(uw, config, base.e_d + base.e_r)
    e = energy(gen, config, uw, approach)
    return Link(approach, uw.label, taps, order, e.e_total, config.n_data,
                config=config, gen=gen, uw=uw)


def _chunk_seed(seed: int, key: str, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, zlib.crc32(key.encode()), index]))


def run_point(link: Link, ebn0_db: float, min_bit_errors: int, max_bits: int, seed: int = 0,
              chunk_symbols: int = 2000, workers: int = 1, sigma2_n: float | None = None) -> BerPoint:
    """Simulate one Eb/N0 point until ``min_bit_errors`` or ``max_bits`` is reached.

    ``sigma2_n`` overrides the noise variance derived from ``ebn0_db``.
    """
    if sigma2_n is None:
        sigma2_n = link.noise_for(ebn0_db)
    key = f"{link.approach}|{link.label}|{ebn0_db:.6f}|{sigma2_n:.6e}"
    rx = link.receiver(sigma2_n)
    per_symbol = link.bits_per_symbol
    chunk_bits = chunk_symbols * per_symbol

    def chunk_size(i):
        remaining = max_bits - i * chunk_bits
        return max(0, min(chunk_symbols, -(-remaining // per_symbol)))

    def job(i):
        return link.run_chunk(sigma2_n, chunk_size(i), _chunk_seed(seed, key, i), rx)

    bits = errors = 0
    index = 0
    done = False
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        while not done:
            wave = [i for i in range(index, index + max(workers, 1)) if chunk_size(i) > 0]
            if not wave:
                break
            results = list(pool.map(job, wave)) if pool else [job(i) for i in wave]
            for b, e in results:
                bits += b
                errors += e
                index += 1
                if errors >= min_bit_errors or bits >= max_bits:
                    done = True
                    break
    finally:
        if pool:
            pool.shutdown()
    ber = errors / bits if bits else 0.0
    log.info("%s %s Eb/N0=%.2f dB: %d/%d errors, BER=%.3e",
             link.approach, link.label, ebn0_db, errors, bits, ber)
    return BerPoint(float(ebn0_db), ber, bits, errors, link.approach, link.label, sigma2_n)


@dataclass(frozen=True)
class SweepSpec:
    ebn0_db: tuple
    approaches: tuple = ("two_step",)
    uw_specs: tuple = ()
    taps: ChannelTaps = field(default_factory=identity_channel)
    min_bit_errors: int = 1000
    max_bits: int = 10**6
    seed: int = 0
    order: int = 4
    chunk_symbols: int = 2000
    workers: int = 1
    cp_count_overhead: bool = True

    def __post_init__(self):
        ebn0 = tuple(float(v) for v in self.ebn0_db)
        if not ebn0:
            raise ValueError("Eb/N0 list is empty")
        if any(b <= a for a, b in zip(ebn0, ebn0[1:])):
            raise ValueError("Eb/N0 values must be strictly ascending")
        object.__setattr__(self, "ebn0_db", ebn0)
        for a in self.approaches:
            if a not in APPROACHES:
                raise ValueError(f"unknown approach {a!r}")
        if self.min_bit_errors < 1 or self.max_bits < 1:
            raise ValueError("min_bit_errors and max_bits must be positive")
        if self.min_bit_errors < 100:
            log.warning("min_bit_errors=%d: points are not statistically meaningful",
                        self.min_bit_errors)


def run_sweep(spec: SweepSpec, config: SystemConfig) -> list:
    """Simulate every (approach, UW, Eb/N0) combination of ``spec``."""
    points = []
    for approach in spec.approaches:
        uws = [None] if approach == "cp_reference" else (list(spec.uw_specs) or [None])
        for uw in uws:
            link = make_link(config, approach, uw, spec.taps, spec.order, spec.cp_count_overhead)
            for ebn0 in spec.ebn0_db:
                points.append(run_point(link, ebn0, spec.min_bit_errors, spec.max_bits,
                                        spec.seed, spec.chunk_symbols, spec.workers))
    return points


def ebn0_at_ber(points, target: float, min_errors: int = 0) -> float:
    """Eb/N0 where a BER curve crosses ``target``.

    Interpolates ``log10(BER)`` linearly between the first bracketing pair of
    points; both must carry at least ``min_errors`` errors.
    """
    pts = sorted(points, key=lambda p: p.ebn0_db)
    for a, b in zip(pts, pts[1:]):
        if a.ber >= target > b.ber:
            if a.bit_errors < min_errors or b.bit_errors < min_errors:
                raise ValueError(
                    f"bracketing points at {a.ebn0_db} / {b.ebn0_db} dB have too few errors")
            la, lb, lt = np.log10(a.ber), np.log10(b.ber), np.log10(target)
            return float(a.ebn0_db + (la - lt) / (la - lb) * (b.ebn0_db - a.ebn0_db))
    raise ValueError(f"curve does not cross BER {target}")


CSV_HEADER = ("ebn0_db", "approach", "uw_label", "bits", "errors", "ber")


def emit_csv(points, path) -> None:
    """Write BER points as CSV (LF line endings)."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for p in points:
            writer.writerow([repr(float(p.ebn0_db)), p.approach, p.uw_label,
                             p.bits_simulated, p.bit_errors, repr(float(p.ber))])
