"""Unique word OFDM: two-step and direct UW generation, LMMSE reception,
symbol energy analysis and Monte Carlo BER sweeps."""

from .channel import ChannelTaps, NoiseModel, cyclic_matrix, freq_response, load_taps, transmit
from .config import SystemConfig, default_80211a_like, load_config, validate
from .energy import (
    EnergyBreakdown,
    db_shift,
    energy_direct,
    energy_two_step,
    verify_inequality,
)
from .generator import (
    GeneratorMatrices,
    SymbolFrames,
    build_generator,
    generate_direct,
    generate_two_step,
    uw_carrier_loading,
    uw_spectrum_direct,
    uw_spectrum_two_step,
)
from .receiver import build_receiver, cp_ofdm_reference, decode, demap, map_bits, qam
from .sequences import UniqueWord, load_sequence, scale_to_fraction, zadoff_chu
from .simulation import BerPoint, SweepSpec, calibrate_noise, emit_csv, make_link, run_point, run_sweep

__version__ = "0.1.0"


def data_file(name: str):
    """Path of a file shipped in ``uwofdm/data`` (configs, illustrative taps)."""
    from importlib.resources import files
    return files(__name__) / "data" / name
