"""
System parameterization for UW-OFDM.

A :class:`SystemConfig` fixes the DFT length, the unique word length and the
partition of the DFT bins into zero, redundant and data carriers. Carriers are
indexed in DFT-bin order ``0..N-1`` (DC is bin 0, negative frequencies sit in
the upper bins).

Config files are flat ``key = value`` text, one key per line, ``#`` starts a
comment. Keys are the field names of :class:`SystemConfig`; index sets are
comma-separated integers.
"""

from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np


class ConfigError(ValueError):
    """Base class for invalid system configurations."""


class CountMismatchError(ConfigError):
    pass


class IndexOverlapError(ConfigError):
    pass


class IndexRangeError(ConfigError):
    pass


class IndexOrderError(ConfigError):
    """Index set not strictly ascending (this includes duplicates)."""


class RedundancyMismatchError(ConfigError):
    pass


class ParameterError(ConfigError):
    """A scalar parameter (variance, energy fraction, count) is out of range."""


@dataclass(frozen=True)
class SystemConfig:
    n_total: int
    n_uw: int
    n_red: int
    n_data: int
    zero_carrier_indices: tuple
    redundant_carrier_indices: tuple
    sigma2_d: float = 1.0
    sigma2_n: float = 0.0
    uw_energy_fraction: float = 4 / 52

    def __post_init__(self):
        object.__setattr__(self, "zero_carrier_indices",
                           tuple(int(k) for k in self.zero_carrier_indices))
        object.__setattr__(self, "redundant_carrier_indices",
                           tuple(int(k) for k in self.redundant_carrier_indices))

    @property
    def data_carrier_indices(self) -> tuple:
        """Bins that are neither zero nor redundant, ascending."""
        excluded = set(self.zero_carrier_indices) | set(self.redundant_carrier_indices)
        return tuple(k for k in range(self.n_total) if k not in excluded)

    @property
    def used_carrier_indices(self) -> tuple:
        """Data and redundant bins together, ascending (the columns of B)."""
        zeros = set(self.zero_carrier_indices)
        return tuple(k for k in range(self.n_total) if k not in zeros)

    @property
    def n_used(self) -> int:
        return self.n_data + self.n_red

    def replace(self, **changes) -> "SystemConfig":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return SystemConfig(**values)


def evenly_spaced_redundant(used: tuple, n_red: int) -> tuple:
    """Pick ``n_red`` of the ``used`` bins as evenly spaced as possible.

    The k-th redundant carrier sits at used-carrier rank
    ``floor((k + 0.5) * len(used) / n_red)``.
    """
    n_used = len(used)
    return tuple(used[int((k + 0.5) * n_used / n_red)] for k in range(n_red))


def default_80211a_like() -> SystemConfig:
    """N = 64, N_u = N_r = 16, DC plus bins 27..37 zeroed, 36 data carriers."""
    n_total = 64
    zeros = (0,) + tuple(range(27, 38))
    used = tuple(k for k in range(n_total) if k not in zeros)
    return SystemConfig(
        n_total=n_total,
        n_uw=16,
        n_red=16,
        n_data=36,
        zero_carrier_indices=zeros,
        redundant_carrier_indices=evenly_spaced_redundant(used, 16),
        sigma2_d=1.0,
        sigma2_n=0.0,
        uw_energy_fraction=4 / 52,
    )


def _check_index_set(name, indices, n_total):
    for k in indices:
        if not 0 <= k < n_total:
            raise IndexRangeError(f"{name}: index {k} outside [0, {n_total})")
    if len(set(indices)) != len(indices):
        raise IndexOrderError(f"{name}: duplicate indices")
    if list(indices) != sorted(indices):
        raise IndexOrderError(f"{name}: indices must be ascending")


def validate(config: SystemConfig) -> SystemConfig:
    """Check every structural invariant of ``config``.

    Returns the config unchanged so calls can be chained; raises a
    :class:`ConfigError` subclass naming the first violated invariant.
    """
    c = config
    if c.n_total < 1 or c.n_uw < 1 or c.n_data < 0:
        raise ParameterError("n_total and n_uw must be >= 1, n_data >= 0")
    if c.n_red != c.n_uw:
        raise RedundancyMismatchError(f"n_red ({c.n_red}) != n_uw ({c.n_uw})")
    if c.n_uw >= c.n_total:
        raise ParameterError("n_uw must be smaller than n_total")
    _check_index_set("zero_carrier_indices", c.zero_carrier_indices, c.n_total)
    _check_index_set("redundant_carrier_indices", c.redundant_carrier_indices, c.n_total)
    overlap = set(c.zero_carrier_indices) & set(c.redundant_carrier_indices)
    if overlap:
        raise IndexOverlapError(f"bins {sorted(overlap)} are both zero and redundant")
    if len(c.redundant_carrier_indices) != c.n_red:
        raise CountMismatchError(
            f"{len(c.redundant_carrier_indices)} redundant indices for n_red={c.n_red}")
    if c.n_data + c.n_red + len(c.zero_carrier_indices) != c.n_total:
        raise CountMismatchError(
            f"n_data + n_red + |zero| = {c.n_data + c.n_red + len(c.zero_carrier_indices)}"
            f" != n_total = {c.n_total}")
    if not (np.isfinite(c.sigma2_d) and c.sigma2_d >= 0):
        raise ParameterError("sigma2_d must be finite and >= 0")
    if not (np.isfinite(c.sigma2_n) and c.sigma2_n >= 0):
        raise ParameterError("sigma2_n must be finite and >= 0")
    if not 0 <= c.uw_energy_fraction < 1:
        raise ParameterError("uw_energy_fraction must lie in [0, 1)")
    return config


_INT_KEYS = {"n_total", "n_uw", "n_red", "n_data"}
_FLOAT_KEYS = {"sigma2_d", "sigma2_n", "uw_energy_fraction"}
_INDEX_KEYS = {"zero_carrier_indices", "redundant_carrier_indices"}


def _parse_indices(text):
    text = text.strip()
    if not text:
        return ()
    return tuple(int(tok) for tok in text.split(","))


def parse_config(text: str) -> SystemConfig:
    """Parse the ``key = value`` config format and validate the result."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            if key in _INT_KEYS:
                values[key] = int(value)
            elif key in _FLOAT_KEYS:
                values[key] = float(value)
            elif key in _INDEX_KEYS:
                values[key] = _parse_indices(value)
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {value!r}") from None
    missing = (_INT_KEYS | _INDEX_KEYS) - values.keys()
    if missing:
        raise ConfigError(f"missing keys: {', '.join(sorted(missing))}")
    return validate(SystemConfig(**values))


def load_config(path) -> SystemConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def format_config(config: SystemConfig) -> str:
    lines = []
    for f in fields(config):
        value = getattr(config, f.name)
        if f.name in _INDEX_KEYS:
            value = ",".join(str(k) for k in value)
        elif f.name in _FLOAT_KEYS:
            value = repr(float(value))
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


def save_config(config: SystemConfig, path) -> None:
    Path(path).write_text(format_config(config), encoding="utf-8", newline="\n")
