"""
Unique word sequences: generation, file I/O and energy normalization.

Sequence files hold one complex sample per line as two whitespace-separated
reals ``re im``; blank lines and lines starting with ``#`` are ignored.
"""

from dataclasses import dataclass
from math import gcd
from pathlib import Path

import numpy as np


class SequenceError(ValueError):
    pass


@dataclass(frozen=True)
class UniqueWord:
    samples: np.ndarray
    label: str = "uw"

    def __post_init__(self):
        samples = np.array(self.samples, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(samples)):
            raise SequenceError("unique word samples must be finite")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self):
        return self.samples.size

    @property
    def energy(self) -> float:
        """``x_u^H x_u``."""
        return float(np.vdot(self.samples, self.samples).real)


@dataclass(frozen=True)
class SequenceSpec:
    """Recipe for a unique word: ``zero``, ``zadoff_chu`` or ``file``."""
    kind: str
    pad_to: int
    root: int = 1
    path: str = ""

    def __post_init__(self):
        if self.kind not in ("zero", "zadoff_chu", "file"):
            raise SequenceError(f"unknown sequence kind {self.kind!r}")
        if self.kind == "zadoff_chu" and gcd(self.root, self.pad_to) != 1:
            raise SequenceError(
                f"Zadoff-Chu root {self.root} not coprime with length {self.pad_to}")

    def build(self) -> UniqueWord:
        if self.kind == "zero":
            return zero_word(self.pad_to)
        if self.kind == "zadoff_chu":
            return zadoff_chu(self.pad_to, self.root)
        return load_sequence(self.path, self.pad_to)


def parse_sequence_spec(text: str, pad_to: int) -> SequenceSpec:
    """Parse ``zero``, ``zc:R`` / ``zadoff-chu:R`` or ``file:PATH``."""
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower().replace("-", "_")
    if kind == "zero":
        return SequenceSpec("zero", pad_to)
    if kind in ("zc", "zadoff_chu"):
        try:
            root = int(arg) if arg else 1
        except ValueError:
            raise SequenceError(f"bad Zadoff-Chu root in {text!r}") from None
        return SequenceSpec("zadoff_chu", pad_to, root=root)
    if kind == "file":
        if not arg:
            raise SequenceError("file: spec needs a path")
        return SequenceSpec("file", pad_to, path=arg)
    raise SequenceError(f"cannot parse sequence spec {text!r}")


def zero_word(length: int) -> UniqueWord:
    return UniqueWord(np.zeros(length, dtype=complex), "zero")


def zadoff_chu(length: int, root: int = 1) -> UniqueWord:
    """Zadoff-Chu sequence of the given length and root index.

    Even lengths use ``exp(-j pi u k^2 / L)``, odd lengths
    ``exp(-j pi u k (k+1) / L)``. The root must be coprime with the length
    for the zero-autocorrelation property to hold.
    """
    if length < 1:
        raise SequenceError("length must be >= 1")
    if not 1 <= root < max(length, 2) or gcd(root, length) != 1:
        raise SequenceError(f"root {root} must lie in [1, {length}) and be coprime with {length}")
    k = np.arange(length)
    if length % 2 == 0:
        phase = (root * k * k) % (2 * length)
    else:
        phase = (root * k * (k + 1)) % (2 * length)
    return UniqueWord(np.exp(-1j * np.pi * phase / length), f"zc{length}_r{root}")


def cyclic_autocorrelation(samples) -> np.ndarray:
    """``r[l] = sum_k s[k] conj(s[(k - l) mod L])`` for every lag ``l``."""
    s = np.asarray(samples, dtype=complex)
    return np.array([np.vdot(np.roll(s, lag), s) for lag in range(s.size)])


def parse_sequence(text: str, pad_to: int, label: str = "file") -> UniqueWord:
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SequenceError(f"line {lineno}: expected 're im', got {line!r}")
        try:
            values.append(complex(float(parts[0]), float(parts[1])))
        except ValueError:
            raise SequenceError(f"line {lineno}: not a number: {line!r}") from None
    if len(values) > pad_to:
        raise SequenceError(f"{len(values)} samples exceed the target length {pad_to}")
    samples = np.zeros(pad_to, dtype=complex)
    samples[:len(values)] = values
    return UniqueWord(samples, label)


def load_sequence(path, pad_to: int) -> UniqueWord:
    """Read a sequence file and zero-pad it at the tail to ``pad_to``."""
    path = Path(path)
    return parse_sequence(path.read_text(encoding="utf-8"), pad_to, label=path.stem)


def format_sequence(uw: UniqueWord) -> str:
    lines = [f"# {uw.label}, {len(uw)} samples"]
    lines += [f"{z.real:.17g} {z.imag:.17g}" for z in uw.samples]
    return "\n".join(lines) + "\n"


def scale_to_fraction(uw: UniqueWord, config, e_data_plus_red: float) -> UniqueWord:
    """Scale ``uw`` so its energy is a fixed share of the two-step symbol energy.

    With ``f = config.uw_energy_fraction`` the result satisfies
    ``||a uw||^2 = f / (1 - f) * e_data_plus_red`` for some real ``a > 0``,
    so ``x_u^H x_u`` is exactly ``f`` of ``E_d + E_r + x_u^H x_u``.
    ``f = 0`` yields the zero word.
    """
    fraction = config.uw_energy_fraction
    if not 0 <= fraction < 1:
        raise SequenceError("fraction must lie in [0, 1)")
    if fraction == 0:
        return UniqueWord(np.zeros_like(uw.samples), uw.label)
    energy = uw.energy
    if energy == 0:
        raise SequenceError("cannot scale the zero word to a nonzero energy")
    target = fraction / (1 - fraction) * e_data_plus_red
    return UniqueWord(uw.samples * np.sqrt(target / energy), uw.label)
