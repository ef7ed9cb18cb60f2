"""Unit-tagged scalar quantities and decibel helpers.

Every value here is an immutable dataclass so that a ``Duration`` cannot
be passed where a ``Rate`` is expected without an explicit conversion.

Sizes use *decimal* prefixes: 1 GB is 1e9 bytes, not 2**30.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

BYTES_PER_GB = 1_000_000_000


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


def db_to_linear(d: "Decibel | float") -> float:
    return 10.0 ** (float(d) / 10.0)


def linear_to_db(x: float) -> "Decibel":
    if not x > 0:
        raise DomainError(f"linear_to_db needs a positive ratio, got {x!r}")
    return Decibel(10.0 * math.log10(x))


@dataclass(frozen=True, order=True)
class Decibel:
    """A power ratio in dB. The reference level is stated where it is used."""

    value: float

    @classmethod
    def from_linear(cls, x: float) -> "Decibel":
        return linear_to_db(x)

    def to_linear(self) -> float:
        return db_to_linear(self.value)

    def __float__(self) -> float:
        return float(self.value)

    def __add__(self, other: "Decibel") -> "Decibel":
        if not isinstance(other, Decibel):
            return NotImplemented
        return Decibel(self.value + other.value)

    def __sub__(self, other: "Decibel") -> "Decibel":
        if not isinstance(other, Decibel):
            return NotImplemented
        return Decibel(self.value - other.value)

    def __neg__(self) -> "Decibel":
        return Decibel(-self.value)


@dataclass(frozen=True, order=True)
class DataSize:
    bytes: int

    def __post_init__(self):
        if not isinstance(self.bytes, int) or isinstance(self.bytes, bool):
            raise TypeError(f"DataSize holds whole bytes, got {self.bytes!r}")
        if self.bytes < 0:
            raise DomainError("DataSize cannot be negative")

    @classmethod
    def from_gb(cls, gb: float) -> "DataSize":
        return cls(round(gb * BYTES_PER_GB))

    @property
    def bits(self) -> int:
        return self.bytes * 8

    @property
    def gb(self) -> float:
        return self.bytes / BYTES_PER_GB

    def __add__(self, other: "DataSize") -> "DataSize":
        if not isinstance(other, DataSize):
            return NotImplemented
        return DataSize(self.bytes + other.bytes)

    def __mul__(self, k: int) -> "DataSize":
        if not isinstance(k, int):
            return NotImplemented
        return DataSize(self.bytes * k)

    __rmul__ = __mul__


@dataclass(frozen=True, order=True)
class Duration:
    seconds: float

    def __post_init__(self):
        if not self.seconds >= 0:
            raise DomainError(f"Duration must be >= 0 s, got {self.seconds!r}")

    @classmethod
    def minutes(cls, m: float) -> "Duration":
        return cls(m * 60.0)

    @classmethod
    def hours(cls, h: float) -> "Duration":
        return cls(h * 3600.0)

    @classmethod
    def days(cls, d: float) -> "Duration":
        return cls(d * 86400.0)

    def __float__(self) -> float:
        return float(self.seconds)


@dataclass(frozen=True, order=True)
class Rate:
    bits_per_second: float

    def __post_init__(self):
        if not self.bits_per_second >= 0:
            raise DomainError(f"Rate must be >= 0 bit/s, got {self.bits_per_second!r}")

    @classmethod
    def kbps(cls, k: float) -> "Rate":
        return cls(k * 1e3)

    @property
    def in_kbps(self) -> float:
        return self.bits_per_second / 1e3


@dataclass(frozen=True, order=True)
class Frequency:
    hertz: float

    def __post_init__(self):
        if not self.hertz > 0:
            raise DomainError(f"Frequency must be > 0 Hz, got {self.hertz!r}")

    @classmethod
    def mhz(cls, f: float) -> "Frequency":
        return cls(f * 1e6)

    @classmethod
    def ghz(cls, f: float) -> "Frequency":
        return cls(f * 1e9)

    @property
    def in_mhz(self) -> float:
        return self.hertz / 1e6


@dataclass(frozen=True, order=True)
class TemperatureC:
    celsius: float

    def __float__(self) -> float:
        return float(self.celsius)
