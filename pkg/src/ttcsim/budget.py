"""Mission data budget: images -> raw bytes -> coded bytes -> rate/time.

Coding overhead is applied to the mission total as a plain
codeword/data ratio. ``pad_to_codeword=True`` instead rounds every image up
to a whole number of codewords, for what-if studies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .quantities import DataSize, DomainError, Duration, Rate


@dataclass(frozen=True)
class MissionDataProfile:
    image_width: int = 1280
    image_height: int = 1024
    channels: int = 3
    bit_depth: int = 8
    compression_ratio: float = 2.0
    cadence: Duration = Duration.minutes(20)
    run_duration: Duration = Duration.hours(72)
    runs: int = 3
    code_data_bits: int = 3952
    code_codeword_bits: int = 5184

    def __post_init__(self):
        for name in ("image_width", "image_height", "channels", "bit_depth", "runs"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0")
        if not (0 < self.code_data_bits <= self.code_codeword_bits):
            raise DomainError("need 0 < code_data_bits <= code_codeword_bits")
        if not self.compression_ratio >= 1:
            raise DomainError("compression_ratio must be >= 1")
        if self.cadence > self.run_duration:
            raise DomainError("cadence cannot exceed run_duration")

    @property
    def code_rate(self) -> float:
        return self.code_data_bits / self.code_codeword_bits


@dataclass(frozen=True)
class DownlinkContext:
    window_per_day: Duration = Duration(458.86)
    mission_days: int = 365
    link_rate: Rate = Rate.kbps(184.8)

    def __post_init__(self):
        if not 0 < self.window_per_day.seconds <= 86400:
            raise DomainError("window_per_day must be in (0, 86400] s")
        if self.mission_days <= 0:
            raise DomainError("mission_days must be positive")
        if self.link_rate.bits_per_second <= 0:
            raise DomainError("link_rate must be positive")


REFERENCE_PROFILE = MissionDataProfile()
REFERENCE_DOWNLINK = DownlinkContext()


def images_per_run(profile: MissionDataProfile) -> int:
    cadence = profile.cadence.seconds
    if cadence <= 0:
        raise DomainError("cadence must be > 0")
    # round() first so 259200/1200 style ratios that land a hair under an
    # integer in binary floating point still floor to that integer
    return math.floor(round(profile.run_duration.seconds / cadence, 9))


def image_bytes(profile: MissionDataProfile) -> int:
    """Compressed size of one image, rounded to whole bytes."""
    raw = profile.image_width * profile.image_height * profile.channels * profile.bit_depth / 8
    return round(raw / profile.compression_ratio)


def raw_run_bytes(profile: MissionDataProfile) -> DataSize:
    return DataSize(images_per_run(profile) * image_bytes(profile))


def raw_mission_bytes(profile: MissionDataProfile) -> DataSize:
    return raw_run_bytes(profile) * profile.runs


def coded_mission_bytes(profile: MissionDataProfile, pad_to_codeword: bool = False) -> float:
    """Bytes on the air for the whole mission, including coding overhead.

    Returned as a float: the pure ratio rarely lands on whole bytes.
    """
    if pad_to_codeword:
        codewords = math.ceil(image_bytes(profile) * 8 / profile.code_data_bits)
        per_image = codewords * profile.code_codeword_bits / 8
        return float(per_image * images_per_run(profile) * profile.runs)
    raw = raw_mission_bytes(profile).bytes
    return raw * profile.code_codeword_bits / profile.code_data_bits


def days_to_downlink(profile: MissionDataProfile, ctx: DownlinkContext,
                     pad_to_codeword: bool = False) -> float:
    bits = coded_mission_bytes(profile, pad_to_codeword) * 8
    return bits / (ctx.link_rate.bits_per_second * ctx.window_per_day.seconds)


def required_rate(profile: MissionDataProfile, window_per_day: Duration,
                  available_days: float, pad_to_codeword: bool = False) -> Rate:
    if window_per_day.seconds <= 0 or available_days <= 0:
        raise DomainError("window and available days must be positive")
    bits = coded_mission_bytes(profile, pad_to_codeword) * 8
    return Rate(bits / (window_per_day.seconds * available_days))


def gb_4sig(n_bytes: float) -> float:
    """GB rounded to 4 significant figures, for reports."""
    gb = n_bytes / 1e9
    if gb == 0:
        return 0.0
    return round(gb, 3 - math.floor(math.log10(abs(gb))))
