from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .config import AdmConfig
from ..quantities import DomainError


class TcKind(str, enum.Enum):
    CONFIRM = "confirm"
    OVERRIDE_FORCED_TIMER = "override-forced-timer"


class FaultKind(str, enum.Enum):
    DOOR_STUCK = "door-stuck"
    RESISTOR_OPEN = "resistor-open"
    SWITCH_STUCK_CLOSED = "switch-stuck-closed"
    SWITCH_STUCK_OPEN = "switch-stuck-open"
    LINE_PRE_CUT = "line-precut"


@dataclass(frozen=True)
class FaultSpec:
    """An injected fault.

    ``target`` is the door/line index, except for RESISTOR_OPEN where it is
    ``(knife_set, resistor)``.
    """

    kind: FaultKind
    target: int | tuple[int, int]
    active_from: float = 0.0

    @classmethod
    def parse(cls, text: str) -> "FaultSpec":
        """Parse ``kind:arg[:arg][@seconds]``, e.g. ``resistor-open:0:1@30``."""
        body, _, at = text.partition("@")
        kind_s, *args = body.split(":")
        try:
            kind = FaultKind(kind_s)
            nums = [int(a) for a in args]
            when = float(at) if at else 0.0
        except ValueError:
            raise DomainError(f"bad fault spec {text!r}") from None
        want = 2 if kind is FaultKind.RESISTOR_OPEN else 1
        if len(nums) != want:
            raise DomainError(f"fault {kind.value} takes {want} index argument(s): {text!r}")
        target = tuple(nums) if want == 2 else nums[0]
        return cls(kind, target, when)

    def __str__(self) -> str:
        t = self.target if isinstance(self.target, int) else ":".join(map(str, self.target))
        return f"{self.kind.value}:{t}@{self.active_from:g}"

    def validate(self, cfg: AdmConfig) -> None:
        if self.active_from < 0:
            raise DomainError(f"fault {self} activates before t=0")
        if self.kind is FaultKind.RESISTOR_OPEN:
            s, r = self.target
            if not (0 <= s < cfg.knife_sets and 0 <= r < cfg.resistors_per_set):
                raise DomainError(f"fault {self} is outside the knife/resistor range")
        elif not 0 <= self.target < cfg.n_doors:
            raise DomainError(f"fault {self} is outside the door range")


@dataclass(frozen=True)
class Scenario:
    ambient_c: float = 20.0
    battery_v_timeline: tuple[tuple[float, float], ...] = ((0.0, 8.0),)
    tc_schedule: tuple[tuple[float, TcKind], ...] = ()
    faults: tuple[FaultSpec, ...] = ()
    rng_seed: int = 0
    horizon_s: float = 2 * 3600.0

    def __post_init__(self):
        if self.horizon_s <= 0:
            raise DomainError("horizon must be positive")
        for name, seq in (("battery_v_timeline", self.battery_v_timeline),
                          ("tc_schedule", self.tc_schedule)):
            times = [t for t, _ in seq]
            if any(b < a for a, b in zip(times, times[1:])):
                raise DomainError(f"{name} times must be non-decreasing")
            if times and times[0] < 0:
                raise DomainError(f"{name} times must be >= 0")

    def battery_at(self, t: float) -> float | None:
        """Piecewise-constant battery voltage; the first sample holds before it."""
        if not self.battery_v_timeline:
            return None
        v = self.battery_v_timeline[0][1]
        for when, volts in self.battery_v_timeline:
            if when > t:
                break
            v = volts
        return v
