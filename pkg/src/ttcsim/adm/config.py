from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..quantities import DomainError


@dataclass(frozen=True)
class LineParams:
    """Lumped thermal parameters of one melt line."""

    conductance_w_per_k: float
    heat_capacity_j_per_k: float
    melt_temp_c: float

    def __post_init__(self):
        if self.conductance_w_per_k <= 0 or self.heat_capacity_j_per_k <= 0:
            raise DomainError("line conductance and heat capacity must be positive")

    @property
    def tau_s(self) -> float:
        return self.heat_capacity_j_per_k / self.conductance_w_per_k


@dataclass(frozen=True)
class AdmConfig:
    """Static parameters of the deployment mechanism.

    The thermal defaults put the heated steady state (ambient + P/k) above
    the melt point at -15 C and below it at -25.5 C: with P = 5**2/6.8 W any
    k in (P/170.5, P/160] does that. 0.0225 W/K also gives a cut in about
    5 s at 20 C. ``line_params`` overrides the per-line values (used by the
    Monte Carlo jitter); when unset every line uses the scalar defaults.
    """

    n_doors: int = 4
    resistor_ohms: float = 6.8
    supply_volts: float = 5.0
    knife_sets: int = 2
    resistors_per_set: int = 2
    burn_max_s: float = 30.0
    retry_partial_s: float = 15 * 60.0
    reattempt_full_s: float = 6 * 3600.0
    forced_burn_timer_s: float = 24 * 3600.0
    melt_temp_c: float = 145.0
    line_conductance_w_per_k: float = 0.0225
    line_heat_capacity_j_per_k: float = 0.078
    health_min_battery_v: float = 7.0
    line_params: tuple[LineParams, ...] | None = field(default=None)

    def __post_init__(self):
        if self.n_doors < 1:
            raise DomainError("need at least one door")
        if self.knife_sets < 2:
            raise DomainError("knife_sets must be >= 2 (redundancy)")
        if not 1 <= self.resistors_per_set <= self.n_doors:
            raise DomainError("resistors_per_set must be in [1, n_doors]")
        if self.resistor_ohms <= 0:
            raise DomainError("resistor_ohms must be positive")
        if self.burn_max_s <= 0:
            raise DomainError("burn_max must be positive")
        if not 0 < self.retry_partial_s < self.reattempt_full_s < self.forced_burn_timer_s:
            raise DomainError("need retry_partial < reattempt_full < forced_burn_timer")
        if self.line_params is not None and len(self.line_params) != self.n_doors:
            raise DomainError("line_params must have one entry per door")
        # constructing the default LineParams validates k and C
        self.default_line()

    def default_line(self) -> LineParams:
        return LineParams(self.line_conductance_w_per_k, self.line_heat_capacity_j_per_k,
                          self.melt_temp_c)

    def lines(self) -> tuple[LineParams, ...]:
        if self.line_params is not None:
            return self.line_params
        return (self.default_line(),) * self.n_doors

    def resistor_for(self, line: int) -> int:
        """Resistor index (within every knife set) that ``line`` passes through."""
        return line * self.resistors_per_set // self.n_doors

    def routing(self, line: int) -> frozenset[tuple[int, int]]:
        r = self.resistor_for(line)
        return frozenset((s, r) for s in range(self.knife_sets))

    def with_(self, **changes) -> "AdmConfig":
        return replace(self, **changes)


def knife_power_w(cfg: AdmConfig) -> float:
    return cfg.supply_volts ** 2 / cfg.resistor_ohms
