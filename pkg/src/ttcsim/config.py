"""Run configuration: YAML file + command-line overrides + built-in defaults.

Every section is optional and every key has a default, so an empty file (or
no file) reproduces the reference mission. Unknown keys are rejected.

    budget:     {cadence_min: 20, runs: 3, link_rate_kbps: 184.8, ...}
    link:       {tx_antenna: patch-measured, distance_km: 500, ...}
    adm:        {resistor_ohms: 6.8, burn_max_s: 30, ...}
    scenario:   {ambient_c: -15, faults: ["resistor-open:0:0"], tc: [[3600, confirm]]}
    montecarlo: {runs: 500, jitter: 0.05, sweep: "ambient_c=-30:60:5"}
"""
from __future__ import annotations

from pathlib import Path
from typing import Any, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from . import link
from .adm import AdmConfig, FaultSpec, Scenario, TcKind
from .budget import DownlinkContext, MissionDataProfile
from .quantities import Decibel, DomainError, Duration, Frequency, Rate


class ConfigError(ValueError):
    pass


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", validate_assignment=True)


class BudgetSection(_Section):
    image_width: int = Field(1280, ge=0)
    image_height: int = Field(1024, ge=0)
    channels: int = Field(3, ge=0)
    bit_depth: int = Field(8, ge=0)
    compression_ratio: float = Field(2.0, ge=1)
    cadence_min: float = Field(20.0, ge=0)
    run_hours: float = Field(72.0, gt=0)
    runs: int = Field(3, ge=0)
    code_data_bits: int = Field(3952, gt=0)
    code_codeword_bits: int = Field(5184, gt=0)
    link_rate_kbps: float = Field(184.8, gt=0)
    window_s: float = Field(458.86, gt=0, le=86400)
    available_days: float = Field(365.0, gt=0)
    pad_to_codeword: bool = False

    def profile(self) -> MissionDataProfile:
        return MissionDataProfile(
            image_width=self.image_width, image_height=self.image_height,
            channels=self.channels, bit_depth=self.bit_depth,
            compression_ratio=self.compression_ratio,
            cadence=Duration.minutes(self.cadence_min), run_duration=Duration.hours(self.run_hours),
            runs=self.runs, code_data_bits=self.code_data_bits,
            code_codeword_bits=self.code_codeword_bits)

    def downlink(self) -> DownlinkContext:
        return DownlinkContext(window_per_day=Duration(self.window_s),
                               mission_days=max(1, round(self.available_days)),
                               link_rate=Rate.kbps(self.link_rate_kbps))


class LinkSection(_Section):
    tx_antenna: str = "patch-measured"
    rx_antenna: str = "patch-measured"
    frequency_mhz: float = Field(2430.0, gt=0)
    distance_km: Optional[float] = Field(None, gt=0)
    tx_power_dbw: float = 0.0
    tx_angle_deg: float = Field(0.0, ge=0, le=180)
    rx_angle_deg: float = Field(0.0, ge=0, le=180)
    tilt_deg: float = Field(0.0, ge=0, le=90)
    misc_losses_db: float = Field(0.0, ge=0)
    required_cn_db: float = 0.0

    @field_validator("tx_antenna", "rx_antenna")
    @classmethod
    def _known_preset(cls, v: str) -> str:
        if v not in link.PRESETS:
            raise ValueError(f"unknown antenna preset {v!r}; choose from {sorted(link.PRESETS)}")
        return v

    def budget_input(self) -> link.LinkBudgetInput:
        if self.distance_km is None:
            raise ConfigError("link.distance_km: a slant range is required (no default)")
        return link.LinkBudgetInput(
            frequency=Frequency.mhz(self.frequency_mhz), distance_m=self.distance_km * 1e3,
            tx_power_dbw=Decibel(self.tx_power_dbw),
            tx_pattern=link.preset(self.tx_antenna), rx_pattern=link.preset(self.rx_antenna),
            tx_off_boresight=self.tx_angle_deg, rx_off_boresight=self.rx_angle_deg,
            polarization_tilt_deg=self.tilt_deg, misc_losses_db=Decibel(self.misc_losses_db),
            required_cn_db=Decibel(self.required_cn_db))


class AdmSection(_Section):
    n_doors: int = 4
    resistor_ohms: float = 6.8
    supply_volts: float = 5.0
    knife_sets: int = 2
    resistors_per_set: int = 2
    burn_max_s: float = 30.0
    retry_partial_s: float = 900.0
    reattempt_full_s: float = 21600.0
    forced_burn_timer_s: float = 86400.0
    melt_temp_c: float = 145.0
    line_conductance_w_per_k: float = 0.0225
    line_heat_capacity_j_per_k: float = 0.078
    health_min_battery_v: float = 7.0

    def config(self) -> AdmConfig:
        return AdmConfig(**self.model_dump())


class ScenarioSection(_Section):
    ambient_c: float = 20.0
    battery: list[tuple[float, float]] = [(0.0, 8.0)]
    tc: list[tuple[float, TcKind]] = []
    faults: list[str] = []
    horizon_s: float = Field(7200.0, gt=0)
    jitter: float = Field(0.0, ge=0)

    @field_validator("faults")
    @classmethod
    def _parse_faults(cls, v: list[str]) -> list[str]:
        for f in v:
            try:
                FaultSpec.parse(f)
            except DomainError as e:
                raise ValueError(str(e)) from None
        return v

    def scenario(self, seed: int) -> Scenario:
        return Scenario(
            ambient_c=self.ambient_c,
            battery_v_timeline=tuple((float(t), float(v)) for t, v in self.battery),
            tc_schedule=tuple((float(t), TcKind(k)) for t, k in self.tc),
            faults=tuple(FaultSpec.parse(f) for f in self.faults),
            rng_seed=seed, horizon_s=self.horizon_s)


class MonteCarloSection(_Section):
    runs: int = Field(500, ge=1)
    jitter: float = Field(0.05, ge=0)
    sweep: Optional[str] = None
    workers: int = Field(1, ge=1)
    # two attempts: burn, 15 min retry, burn
    horizon_s: float = Field(1200.0, gt=0)


class RunConfig(_Section):
    budget: BudgetSection = BudgetSection()
    link: LinkSection = LinkSection()
    adm: AdmSection = AdmSection()
    scenario: ScenarioSection = ScenarioSection()
    montecarlo: MonteCarloSection = MonteCarloSection()
    seed: int = 0


def _format_error(e: ValidationError) -> str:
    parts = []
    for err in e.errors():
        key = ".".join(str(p) for p in err["loc"])
        parts.append(f"{key}: {err['msg']}")
    return "; ".join(parts)


def load(path: str | Path | None = None, overrides: dict[str, dict[str, Any]] | None = None) -> RunConfig:
    """Build a RunConfig from an optional YAML file and ``{section: {key: value}}``
    overrides. ``None`` override values are ignored (flag not given)."""
    data: dict[str, Any] = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"{path}: cannot read config ({e.strerror})") from None
        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"{path}: not valid YAML ({e})") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
    for section, values in (overrides or {}).items():
        given = {k: v for k, v in values.items() if v is not None}
        if not given:
            continue
        if section == "seed":
            data["seed"] = given["value"]
            continue
        current = data.get(section) or {}
        if not isinstance(current, dict):
            raise ConfigError(f"{section}: must be a mapping")
        data[section] = {**current, **given}
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(_format_error(e)) from None


def json_schema() -> dict:
    return RunConfig.model_json_schema()
