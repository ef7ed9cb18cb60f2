"""Seeded Monte Carlo over per-line thermal parameters.

Run ``i`` of a study with seed ``s`` always draws its line parameters from
``default_rng([s, i])``, so results do not depend on how runs are split
across workers, and sweeps reuse the same draws at every sweep point.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .config import AdmConfig, LineParams
from .fsm import simulate
from .scenario import Scenario

SWEEPABLE = {
    "ambient_c": "scenario",
    "supply_volts": "config",
    "resistor_ohms": "config",
    "melt_temp_c": "config",
    "burn_max_s": "config",
    "line_conductance_w_per_k": "config",
}


@dataclass(frozen=True)
class Jitter:
    """Relative 1-sigma Gaussian spread applied independently to each line."""

    conductance: float = 0.05
    heat_capacity: float = 0.05
    melt_temp: float = 0.05

    @classmethod
    def uniform(cls, sigma: float) -> "Jitter":
        return cls(sigma, sigma, sigma)

    @property
    def is_zero(self) -> bool:
        return self.conductance == self.heat_capacity == self.melt_temp == 0


def draw_config(cfg: AdmConfig, jitter: Jitter, seed: int, run_index: int = 0) -> AdmConfig:
    if jitter.is_zero:
        return cfg
    rng = np.random.default_rng([seed, run_index])
    z = rng.standard_normal((cfg.n_doors, 3))
    lines = []
    for base, (zk, zc, zm) in zip(cfg.lines(), z):
        k = base.conductance_w_per_k * max(1 + jitter.conductance * zk, 1e-3)
        c = base.heat_capacity_j_per_k * max(1 + jitter.heat_capacity * zc, 1e-3)
        m = base.melt_temp_c * (1 + jitter.melt_temp * zm)
        lines.append(LineParams(float(k), float(c), float(m)))
    return replace(cfg, line_params=tuple(lines))


@dataclass(frozen=True)
class RunOutcome:
    doors_open: int
    attempts: int
    full: bool


@dataclass(frozen=True)
class ReliabilityReport:
    runs: int
    full_deployment_probability: float
    partial_probability: float
    mean_attempts: float
    mean_doors_open: float
    door_histogram: tuple[int, ...]

    def as_dict(self) -> dict:
        return {
            "runs": self.runs,
            "full_deployment_probability": self.full_deployment_probability,
            "partial_probability": self.partial_probability,
            "mean_attempts": self.mean_attempts,
            "mean_doors_open": self.mean_doors_open,
            "door_histogram": list(self.door_histogram),
        }


def _one_run(args: tuple[Scenario, AdmConfig, Jitter, int]) -> RunOutcome:
    scenario, cfg, jitter, i = args
    sim = simulate(scenario, draw_config(cfg, jitter, scenario.rng_seed, i))
    n = sum(sim.state.doors_open)
    return RunOutcome(n, sim.state.attempt_count, n == cfg.n_doors)


def summarize(outcomes: list[RunOutcome], n_doors: int) -> ReliabilityReport:
    runs = len(outcomes)
    hist = [0] * (n_doors + 1)
    for o in outcomes:
        hist[o.doors_open] += 1
    return ReliabilityReport(
        runs=runs,
        full_deployment_probability=sum(o.full for o in outcomes) / runs,
        partial_probability=sum(0 < o.doors_open < n_doors for o in outcomes) / runs,
        mean_attempts=sum(o.attempts for o in outcomes) / runs,
        mean_doors_open=sum(o.doors_open for o in outcomes) / runs,
        door_histogram=tuple(hist),
    )


def monte_carlo(scenario: Scenario, cfg: AdmConfig, runs: int,
                jitter: Jitter = Jitter(), workers: int = 1) -> ReliabilityReport:
    if runs < 1:
        raise ValueError("runs must be >= 1")
    jobs = [(scenario, cfg, jitter, i) for i in range(runs)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_one_run, jobs, chunksize=max(1, runs // (4 * workers))))
    else:
        outcomes = [_one_run(j) for j in jobs]
    return summarize(outcomes, cfg.n_doors)


def sweep_values(start: float, stop: float, step: float) -> list[float]:
    """Inclusive arithmetic range; values are rounded to kill float drift."""
    if step <= 0 or stop < start:
        raise ValueError("sweep needs step > 0 and stop >= start")
    n = int(round((stop - start) / step, 9)) + 1
    return [round(start + i * step, 9) for i in range(n)]


def sweep(scenario: Scenario, cfg: AdmConfig, param: str, values: list[float], runs: int,
          jitter: Jitter = Jitter(), workers: int = 1) -> list[tuple[float, ReliabilityReport]]:
    if param not in SWEEPABLE:
        raise ValueError(f"cannot sweep {param!r}; choose from {sorted(SWEEPABLE)}")
    out = []
    for v in values:
        if SWEEPABLE[param] == "scenario":
            sc, c = replace(scenario, **{param: v}), cfg
        else:
            sc, c = scenario, replace(cfg, **{param: v})
        out.append((v, monte_carlo(sc, c, runs, jitter, workers)))
    return out
