"""Reference-value checks: budget chain, pattern, polarization and thermal outcomes.

Expected values are fixed; computed values come from the (possibly
user-overridden) configuration, so a perturbed input shows up as a failing
row.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, replace

from scipy.optimize import brentq

from . import budget, link
from .adm import AdmConfig, Jitter, Scenario, knife_power_w, monte_carlo, simulate
from .config import RunConfig


@dataclass(frozen=True)
class CheckRow:
    criterion: int
    name: str
    expected: float
    computed: float
    tolerance: str
    passed: bool

    def as_dict(self) -> dict:
        return {"criterion": self.criterion, "name": self.name, "expected": self.expected,
                "computed": self.computed, "tolerance": self.tolerance, "passed": self.passed}


def _abs(crit, name, expected, computed, tol) -> CheckRow:
    return CheckRow(crit, name, expected, computed, f"±{tol:g}", abs(computed - expected) <= tol)


def _rel(crit, name, expected, computed, rel) -> CheckRow:
    ok = abs(computed - expected) <= rel * abs(expected)
    return CheckRow(crit, name, expected, computed, f"±{rel * 100:g}%", ok)


def _exact(crit, name, expected, computed) -> CheckRow:
    return CheckRow(crit, name, expected, computed, "exact", computed == expected)


def reconstruct_hpbw(p: link.AntennaPattern) -> float:
    """Full beamwidth between the -3 dB points, found by root bracketing."""
    g0 = link.pattern_gain(p, 0.0).value
    half = brentq(lambda th: link.pattern_gain(p, th).value - (g0 - 3.0), 1e-9, 89.999999,
                  xtol=1e-12)
    return 2 * half


def budget_rows(cfg: RunConfig) -> list[CheckRow]:
    b = cfg.budget
    profile = b.profile()
    ctx = b.downlink()
    pad = b.pad_to_codeword
    one_run = replace(profile, runs=1)
    days = budget.days_to_downlink(profile, ctx, pad)
    rate = budget.required_rate(profile, ctx.window_per_day, b.available_days, pad)
    back = budget.days_to_downlink(profile, replace(ctx, link_rate=rate), pad)
    return [
        _exact(1, "images per run", 216, budget.images_per_run(profile)),
        _rel(1, "raw data per run [GB]", 0.425, budget.raw_mission_bytes(one_run).gb, 1e-3),
        _rel(1, "raw mission data [GB]", 1.274, budget.raw_mission_bytes(profile).gb, 1e-3),
        _rel(1, "coded mission data [GB]", 1.671,
             budget.coded_mission_bytes(profile, pad) / 1e9, 1e-3),
        _abs(2, "days to downlink at 184.8 kbps, 458.86 s/day", 157.7, days, 0.5),
        _abs(2, "rate/time inversion relative error", 0.0,
             abs(back - b.available_days) / b.available_days, 1e-9),
    ]


def pattern_rows() -> list[CheckRow]:
    patch = link.preset("patch-measured")
    return [
        _abs(3, "patch gain at boresight [dB]", 4.13, link.pattern_gain(patch, 0.0).value, 1e-9),
        _abs(3, "patch gain at 52 deg [dB]", 1.13, link.pattern_gain(patch, 52.0).value, 1e-6),
        _abs(3, "reconstructed HPBW [deg]", 104.0, reconstruct_hpbw(patch), 0.02),
        _abs(4, "linear-to-circular polarization loss [dB]", 3.01,
             link.polarization_loss_db(link.LINEAR, 0.0).value, 0.01),
        _abs(4, "matched circular polarization loss [dB]", 0.0,
             link.polarization_loss_db(0.0, 0.0).value, 1e-9),
    ]


def thermal_rows(adm: AdmConfig, seed: int = 0, mc_runs: int = 500) -> list[CheckRow]:
    # burn, retry wait, burn, plus a second so the last burn is evaluated
    two_attempts = adm.burn_max_s + adm.retry_partial_s + adm.burn_max_s + 1.0
    rows = [_abs(5, "knife power per resistor [W]", 3.676, knife_power_w(adm), 1e-3)]
    for amb in (-15.0, 50.0):
        sim = simulate(Scenario(ambient_c=amb, horizon_s=two_attempts), adm)
        st = sim.state
        ok = sum(st.doors_open) == adm.n_doors and st.attempt_count <= 2
        rows.append(CheckRow(5, f"doors open at {amb:+g} C within 2 attempts", adm.n_doors,
                             sum(st.doors_open), "exact, attempts<=2", ok))
    sim = simulate(Scenario(ambient_c=-25.5, horizon_s=two_attempts), adm)
    rows.append(CheckRow(5, "lines cut at -25.5 C after 2 attempts", 0, sum(sim.state.lines_cut),
                         "exact", sum(sim.state.lines_cut) == 0 and sim.state.attempt_count == 2))
    t0 = time.perf_counter()
    rep = monte_carlo(Scenario(ambient_c=-25.5, horizon_s=two_attempts, rng_seed=seed), adm,
                      mc_runs, Jitter.uniform(0.05))
    elapsed = time.perf_counter() - t0
    rows.append(CheckRow(5, f"P(partial) at -25.5 C, 5% jitter, {mc_runs} runs", 0.0,
                         rep.partial_probability, "> 0", rep.partial_probability > 0))
    rows.append(CheckRow(5, f"Monte Carlo runtime for {mc_runs} runs [s]", 5.0, elapsed, "< 5",
                         elapsed < 5.0))
    return rows


def run_checks(cfg: RunConfig | None = None) -> list[CheckRow]:
    cfg = cfg or RunConfig()
    return budget_rows(cfg) + pattern_rows() + thermal_rows(cfg.adm.config(), cfg.seed)


def format_table(rows: list[CheckRow]) -> str:
    lines = [f"{'#':>2}  {'check':<48} {'expected':>12} {'computed':>14} {'tolerance':>18}  result"]
    for r in rows:
        lines.append(f"{r.criterion:>2}  {r.name:<48} {r.expected:>12.6g} {r.computed:>14.8g} "
                     f"{r.tolerance:>18}  {'PASS' if r.passed else 'FAIL'}")
    n_ok = sum(r.passed for r in rows)
    lines.append(f"{n_ok}/{len(rows)} checks passed")
    return "\n".join(lines)

