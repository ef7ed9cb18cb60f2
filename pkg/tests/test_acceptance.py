"""Acceptance criteria, one test each. Tolerances are fixed here, not tuned."""
import math
import time

import numpy as np

from golden import GOLDEN, mismatches
from ttcsim import budget, cli, link
from ttcsim.adm import (AdmConfig, Jitter, Scenario, monte_carlo, run_scenario, simulate, sweep,
                        sweep_values)

CFG = AdmConfig()
TWO_ATTEMPTS = CFG.burn_max_s + CFG.retry_partial_s + CFG.burn_max_s + 1.0


def test_criterion_1_budget_chain(verdict):
    p = budget.REFERENCE_PROFILE
    # hand arithmetic: 1280*1024*3 bytes at 8 bit, halved; 3 images/h for 72 h; 3 runs
    image = 1280 * 1024 * 3 // 2
    raw = image * 3 * 72 * 3
    coded = raw * 5184 / 3952
    n = budget.images_per_run(p)
    raw_gb = budget.raw_mission_bytes(p).gb
    coded_gb = budget.coded_mission_bytes(p) / 1e9
    ok = (n == 216 and budget.raw_mission_bytes(p).bytes == raw
          and abs(raw_gb - 1.274) <= 1.274e-3 and abs(coded_gb - 1.671) <= 1.671e-3
          and math.isclose(coded_gb, coded / 1e9, rel_tol=1e-12))
    verdict(1, ok, f"images={n} raw={raw_gb:.5f} GB coded={coded_gb:.5f} GB (±0.1%)")


def test_criterion_2_rate_time_inversion(verdict):
    p, ctx = budget.REFERENCE_PROFILE, budget.REFERENCE_DOWNLINK
    days = budget.days_to_downlink(p, ctx)
    oracle = budget.coded_mission_bytes(p) * 8 / (184.8e3 * 458.86)
    worst = 0.0
    for avail in (1.0, 30.0, 157.0, 365.0, 1000.0):
        rate = budget.required_rate(p, ctx.window_per_day, avail)
        back = budget.days_to_downlink(p, budget.DownlinkContext(ctx.window_per_day, 365, rate))
        worst = max(worst, abs(back - avail) / avail)
    ok = abs(days - 157.7) <= 0.5 and math.isclose(days, oracle, rel_tol=1e-12) and worst <= 1e-9
    verdict(2, ok, f"days={days:.3f} (157.7 ±0.5), inversion rel err={worst:.1e} (<=1e-9)")


def test_criterion_3_pattern(verdict):
    patch = link.preset("patch-measured")
    g0 = link.pattern_gain(patch, 0.0).value
    g52 = link.pattern_gain(patch, 52.0).value
    # independent reconstruction: 0.001 deg grid, linear interpolation at the -3 dB crossing
    th = np.arange(0.0, 90.0, 0.001)
    g = np.array([link.pattern_gain(patch, float(t)).value for t in th]) - (g0 - 3.0)
    j = int(np.argmax(g < 0))
    hpbw = 2 * (th[j - 1] + g[j - 1] * (th[j] - th[j - 1]) / (g[j - 1] - g[j]))
    ok = abs(g0 - 4.13) <= 1e-9 and abs(g52 - 1.13) <= 1e-6 and abs(hpbw - 104.0) <= 0.02
    verdict(3, ok, f"G(0)={g0:.6f} dB G(52)={g52:.8f} dB (1.13 ±1e-6) HPBW={hpbw:.4f} deg (±0.02)")


def test_criterion_4_polarization(verdict):
    lin_circ = link.polarization_loss_db(link.LINEAR, 0.0).value
    circ_lin = link.polarization_loss_db(0.0, link.LINEAR).value
    matched = link.polarization_loss_db(0.0, 0.0).value
    ok = abs(lin_circ - 3.01) <= 0.01 and abs(circ_lin - 3.01) <= 0.01 and abs(matched) <= 1e-9
    verdict(4, ok, f"linear<->circular={lin_circ:.4f} dB (3.01 ±0.01) matched={matched:.1e} dB")


def test_criterion_5_thermal_calibration(verdict):
    outcomes = {}
    for amb in (-15.0, 50.0, -25.5):
        st = simulate(Scenario(ambient_c=amb, horizon_s=TWO_ATTEMPTS), CFG).state
        outcomes[amb] = (sum(st.doors_open), sum(st.lines_cut), st.attempt_count)
    t0 = time.perf_counter()
    rep = monte_carlo(Scenario(ambient_c=-25.5, horizon_s=TWO_ATTEMPTS, rng_seed=0), CFG, 500,
                      Jitter.uniform(0.05))
    elapsed = time.perf_counter() - t0
    ok = (outcomes[-15.0][0] == 4 and outcomes[-15.0][2] <= 2
          and outcomes[50.0][0] == 4 and outcomes[50.0][2] <= 2
          and outcomes[-25.5][1] == 0 and outcomes[-25.5][2] == 2
          and rep.partial_probability > 0 and elapsed < 5.0)
    verdict(5, ok, f"-15C doors={outcomes[-15.0][0]} +50C doors={outcomes[50.0][0]} "
                   f"-25.5C cut={outcomes[-25.5][1]} after {outcomes[-25.5][2]} attempts; "
                   f"MC P(partial)={rep.partial_probability:.3f} in {elapsed:.2f}s (<5s)")


def test_criterion_6_golden_traces(verdict):
    bad = {}
    for name, build in sorted(GOLDEN.items()):
        sc, cfg, expected = build()
        diff = mismatches(run_scenario(sc, cfg), expected)
        if diff:
            bad[name] = diff[:3]
    verdict(6, not bad, f"{len(GOLDEN)} golden traces, mismatched: {bad or 'none'}")


def test_criterion_7_determinism(verdict, tmp_path, capsys):
    argv = ["deploy", "--ambient", "-20", "--seed", "5", "--fault", "door-stuck:3",
            "--tc", "4000:confirm", "--horizon", "20000"]
    codes = [cli.main(argv + ["--jitter", "0.05", "--out", str(tmp_path / d)]) for d in "ab"]
    capsys.readouterr()
    same = ((tmp_path / "a" / "trace.csv").read_bytes() == (tmp_path / "b" / "trace.csv").read_bytes()
            and (tmp_path / "a" / "report.json").read_bytes()
            == (tmp_path / "b" / "report.json").read_bytes())
    pts = sweep(Scenario(horizon_s=TWO_ATTEMPTS, rng_seed=0), CFG, "ambient_c",
                sweep_values(-30, 60, 5), 500, Jitter.uniform(0.05))
    probs = [r.full_deployment_probability for _, r in pts]
    monotone = all(a <= b for a, b in zip(probs, probs[1:]))
    ok = codes == [0, 0] and same and monotone
    verdict(7, ok, f"byte-identical traces={same}; P(full) over -30..60 C non-decreasing="
                   f"{monotone} ({probs[0]:.3f} -> {probs[-1]:.3f})")


def test_criterion_8_paper_check(verdict, capsys):
    code = cli.main(["paper-check"])
    out = capsys.readouterr().out
    verdict(8, code == 0, f"paper-check exit={code}; {out.strip().splitlines()[-1]}")
