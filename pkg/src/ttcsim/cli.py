"""Command-line front end.

Exit codes: 0 success, 1 paper-check failure, 2 configuration error,
3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import budget, config, link, paper_check
from .adm import (AdmSimulator, Jitter, draw_config, monte_carlo, sweep)
from .adm.montecarlo import SWEEPABLE, sweep_values
from .quantities import DomainError

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3


class CliIOError(Exception):
    pass


def _dump(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _write(out: Path, name: str, text: str) -> None:
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text, encoding="utf-8")
    except OSError as e:
        raise CliIOError(f"cannot write {out / name}: {e.strerror or e}") from None


def _emit(args, report: dict) -> None:
    text = _dump(report)
    sys.stdout.write(text)
    if args.out:
        _write(Path(args.out), "report.json", text)


# -- budget ------------------------------------------------------------------

def budget_report(cfg: config.RunConfig) -> dict:
    b = cfg.budget
    profile, ctx = b.profile(), b.downlink()
    pad = b.pad_to_codeword
    run_bytes = budget.raw_run_bytes(profile).bytes
    raw = budget.raw_mission_bytes(profile).bytes
    coded = budget.coded_mission_bytes(profile, pad)
    rate = budget.required_rate(profile, ctx.window_per_day, b.available_days, pad)
    return {
        "images_per_run": budget.images_per_run(profile),
        "image_bytes": budget.image_bytes(profile),
        "raw_run_bytes": run_bytes,
        "raw_run_gb": budget.gb_4sig(run_bytes),
        "runs": profile.runs,
        "raw_bytes": raw,
        "raw_gb": budget.gb_4sig(raw),
        "code_rate": profile.code_rate,
        "pad_to_codeword": pad,
        "coded_bytes": coded,
        "coded_gb": budget.gb_4sig(coded),
        "link_rate_bps": ctx.link_rate.bits_per_second,
        "link_rate_kbps": round(ctx.link_rate.in_kbps, 1),
        "window_s_per_day": ctx.window_per_day.seconds,
        "days_to_downlink": budget.days_to_downlink(profile, ctx, pad),
        "available_days": b.available_days,
        "required_rate_bps": rate.bits_per_second,
        "required_rate_kbps": round(rate.in_kbps, 1),
    }


def cmd_budget(args, cfg: config.RunConfig) -> int:
    _emit(args, budget_report(cfg))
    return EXIT_OK


# -- link --------------------------------------------------------------------

def link_report(cfg: config.RunConfig) -> dict:
    lb = cfg.link.budget_input()
    terms = link.link_terms(lb)
    return {
        "tx_antenna": cfg.link.tx_antenna,
        "rx_antenna": cfg.link.rx_antenna,
        "frequency_mhz": lb.frequency.in_mhz,
        "distance_km": lb.distance_m / 1e3,
        "tx_off_boresight_deg": lb.tx_off_boresight,
        "rx_off_boresight_deg": lb.rx_off_boresight,
        "tx_axial_ratio_ok": link.axial_ratio_ok(lb.tx_pattern, lb.frequency),
        "rx_axial_ratio_ok": link.axial_ratio_ok(lb.rx_pattern, lb.frequency),
        **terms,
    }


def cmd_link(args, cfg: config.RunConfig) -> int:
    _emit(args, link_report(cfg))
    return EXIT_OK


# -- deploy ------------------------------------------------------------------

THRESHOLD_NOTE = ("no line reached its melt point: the heated steady state is below the "
                  "melt temperature at this ambient; per-line jitter (montecarlo) is what "
                  "produces partial outcomes")


def deploy(cfg: config.RunConfig) -> AdmSimulator:
    sc = cfg.scenario.scenario(cfg.seed)
    adm = cfg.adm.config()
    if cfg.scenario.jitter > 0:
        adm = draw_config(adm, Jitter.uniform(cfg.scenario.jitter), cfg.seed, 0)
    sim = AdmSimulator(sc, adm)
    sim.run()
    return sim


def cmd_deploy(args, cfg: config.RunConfig) -> int:
    sim = deploy(cfg)
    summary = sim.summary()
    notes = []
    if summary["lines_cut"] == 0 and summary["attempts"] > 0:
        notes.append(THRESHOLD_NOTE)
    report = {"ambient_c": cfg.scenario.ambient_c, "seed": cfg.seed,
              "jitter": cfg.scenario.jitter, **summary, "notes": notes}
    out = Path(args.out or "out")
    _write(out, "trace.csv", sim.trace.to_csv())
    args.out = str(out)
    _emit(args, report)
    return EXIT_OK


# -- montecarlo --------------------------------------------------------------

def parse_sweep(text: str) -> tuple[str, list[float]]:
    """``param=start:stop:step`` (inclusive), e.g. ``ambient_c=-30:60:5``."""
    try:
        param, _, rng = text.partition("=")
        start, stop, step = (float(x) for x in rng.split(":"))
        values = sweep_values(start, stop, step)
    except ValueError:
        raise config.ConfigError(f"montecarlo.sweep: cannot parse {text!r}, "
                                 "expected param=start:stop:step") from None
    if param not in SWEEPABLE:
        raise config.ConfigError(f"montecarlo.sweep: cannot sweep {param!r}; "
                                 f"choose from {sorted(SWEEPABLE)}")
    return param, values


def montecarlo_report(cfg: config.RunConfig) -> dict:
    mc = cfg.montecarlo
    sc = replace(cfg.scenario.scenario(cfg.seed), horizon_s=mc.horizon_s)
    adm = cfg.adm.config()
    jitter = Jitter.uniform(mc.jitter)
    report = {"runs": mc.runs, "jitter": mc.jitter, "seed": cfg.seed,
              "horizon_s": mc.horizon_s, "ambient_c": cfg.scenario.ambient_c}
    if mc.sweep:
        param, values = parse_sweep(mc.sweep)
        results = sweep(sc, adm, param, values, mc.runs, jitter, mc.workers)
        report["sweep_param"] = param
        report["sweep"] = [{"value": v, **r.as_dict()} for v, r in results]
    else:
        report["sweep_param"] = None
        report["sweep"] = [{"value": None,
                            **monte_carlo(sc, adm, mc.runs, jitter, mc.workers).as_dict()}]
    return report


def cmd_montecarlo(args, cfg: config.RunConfig) -> int:
    _emit(args, montecarlo_report(cfg))
    return EXIT_OK


# -- paper-check -------------------------------------------------------------

def cmd_paper_check(args, cfg: config.RunConfig) -> int:
    rows = paper_check.run_checks(cfg)
    print(paper_check.format_table(rows))
    if args.out:
        _write(Path(args.out), "report.json",
               _dump({"passed": all(r.passed for r in rows),
                      "rows": [r.as_dict() for r in rows]}))
    return EXIT_OK if all(r.passed for r in rows) else EXIT_CHECK_FAILED


# -- argument parsing --------------------------------------------------------

def _budget_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("budget overrides")
    g.add_argument("--runs", type=int, dest="budget.runs")
    g.add_argument("--compression", type=float, dest="budget.compression_ratio")
    g.add_argument("--cadence-min", type=float, dest="budget.cadence_min")
    g.add_argument("--run-hours", type=float, dest="budget.run_hours")
    g.add_argument("--width", type=int, dest="budget.image_width")
    g.add_argument("--height", type=int, dest="budget.image_height")
    g.add_argument("--channels", type=int, dest="budget.channels")
    g.add_argument("--bit-depth", type=int, dest="budget.bit_depth")
    g.add_argument("--code-data-bits", type=int, dest="budget.code_data_bits")
    g.add_argument("--code-codeword-bits", type=int, dest="budget.code_codeword_bits")
    g.add_argument("--rate-kbps", type=float, dest="budget.link_rate_kbps")
    g.add_argument("--window-s", type=float, dest="budget.window_s")
    g.add_argument("--days", type=float, dest="budget.available_days")
    g.add_argument("--pad-to-codeword", action="store_const", const=True,
                   dest="budget.pad_to_codeword")


def _adm_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("scenario / mechanism overrides")
    g.add_argument("--ambient", type=float, dest="scenario.ambient_c")
    g.add_argument("--horizon", type=float, dest="scenario.horizon_s", help="seconds")
    g.add_argument("--fault", action="append", dest="scenario.faults",
                   help="kind:index[:index][@seconds], e.g. resistor-open:0:0 (repeatable)")
    g.add_argument("--tc", action="append", dest="scenario.tc", type=_parse_tc,
                   help="seconds:confirm|override-forced-timer (repeatable)")
    g.add_argument("--battery", action="append", dest="scenario.battery", type=_parse_pair,
                   help="seconds:volts battery sample (repeatable)")
    g.add_argument("--burn-max", type=float, dest="adm.burn_max_s")
    g.add_argument("--melt-temp", type=float, dest="adm.melt_temp_c")
    g.add_argument("--supply-volts", type=float, dest="adm.supply_volts")
    g.add_argument("--resistor-ohms", type=float, dest="adm.resistor_ohms")
    g.add_argument("--min-battery", type=float, dest="adm.health_min_battery_v")


def _parse_tc(text: str) -> tuple[float, str]:
    t, _, kind = text.partition(":")
    return float(t), kind


def _parse_pair(text: str) -> tuple[float, float]:
    a, _, b = text.partition(":")
    return float(a), float(b)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ttcsim", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML run configuration")
    common.add_argument("--seed", type=int, dest="seed.value")
    common.add_argument("--out", help="output directory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("budget", parents=[common], help="mission data budget")
    _budget_flags(p)
    p.set_defaults(func=cmd_budget)

    p = sub.add_parser("link", parents=[common], help="link budget breakdown")
    g = p.add_argument_group("link overrides")
    g.add_argument("--tx-antenna", dest="link.tx_antenna", help=f"one of {sorted(link.PRESETS)}")
    g.add_argument("--rx-antenna", dest="link.rx_antenna")
    g.add_argument("--frequency-mhz", type=float, dest="link.frequency_mhz")
    g.add_argument("--distance-km", type=float, dest="link.distance_km")
    g.add_argument("--tx-power-dbw", type=float, dest="link.tx_power_dbw")
    g.add_argument("--tx-angle", type=float, dest="link.tx_angle_deg")
    g.add_argument("--rx-angle", type=float, dest="link.rx_angle_deg")
    g.add_argument("--tilt", type=float, dest="link.tilt_deg")
    g.add_argument("--misc-losses", type=float, dest="link.misc_losses_db")
    g.add_argument("--required-db", type=float, dest="link.required_cn_db")
    p.set_defaults(func=cmd_link)

    p = sub.add_parser("deploy", parents=[common], help="simulate one deployment")
    _adm_flags(p)
    p.add_argument("--jitter", type=float, dest="scenario.jitter",
                   help="relative per-line parameter spread (run 0 of the seed)")
    p.set_defaults(func=cmd_deploy)

    p = sub.add_parser("montecarlo", parents=[common], help="deployment reliability")
    _adm_flags(p)
    p.add_argument("--runs", type=int, dest="montecarlo.runs")
    p.add_argument("--jitter", type=float, dest="montecarlo.jitter")
    p.add_argument("--sweep", dest="montecarlo.sweep", help="param=start:stop:step")
    p.add_argument("--workers", type=int, dest="montecarlo.workers")
    p.add_argument("--mc-horizon", type=float, dest="montecarlo.horizon_s")
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("paper-check", parents=[common], help="reference-value checks")
    _budget_flags(p)
    p.set_defaults(func=cmd_paper_check)
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, dict]:
    out: dict[str, dict] = {}
    for key, value in vars(args).items():
        if "." in key:
            section, name = key.split(".", 1)
            out.setdefault(section, {})[name] = value
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config.load(args.config, _overrides(args))
        return args.func(args, cfg)
    except (config.ConfigError, DomainError, KeyError) as e:
        print(f"ttcsim: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except CliIOError as e:
        print(f"ttcsim: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
