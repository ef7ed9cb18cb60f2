"""First-order lumped thermal model of a melt line next to a knife resistor.

    C dT/dt = P * heated - k (T - T_ambient)

While a knife is firing the equation is integrated with RK4 sub-steps no
longer than tau/20 (tau = C/k) so that the melt crossing can be located
inside a step. Between burns the exact exponential decay is used instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

from .config import AdmConfig, LineParams, knife_power_w
from ..quantities import DomainError

SUBSTEPS_PER_TAU = 20


@dataclass(frozen=True)
class MeltLine:
    id: int
    temp_c: float
    cut: bool = False
    cut_time_s: float | None = None


def steady_state_c(params: LineParams, power_w: float, ambient_c: float) -> float:
    return ambient_c + power_w / params.conductance_w_per_k


def _rk4_factor(z: float) -> float:
    # one classical RK4 step of y' = -y/tau with z = h/tau, written out
    return 1.0 - z + z * z / 2.0 - z ** 3 / 6.0 + z ** 4 / 24.0


def cool_exact(temp_c: float, params: LineParams, ambient_c: float, dt: float) -> float:
    return ambient_c + (temp_c - ambient_c) * math.exp(-dt / params.tau_s)


def integrate_heated(temps: Sequence[float], params: Sequence[LineParams],
                     powers: Sequence[float], ambient_c: float,
                     t0: float, t1: float) -> tuple[list[float], list[float | None]]:
    """Advance the uncut lines ``temps`` from ``t0`` to ``t1``.

    ``powers[i]`` is the heat reaching line i (0 when its resistor is off).
    Returns the end temperatures and, per line, the instant it first reached
    its melt point (linear interpolation inside the crossing step) or None.
    A line that crosses keeps the melt temperature from then on.
    """
    n = len(temps)
    span = t1 - t0
    temps = list(temps)
    cut_at: list[float | None] = [None] * n
    if span <= 0 or n == 0:
        return temps, cut_at
    h_max = min(p.tau_s for p in params) / SUBSTEPS_PER_TAU
    steps = max(1, math.ceil(span / h_max - 1e-12))
    h = span / steps
    targets = [ambient_c + powers[i] / params[i].conductance_w_per_k for i in range(n)]
    factors = [_rk4_factor(h / params[i].tau_s) for i in range(n)]
    melts = [p.melt_temp_c for p in params]
    for i in range(n):
        if temps[i] >= melts[i]:
            cut_at[i] = t0
            temps[i] = melts[i]
    live = [i for i in range(n) if cut_at[i] is None]
    for step in range(steps):
        if not live:
            break
        t_start = t0 + step * h
        still = []
        for i in live:
            old = temps[i]
            new = targets[i] + (old - targets[i]) * factors[i]
            if new >= melts[i]:
                frac = (melts[i] - old) / (new - old)
                cut_at[i] = t_start + frac * h
                temps[i] = melts[i]
            else:
                temps[i] = new
                still.append(i)
        live = still
    return temps, cut_at


def line_temp_step(line: MeltLine, heated: bool, cfg: AdmConfig, ambient_c: float,
                   dt: float, t0: float = 0.0, params: LineParams | None = None) -> MeltLine:
    if dt <= 0:
        raise DomainError("dt must be positive")
    if line.cut:
        return line
    params = params or cfg.lines()[line.id]
    power = knife_power_w(cfg) if heated else 0.0
    temps, cuts = integrate_heated([line.temp_c], [params], [power], ambient_c, t0, t0 + dt)
    if cuts[0] is not None:
        return replace(line, temp_c=temps[0], cut=True, cut_time_s=cuts[0])
    return replace(line, temp_c=temps[0])
