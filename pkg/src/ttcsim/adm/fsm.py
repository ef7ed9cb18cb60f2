"""Deployment control logic and its discrete-event driver.

The controller follows the on-board feedback loop: health check, fire one
knife set, read the tactile switches, then

* all switches open  -> wait 6 h for a confirming telecommand, re-fire otherwise
* some still closed  -> retry after 15 min (on the next knife set)
* confirm TC while partial -> arm a 24 h timer that fires the knives
  regardless of the health check, unless an override TC cancels it.

Only one knife set is ever powered at a time. Events at the same instant
run in insertion order.
"""
from __future__ import annotations

import csv
import enum
import heapq
import io
import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable

from .config import AdmConfig, knife_power_w
from .scenario import FaultKind, FaultSpec, Scenario, TcKind
from .thermal import cool_exact, integrate_heated

RETRY_PARTIAL = "retry_partial"
REATTEMPT_FULL = "reattempt_full"
FORCED_BURN = "forced_burn"
BURN_MAX = "burn_max"


class Phase(str, enum.Enum):
    STOWED = "Stowed"
    HEALTH_CHECK = "HealthCheck"
    BURNING = "Burning"
    EVALUATE = "Evaluate"
    PARTIAL = "Partial"
    DEPLOYED_UNCONFIRMED = "DeployedUnconfirmed"
    DEPLOYED_CONFIRMED = "DeployedConfirmed"


class ProtocolError(RuntimeError):
    pass


@dataclass
class AdmState:
    n_doors: int
    line_temps: list[float]
    phase: Phase = Phase.STOWED
    doors_open: list[bool] = field(default_factory=list)
    switches_open: list[bool] = field(default_factory=list)
    lines_cut: list[bool] = field(default_factory=list)
    cut_times: list[float | None] = field(default_factory=list)
    timers: dict[str, float] = field(default_factory=dict)
    next_knife_set: int = 0
    active_knife_set: int | None = None
    attempt_count: int = 0
    forced_pending: bool = False
    active_faults: list[FaultSpec] = field(default_factory=list)
    confirmed_at: float | None = None
    sim_time: float = 0.0

    def __post_init__(self):
        n = self.n_doors
        self.doors_open = self.doors_open or [False] * n
        self.switches_open = self.switches_open or [False] * n
        self.lines_cut = self.lines_cut or [False] * n
        self.cut_times = self.cut_times or [None] * n

    @property
    def forced_timer_armed(self) -> bool:
        return FORCED_BURN in self.timers

    def fault_active(self, kind: FaultKind, target) -> bool:
        return any(f.kind is kind and f.target == target for f in self.active_faults)


def health_check(state: AdmState, scenario: Scenario, cfg: AdmConfig) -> bool:
    v = scenario.battery_at(state.sim_time)
    if v is None:
        return True
    return v >= cfg.health_min_battery_v


@dataclass(frozen=True)
class TraceRecord:
    time: float
    phase: Phase
    event: str
    knife_set: int | None
    line_temps: tuple[float, ...]
    switches: tuple[bool, ...]
    note: str = ""


@dataclass
class EventTrace:
    n_doors: int
    records: list[TraceRecord] = field(default_factory=list)

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def events(self) -> list[tuple[str, str]]:
        return [(r.phase.value, r.event) for r in self.records]

    def header(self) -> list[str]:
        n = self.n_doors
        return (["time_s", "phase", "event", "knife_set"]
                + [f"line_temp_{i}" for i in range(n)]
                + [f"switch_{i}" for i in range(n)] + ["note"])

    def rows(self) -> Iterable[list[str]]:
        for r in self.records:
            yield ([f"{r.time:.6f}", r.phase.value, r.event,
                    "" if r.knife_set is None else str(r.knife_set)]
                   + [f"{t:.3f}" for t in r.line_temps]
                   + ["1" if s else "0" for s in r.switches] + [r.note])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header())
        w.writerows(self.rows())
        return buf.getvalue()

    def to_json(self) -> str:
        keys = self.header()
        return json.dumps([dict(zip(keys, row)) for row in self.rows()], indent=1) + "\n"


class AdmSimulator:
    """Runs one scenario. Each public method is one step of the protocol."""

    def __init__(self, scenario: Scenario, cfg: AdmConfig):
        for f in scenario.faults:
            f.validate(cfg)
        self.scenario = scenario
        self.cfg = cfg
        self.params = cfg.lines()
        self.power = knife_power_w(cfg)
        self.state = AdmState(cfg.n_doors, [scenario.ambient_c] * cfg.n_doors)
        self.trace = EventTrace(cfg.n_doors)
        self._queue: list[tuple[float, int, str, object]] = []
        self._seq = itertools.count()
        self._queued_timers: set[tuple[str, float]] = set()
        self._done = False

    # -- bookkeeping -------------------------------------------------------

    def record(self, event: str, note: str = "") -> None:
        s = self.state
        self.trace.records.append(TraceRecord(
            s.sim_time, s.phase, event, s.active_knife_set,
            tuple(s.line_temps), tuple(s.switches_open), note))

    def _push(self, time: float, kind: str, payload: object = None) -> None:
        heapq.heappush(self._queue, (time, next(self._seq), kind, payload))

    def _sync_timers(self) -> None:
        for tid, deadline in self.state.timers.items():
            if (tid, deadline) not in self._queued_timers:
                self._queued_timers.add((tid, deadline))
                self._push(deadline, "timer", (tid, deadline))

    def arm(self, timer_id: str, duration: float, quiet: bool = False) -> None:
        deadline = self.state.sim_time + duration
        self.state.timers[timer_id] = deadline
        if not quiet:
            self.record("timer_armed", f"{timer_id} deadline={deadline:.3f}")

    def _duration(self, timer_id: str) -> float:
        return {RETRY_PARTIAL: self.cfg.retry_partial_s,
                REATTEMPT_FULL: self.cfg.reattempt_full_s,
                FORCED_BURN: self.cfg.forced_burn_timer_s,
                BURN_MAX: self.cfg.burn_max_s}[timer_id]

    def _refresh_switches(self) -> None:
        s = self.state
        for i in range(s.n_doors):
            if s.fault_active(FaultKind.SWITCH_STUCK_OPEN, i):
                s.switches_open[i] = True
            elif s.fault_active(FaultKind.SWITCH_STUCK_CLOSED, i):
                s.switches_open[i] = False
            else:
                s.switches_open[i] = s.doors_open[i]

    # -- thermal / mechanical ----------------------------------------------

    def _line_powers(self, knife_set: int) -> list[float]:
        s = self.state
        return [0.0 if s.fault_active(FaultKind.RESISTOR_OPEN, (knife_set, self.cfg.resistor_for(i)))
                else self.power for i in range(s.n_doors)]

    def _cut_line(self, i: int, note: str = "") -> None:
        s = self.state
        s.lines_cut[i] = True
        s.cut_times[i] = s.sim_time
        if s.fault_active(FaultKind.DOOR_STUCK, i):
            self.record("line_cut", f"line={i} door stuck{note}")
            return
        self.record("line_cut", f"line={i}{note}")
        s.doors_open[i] = True
        self._refresh_switches()
        self.record("door_open", f"door={i}")

    def _burn_complete(self) -> bool:
        s = self.state
        if s.phase is Phase.BURNING and all(s.lines_cut):
            self._end_burn("all_cut")
            return True
        return False

    def advance_to(self, t: float) -> bool:
        """Move the clock to ``t``. Returns False if it had to stop early
        because a burn finished (new events may now precede ``t``)."""
        s = self.state
        amb = self.scenario.ambient_c
        if t <= s.sim_time:
            return True
        if s.phase is not Phase.BURNING:
            dt = t - s.sim_time
            for i in range(s.n_doors):
                if not s.lines_cut[i]:
                    s.line_temps[i] = cool_exact(s.line_temps[i], self.params[i], amb, dt)
            s.sim_time = t
            return True
        live = [i for i in range(s.n_doors) if not s.lines_cut[i]]
        powers = self._line_powers(s.active_knife_set)
        temps, cut_at = integrate_heated([s.line_temps[i] for i in live],
                                         [self.params[i] for i in live],
                                         [powers[i] for i in live], amb, s.sim_time, t)
        for j, i in enumerate(live):
            s.line_temps[i] = temps[j]
        for tc, j in sorted((tc, j) for j, tc in enumerate(cut_at) if tc is not None):
            s.sim_time = tc
            self._cut_line(live[j])
            if self._burn_complete():
                return False
        s.sim_time = t
        return True

    def apply_fault(self, fault: FaultSpec) -> None:
        s = self.state
        s.active_faults.append(fault)
        self.record("fault_active", str(fault))
        if fault.kind is FaultKind.LINE_PRE_CUT and not s.lines_cut[fault.target]:
            s.line_temps[fault.target] = self.scenario.ambient_c
            self._cut_line(fault.target, " precut")
        elif fault.kind in (FaultKind.SWITCH_STUCK_OPEN, FaultKind.SWITCH_STUCK_CLOSED):
            self._refresh_switches()
        self._burn_complete()

    # -- protocol steps ----------------------------------------------------

    def health_gate(self, retry_timer: str) -> None:
        """Health check, then burn on pass or re-arm ``retry_timer`` on fail."""
        s = self.state
        prev = s.phase
        s.phase = Phase.HEALTH_CHECK
        ok = health_check(s, self.scenario, self.cfg)
        v = self.scenario.battery_at(s.sim_time)
        self.record("health_check", ("pass" if ok else "fail")
                    + ("" if v is None else f" battery={v:.2f}V"))
        if ok:
            self.start_burn()
        else:
            s.phase = prev
            self.arm(retry_timer, self._duration(retry_timer))

    def start_burn(self, forced: bool = False) -> None:
        s = self.state
        if s.phase is Phase.BURNING:
            raise ProtocolError("a knife set is already firing")
        if s.phase is Phase.DEPLOYED_CONFIRMED:
            raise ProtocolError("deployment already confirmed")
        s.timers.pop(RETRY_PARTIAL, None)
        s.timers.pop(REATTEMPT_FULL, None)
        k = s.next_knife_set
        s.next_knife_set = (k + 1) % self.cfg.knife_sets
        s.active_knife_set = k
        s.attempt_count += 1
        s.phase = Phase.BURNING
        self.arm(BURN_MAX, self.cfg.burn_max_s, quiet=True)
        self.record("burn_start", f"attempt={s.attempt_count}" + (" forced" if forced else ""))
        self._burn_complete()

    def _end_burn(self, reason: str) -> None:
        s = self.state
        s.timers.pop(BURN_MAX, None)
        self.record("burn_end", reason)
        s.active_knife_set = None
        s.phase = Phase.EVALUATE
        self.evaluate_switches()

    def evaluate_switches(self) -> None:
        s = self.state
        if s.phase is not Phase.EVALUATE:
            raise ProtocolError(f"evaluate called in {s.phase.value}")
        n_open = sum(s.switches_open)
        self.record("evaluate", f"open={n_open}/{s.n_doors}")
        if n_open == s.n_doors:
            s.phase = Phase.DEPLOYED_UNCONFIRMED
            self.arm(REATTEMPT_FULL, self.cfg.reattempt_full_s)
        else:
            s.phase = Phase.PARTIAL
            self.arm(RETRY_PARTIAL, self.cfg.retry_partial_s)
        if s.forced_pending:
            s.forced_pending = False
            self.start_burn(forced=True)

    def handle_tc(self, tc: TcKind) -> None:
        s = self.state
        self.record("tc_received", tc.value)
        if s.phase is Phase.DEPLOYED_CONFIRMED:
            self.record("tc_ignored", "terminal")
            return
        if tc is TcKind.CONFIRM:
            if s.phase is Phase.DEPLOYED_UNCONFIRMED:
                s.timers.clear()
                s.forced_pending = False
                s.phase = Phase.DEPLOYED_CONFIRMED
                s.confirmed_at = s.sim_time
                self.record("confirmed")
            elif s.phase is Phase.PARTIAL:
                if s.forced_timer_armed or s.forced_pending:
                    self.record("tc_ignored", "forced timer already armed")
                else:
                    self.arm(FORCED_BURN, self.cfg.forced_burn_timer_s)
            else:
                self.record("tc_ignored", f"confirm during {s.phase.value}")
        elif tc is TcKind.OVERRIDE_FORCED_TIMER:
            if s.forced_timer_armed or s.forced_pending:
                s.timers.pop(FORCED_BURN, None)
                s.forced_pending = False
                self.record("timer_cancelled", FORCED_BURN)
            else:
                self.record("tc_ignored", "no forced timer")

    def on_timer(self, timer_id: str) -> None:
        s = self.state
        if s.timers.pop(timer_id, None) is None:
            raise ProtocolError(f"timer {timer_id} is not armed")
        if timer_id == BURN_MAX:
            self.record("timer_expired", timer_id)
            self._end_burn("burn_max")
            return
        self.record("timer_expired", timer_id)
        if timer_id == FORCED_BURN:
            if s.phase is Phase.BURNING:
                s.forced_pending = True
            else:
                self.start_burn(forced=True)
        else:
            self.health_gate(timer_id)

    # -- driver ------------------------------------------------------------

    def run(self) -> EventTrace:
        sc = self.scenario
        self.record("start", f"ambient={sc.ambient_c:g}C")
        for f in sorted(sc.faults, key=lambda f: f.active_from):
            self._push(f.active_from, "fault", f)
        self._push(0.0, "deploy")
        for when, kind in sc.tc_schedule:
            self._push(when, "tc", TcKind(kind))
        self._push(sc.horizon_s, "horizon")

        while self._queue:
            self._sync_timers()
            t_next = self._queue[0][0]
            if not self.advance_to(t_next):
                continue
            _, _, kind, payload = heapq.heappop(self._queue)
            if kind == "timer":
                tid, deadline = payload
                if self.state.timers.get(tid) != deadline:
                    continue
                self.on_timer(tid)
            elif kind == "fault":
                self.apply_fault(payload)
            elif kind == "tc":
                self.handle_tc(payload)
            elif kind == "deploy":
                self.health_gate(RETRY_PARTIAL)
            elif kind == "horizon":
                self.record("horizon", f"final={self.state.phase.value}")
                break
            if self.state.phase is Phase.DEPLOYED_CONFIRMED:
                break
        return self.trace

    def summary(self) -> dict:
        s = self.state
        return {
            "final_phase": s.phase.value,
            "attempts": s.attempt_count,
            "doors_open": sum(s.doors_open),
            "doors": list(s.doors_open),
            "switches_open": list(s.switches_open),
            "lines_cut": sum(s.lines_cut),
            "cut_times_s": [None if t is None else round(t, 6) for t in s.cut_times],
            "confirmed_at_s": s.confirmed_at,
            "end_time_s": round(s.sim_time, 6),
            "events": len(self.trace),
        }


def run_scenario(scenario: Scenario, cfg: AdmConfig | None = None) -> EventTrace:
    return AdmSimulator(scenario, cfg or AdmConfig()).run()


def simulate(scenario: Scenario, cfg: AdmConfig | None = None) -> AdmSimulator:
    """Run a scenario and return the finished simulator (trace + final state)."""
    sim = AdmSimulator(scenario, cfg or AdmConfig())
    sim.run()
    return sim
