"""Time-discretised PDDL+ semantics.

One tick runs: due actions, events to fixpoint, one explicit Euler step of
every active process (all rates read from the state at step start), events to
fixpoint again.  Events fire in declaration order (grounded instances sorted by
argument tuple); a pass over the event list repeats until nothing fires.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .core import (
    TOLERANCE, NumericEffect, PlanningError, PlanningProblem, SetBool,
    WorldState, compile_condition, eval_condition, expr_source, _ENV,
)

DEFAULT_DT = 0.05
MAX_CASCADE = 100
DEFAULT_HORIZON = 10.0


class CascadeDivergence(PlanningError):
    pass


class NotApplicable(PlanningError):
    def __init__(self, happening, time=None):
        where = f" at t={time:g}" if time is not None else ""
        super().__init__(f"{happening} is not applicable{where}")
        self.happening = happening
        self.time = time


@dataclass(frozen=True)
class StepOutcome:
    next: WorldState
    fired: tuple = ()
    processes_active: int = 0


def applicable(h, s: WorldState, tol=TOLERANCE) -> bool:
    """Interpreted applicability test (the simulator uses compiled tests)."""
    return eval_condition(h.precondition, s, tol)


def _compile_instant(effects, index, constants):
    """Return ``f(v) -> tuple`` applying an instantaneous effect list."""
    if not effects:
        return lambda v: v
    lines = ["def _f(v):"]
    writes = []
    for n, e in enumerate(effects):
        pos = index[e.key]
        if isinstance(e, SetBool):
            writes.append((pos, repr(bool(e.value))))
            continue
        rhs = expr_source(e.expr, index, constants)
        if e.kind == "assign":
            lines.append(f"    r{n} = float({rhs})")
        elif e.kind == "increase":
            lines.append(f"    r{n} = v[{pos}] + ({rhs})")
        else:
            lines.append(f"    r{n} = v[{pos}] - ({rhs})")
        writes.append((pos, f"r{n}"))
    lines.append("    w = list(v)")
    for pos, val in writes:
        lines.append(f"    w[{pos}] = {val}")
    lines.append("    return tuple(w)")
    env = dict(_ENV)
    exec("\n".join(lines), env)
    return env["_f"]


def _compile_rates(effects, index, constants):
    """Return ``f(v, dt) -> ((pos, delta), ...)`` for a process."""
    items = []
    for e in effects:
        if not isinstance(e, NumericEffect):
            raise PlanningError("processes may only have numeric effects")
        rhs = expr_source(e.expr, index, constants)
        sign = "" if e.kind == "increase" else "-"
        items.append(f"({index[e.key]}, {sign}({rhs}))")
    return eval(f"lambda v, dt: ({', '.join(items)},)", dict(_ENV))


class Simulator:
    """Compiled transition function for one grounded problem."""

    def __init__(self, problem: PlanningProblem, max_cascade=MAX_CASCADE, tolerance=TOLERANCE):
        self.problem = problem
        self.domain = problem.domain
        self.layout = problem.domain.layout
        self.max_cascade = max_cascade
        self.tolerance = tolerance
        idx = self.layout.index
        consts = {k: v for k, v in problem.statics.items() if k in idx}
        self.constants = consts

        def pre(h):
            return compile_condition(h.precondition, idx, consts, tolerance)

        self.actions = [(h, pre(h), _compile_instant(h.effects, idx, consts)) for h in self.domain.actions]
        self.events = [(h, pre(h), _compile_instant(h.effects, idx, consts)) for h in self.domain.events]
        self.processes = [(h, pre(h), _compile_rates(h.effects, idx, consts)) for h in self.domain.processes]
        self._action_by_ident = {h.ident: (h, p, f) for h, p, f in self.actions}
        self._goal = compile_condition(problem.goal, idx, consts, tolerance)

    # -- queries
    def goal(self, s: WorldState) -> bool:
        return self._goal(s.values)

    def applicable(self, h, s: WorldState) -> bool:
        entry = self._action_by_ident.get(h.ident) if h.kind == "action" else None
        if entry is not None and entry[0] == h:
            return entry[1](s.values)
        return applicable(h, s, self.tolerance)

    def applicable_actions(self, s: WorldState) -> list:
        return [h for h, p, _ in self.actions if p(s.values)]

    def active_processes(self, s: WorldState) -> list:
        return [h for h, p, _ in self.processes if p(s.values)]

    def applicable_events(self, s: WorldState) -> list:
        return [h for h, p, _ in self.events if p(s.values)]

    # -- transitions
    def _fixpoint(self, v):
        fired = []
        limit = self.max_cascade
        events = self.events
        progress = True
        while progress:
            progress = False
            for h, p, f in events:
                if p(v):
                    if len(fired) >= limit:
                        raise CascadeDivergence(f"no event fixpoint after {limit} firings (last: {h.ident})")
                    v = f(v)
                    fired.append(h.ident)
                    progress = True
        return v, fired

    def fire_events(self, s: WorldState) -> StepOutcome:
        v, fired = self._fixpoint(s.values)
        if not fired:
            return StepOutcome(s, (), 0)
        return StepOutcome(WorldState(v, s.time, self.layout), tuple(fired), 0)

    def step(self, s: WorldState, dt: float) -> StepOutcome:
        """Integrate active processes over ``dt`` then settle events."""
        if not dt > 0:
            raise ValueError("dt must be positive")
        v = s.values
        deltas = {}
        active = 0
        for _, p, rates in self.processes:
            if p(v):
                active += 1
                for pos, d in rates(v, dt):
                    deltas[pos] = deltas.get(pos, 0.0) + d
        if deltas:
            w = list(v)
            for pos, d in deltas.items():
                w[pos] = w[pos] + d
            v = tuple(w)
        v, fired = self._fixpoint(v)
        return StepOutcome(WorldState(v, s.time + dt, self.layout), tuple(fired), active)

    def advance_time(self, s: WorldState, dt: float) -> WorldState:
        return self.step(s, dt).next

    def apply_action(self, s: WorldState, a) -> StepOutcome:
        entry = self._action_by_ident.get(a.ident)
        if entry is None or entry[0] != a:
            raise NotApplicable(a.ident, s.time)
        _, p, f = entry
        if not p(s.values):
            raise NotApplicable(a.ident, s.time)
        v, fired = self._fixpoint(f(s.values))
        return StepOutcome(WorldState(v, s.time, self.layout), tuple(fired), 0)

    def action(self, name, *args):
        entry = self._action_by_ident.get(" ".join((name, *args)))
        if entry is None:
            raise PlanningError(f"no grounded action {name} {' '.join(args)}")
        return entry[0]


@dataclass
class ValidationResult:
    passes: bool
    trace: list = field(default_factory=list)
    fired: list = field(default_factory=list)
    goal_time: float = None

    @property
    def final(self) -> WorldState:
        return self.trace[-1]


def validate_plan(problem: PlanningProblem, plan, dt=DEFAULT_DT, horizon=DEFAULT_HORIZON,
                  stop_at_goal=True, sim=None) -> ValidationResult:
    """Execute ``plan`` from the initial state on a ``dt`` grid.

    Passes iff the goal holds in some visited state.  Simulation continues for
    ``horizon`` seconds after the last action (or until the goal holds when
    ``stop_at_goal``).
    """
    sim = sim or Simulator(problem)
    due = {}
    for step in plan.steps:
        k = int(math.floor(step.time / dt + 0.5))
        due.setdefault(k, []).append(step)
    last = max(due) if due else 0
    end_tick = last + int(math.ceil(horizon / dt - 1e-9))
    out = sim.fire_events(problem.initial)
    s = out.next
    res = ValidationResult(False, [s], [out.fired])
    tick = 0
    while True:
        for step in due.get(tick, ()):
            a = sim.action(step.name, *step.args)
            if not sim.applicable(a, s):
                raise NotApplicable(a.ident, tick * dt)
            out = sim.apply_action(s, a)
            s = out.next
            res.trace.append(s)
            res.fired.append(out.fired)
        if sim.goal(s) and not res.passes:
            res.passes = True
            res.goal_time = tick * dt
            if stop_at_goal:
                break
        if tick >= end_tick:
            break
        out = sim.step(s, dt)
        s = out.next
        res.trace.append(s)
        res.fired.append(out.fired)
        tick += 1
    return res


def trace_records(trace, fired):
    """Line records for a simulated trace: time, changed fluents, fired events."""
    prev = None
    for s, f in zip(trace, fired):
        if prev is None:
            changed = s.as_dict()
        else:
            changed = {k: b for k, a, b in zip(s.layout.keys, prev.values, s.values) if a != b}
        yield {
            "t": round(s.time, 9),
            "changed": {" ".join(k): v for k, v in changed.items()},
            "events": list(f),
        }
        prev = s


def write_trace(path, trace, fired):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in trace_records(trace, fired):
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
