"""Plan, execute, observe, replan: the per-level episode loop.

The executor is the same discrete simulator run at a finer step than the
planner uses, so plans can miss in execution the way they miss in a real game.
Each bird is planned as its own single-bird problem built from the observed
state of the level.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Optional

from ..birds import (
    BirdsConfig, direct_shot_angles, observe_level, preferred_predicate, proximity_heuristic,
    score_heuristic, single_bird, translate_level,
)
from ..birds.level import LevelDescription
from ..search import Plan, PlanStep, SearchStats, search
from ..sim import DEFAULT_DT, Simulator

SHOT_HORIZON = 10.0


@dataclass(frozen=True)
class AgentConfig:
    """``kind`` is ``planner`` or ``baseline``.  Planner agents search with
    ``strategy``/``heuristic``/``helpful``; strategy ``none`` never plans."""

    name: str
    kind: str = "planner"
    strategy: str = "gbfs"
    heuristic: str = "proximity"
    helpful: bool = False


AGENTS = {
    "planner": AgentConfig("planner", helpful=True),
    "gbfs-helpful": AgentConfig("gbfs-helpful", helpful=True),
    "gbfs-hp": AgentConfig("gbfs-hp"),
    "gbfs-hs": AgentConfig("gbfs-hs", heuristic="score"),
    "astar-hp": AgentConfig("astar-hp", strategy="astar"),
    "bfs": AgentConfig("bfs", strategy="bfs", heuristic="none"),
    "dfs": AgentConfig("dfs", strategy="dfs", heuristic="none"),
    "fallback-only": AgentConfig("fallback-only", strategy="none", heuristic="none"),
    "baseline": AgentConfig("baseline", kind="baseline", strategy="none", heuristic="none"),
}


def agent_config(name) -> AgentConfig:
    if isinstance(name, AgentConfig):
        return name
    try:
        return AGENTS[name]
    except KeyError:
        raise ValueError(f"unknown agent {name!r}; choose from {', '.join(AGENTS)}") from None


def guidance(problem, agent: AgentConfig, config: BirdsConfig, horizon=SHOT_HORIZON):
    """Heuristic and preferred-state test for ``agent`` on ``problem``."""
    h = None
    if agent.heuristic == "proximity":
        h = proximity_heuristic(problem, horizon)
    elif agent.heuristic == "score":
        h = score_heuristic(problem, config)
    pref = preferred_predicate(problem) if agent.helpful else None
    return h, pref


@dataclass
class Shot:
    bird: int
    release_time: float        # seconds after the bird was loaded
    angle: float
    source: str                # plan | fallback | baseline
    target: Optional[int] = None
    stats: Optional[SearchStats] = None
    predicted_kill: bool = False
    pigs_killed: int = 0


@dataclass
class EpisodeResult:
    level_id: str
    template: int
    seed: int
    agent: str
    passed: bool
    birds_used: int
    pigs_killed: int
    total_pigs: int
    shots: list = field(default_factory=list)
    executed: Plan = field(default_factory=Plan)
    wall_ms: float = 0.0

    @property
    def fallback_shots(self):
        return sum(1 for s in self.shots if s.source == "fallback")

    @property
    def fidelity_misses(self):
        """Shots whose plan predicted a kill that execution did not deliver."""
        return sum(1 for s in self.shots if s.predicted_kill and s.pigs_killed == 0)

    @property
    def nodes_expanded(self):
        return sum(s.stats.nodes_expanded for s in self.shots if s.stats)

    @property
    def nodes_generated(self):
        return sum(s.stats.nodes_generated for s in self.shots if s.stats)

    @property
    def plan_wall_ms(self):
        return sum(s.stats.wall_ms for s in self.shots if s.stats)


def _live_pigs(state, n):
    return [i for i in range(n) if not state.get("pig_dead", f"p{i}")]


def _aim(lv: LevelDescription, target: int, rng: random.Random, max_angle):
    """Low arc if in range, else high arc, else a random angle."""
    pig = lv.pigs[target]
    v = lv.birds[0].v_max if lv.birds else 0.0
    sol = direct_shot_angles(lv.slingshot, (pig.x_pig, pig.y_pig), v, lv.gravity)
    if sol is not None:
        for theta in sol:
            if 0.0 <= theta <= max_angle:
                return theta
    return rng.uniform(0.0, max_angle)


def run_episode(lv: LevelDescription, agent="planner", dt_plan=DEFAULT_DT, dt_exec=None,
                timeout=None, seed=0, node_limit=20000, config: BirdsConfig = BirdsConfig(),
                horizon=SHOT_HORIZON) -> EpisodeResult:
    """Play ``lv`` to the end with ``agent``.

    ``timeout`` is wall seconds per search and ``node_limit`` caps expansions
    per search; either may be ``None``.  With only ``node_limit`` set the run
    is fully deterministic.
    """
    agent = agent_config(agent)
    dt_exec = dt_plan / 5 if dt_exec is None else dt_exec
    t_start = time.perf_counter()
    problem = translate_level(lv, config)
    sim = Simulator(problem)
    state = sim.fire_events(problem.initial).next
    rng = random.Random(f"episode:{lv.name}:{agent.name}:{seed}")
    n_pigs, n_birds = len(lv.pigs), len(lv.birds)
    rate = config.angle_rate
    res = EpisodeResult(lv.name, lv.template, seed, agent.name, False, 0, 0, n_pigs)
    clock = 0
    executed = []

    while _live_pigs(state, n_pigs):
        bird = int(round(state.get("active_bird")))
        if bird >= n_birds:
            break
        live = _live_pigs(state, n_pigs)
        shot = None
        if agent.kind == "planner" and agent.strategy != "none":
            shot_lv = single_bird(observe_level(problem, state, lv))
            shot_problem = translate_level(shot_lv, config)
            h, pref = guidance(shot_problem, agent, config, horizon)
            out = search(shot_problem, agent.strategy, heuristic=h, helpful=agent.helpful,
                         preferred=pref, timeout=timeout, dt=dt_plan, horizon=horizon,
                         node_limit=node_limit)
            if out.plan is not None and out.plan.steps:
                t_rel = out.plan.steps[0].time
                shot = Shot(bird, t_rel, rate * t_rel, "plan", stats=out.stats, predicted_kill=True)
            else:
                shot = Shot(bird, 0.0, 0.0, "fallback", stats=out.stats)
        if shot is None or shot.source == "fallback":
            target = live[rng.randrange(len(live))]
            theta = _aim(lv, target, rng, config.max_angle)
            source = "baseline" if agent.kind == "baseline" else "fallback"
            stats = shot.stats if shot is not None else None
            shot = Shot(bird, theta / rate, theta, source, target=target, stats=stats)

        # sweep the angle up to the release tick, release, then fly
        release_tick = int(math.floor(shot.release_time / dt_exec + 0.5))
        before = n_pigs - len(live)
        a = sim.action("release_bird", f"b{bird}")
        for _ in range(release_tick):
            state = sim.step(state, dt_exec).next
            clock += 1
        executed.append(PlanStep(round(clock * dt_exec, 9), a.name, a.args))
        state = sim.apply_action(state, a).next
        max_ticks = int(math.ceil((config.max_flight_time + 1.0) / dt_exec))
        for _ in range(max_ticks):
            if int(round(state.get("active_bird"))) != bird or not _live_pigs(state, n_pigs):
                break
            state = sim.step(state, dt_exec).next
            clock += 1
        shot.pigs_killed = (n_pigs - len(_live_pigs(state, n_pigs))) - before
        res.shots.append(shot)
        res.birds_used += 1

    res.pigs_killed = n_pigs - len(_live_pigs(state, n_pigs))
    res.passed = res.pigs_killed == n_pigs
    res.executed = Plan(executed, round(clock * dt_exec, 9))
    res.wall_ms = (time.perf_counter() - t_start) * 1000.0
    return res


def baseline_agent(lv: LevelDescription, seed=0, dt_exec=DEFAULT_DT / 5,
                   config: BirdsConfig = BirdsConfig()) -> list:
    """Shots fired by the direct-aim baseline, one per bird used."""
    return run_episode(lv, "baseline", dt_exec=dt_exec, seed=seed, config=config).shots
