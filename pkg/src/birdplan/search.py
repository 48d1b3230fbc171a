"""Forward search over the discretised transition graph.

A node has one child per applicable action (zero time) and one ``wait`` child
that advances the clock by ``dt``.  Goal tests happen when a node is popped.
Duplicates are detected on a quantised copy of the dynamic fluents; the clock
is not part of the key.
"""

from __future__ import annotations

import heapq
import math
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import PlanningError
from .sim import DEFAULT_DT, DEFAULT_HORIZON, CascadeDivergence, Simulator

STRATEGIES = ("bfs", "dfs", "gbfs", "astar")
DEFAULT_TIMEOUT = 30.0
QUANTUM = 1e-6


class InvalidConfig(PlanningError, ValueError):
    pass


class BothEmpty(PlanningError, IndexError):
    pass


@dataclass
class SearchNode:
    state: object
    parent: Optional["SearchNode"] = None
    incoming: object = None  # Happening, "wait", or None for the root
    ticks: int = 0
    h: float = 0.0
    preferred: bool = False
    depth: int = 0
    nid: int = 0

    def g(self, dt):
        return self.ticks * dt


@dataclass(frozen=True)
class PlanStep:
    time: float
    name: str
    args: tuple = ()

    def __str__(self):
        return " ".join((f"t={self.time!r}", self.name, *self.args))


@dataclass
class Plan:
    steps: list = field(default_factory=list)
    makespan: float = 0.0

    def __len__(self):
        return len(self.steps)

    def to_text(self) -> str:
        return "".join(f"{s}\n" for s in self.steps)

    @classmethod
    def from_text(cls, text: str) -> "Plan":
        steps = []
        for n, line in enumerate(text.splitlines(), 1):
            line = line.split(";", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if not parts[0].startswith("t="):
                raise PlanningError(f"plan line {n}: expected 't=<seconds>'")
            steps.append(PlanStep(float(parts[0][2:]), parts[1], tuple(parts[2:])))
        times = [s.time for s in steps]
        if times != sorted(times):
            raise PlanningError("plan times must be non-decreasing")
        return cls(steps, times[-1] if times else 0.0)


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    nodes_generated: int = 0
    wall_ms: float = 0.0
    solved: bool = False
    dropped: int = 0  # children lost to event-cascade divergence
    duplicates: int = 0
    timed_out: bool = False

    def as_text(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in (
            ("nodes_expanded", self.nodes_expanded), ("nodes_generated", self.nodes_generated),
            ("wall_ms", round(self.wall_ms, 3)), ("solved", str(self.solved).lower()),
            ("dropped", self.dropped), ("duplicates", self.duplicates),
            ("timed_out", str(self.timed_out).lower())))


@dataclass
class SearchResult:
    plan: Optional[Plan]
    stats: SearchStats
    expansions: Optional[list] = None
    goal_node: Optional[SearchNode] = None


class DualOpenList:
    """Two priority queues: preferred nodes only, and every node.

    Pops alternate preferred, regular, preferred, ...; an empty scheduled queue
    yields to the other.  A node present in both lists is returned once.  Ties
    on the key break by ``node.nid`` (generation order).
    """

    def __init__(self, start_preferred=True):
        self.preferred = []
        self.regular = []
        self._turn_preferred = start_preferred
        self._popped = set()

    def push(self, key, node, preferred=False):
        heapq.heappush(self.regular, (key, node.nid, node))
        if preferred:
            heapq.heappush(self.preferred, (key, node.nid, node))

    def __len__(self):
        self._drop_stale(self.preferred)
        self._drop_stale(self.regular)
        return len(self.regular) + len(self.preferred)

    def _drop_stale(self, heap):
        while heap and heap[0][1] in self._popped:
            heapq.heappop(heap)

    def pop(self):
        """Helpful-states selection: next node under strict alternation."""
        self._drop_stale(self.preferred)
        self._drop_stale(self.regular)
        first, second = ((self.preferred, self.regular) if self._turn_preferred
                         else (self.regular, self.preferred))
        self._turn_preferred = not self._turn_preferred
        heap = first if first else second
        if not heap:
            raise BothEmpty("both open lists are empty")
        _, nid, node = heapq.heappop(heap)
        self._popped.add(nid)
        return node


def _state_key(values, dyn, q=QUANTUM):
    inv = 1.0 / q
    return tuple(round(values[i] * inv) if type(values[i]) is float else values[i] for i in dyn)


def _dynamic_positions(problem):
    changed = set()
    for h in problem.domain.happenings:
        for e in h.effects:
            changed.add(e.key)
    return [i for i, k in enumerate(problem.domain.layout.keys) if k in changed]


def _extract_plan(node, dt):
    steps = []
    goal_ticks = node.ticks
    while node.parent is not None:
        if node.incoming != "wait":
            a = node.incoming
            steps.append(PlanStep(round(node.ticks * dt, 9), a.name, a.args))
        node = node.parent
    steps.reverse()
    return Plan(steps, round(goal_ticks * dt, 9))


def successors(node: SearchNode, sim: Simulator, dt: float, stats: Optional[SearchStats] = None,
               max_ticks=None) -> list:
    """Children of ``node``: applicable actions first, then the wait child."""
    children = []
    s = node.state
    for a in sim.applicable_actions(s):
        try:
            out = sim.apply_action(s, a)
        except (CascadeDivergence, ZeroDivisionError):
            if stats is not None:
                stats.dropped += 1
            continue
        children.append(SearchNode(out.next, node, a, node.ticks, depth=node.depth + 1))
    if max_ticks is None or node.ticks < max_ticks:
        try:
            out = sim.step(s, dt)
        except (CascadeDivergence, ZeroDivisionError):
            if stats is not None:
                stats.dropped += 1
        else:
            children.append(SearchNode(out.next, node, "wait", node.ticks + 1, depth=node.depth + 1))
    return children


def search(problem, strategy="gbfs", heuristic: Optional[Callable] = None, helpful=False,
           timeout=DEFAULT_TIMEOUT, dt=DEFAULT_DT, preferred: Optional[Callable] = None,
           horizon=DEFAULT_HORIZON, duplicate_detection=True, node_limit=None,
           record_expansions=False, sim=None) -> SearchResult:
    """Search for a plan reaching the problem goal.

    ``heuristic`` and ``preferred`` take a :class:`WorldState`.  ``helpful``
    turns on the preferred/regular alternation and needs ``preferred``.
    ``timeout`` is wall-clock seconds (``None`` disables); ``node_limit`` caps
    expansions.
    """
    strategy = strategy.lower()
    if strategy not in STRATEGIES:
        raise InvalidConfig(f"unknown strategy {strategy!r}")
    if strategy in ("gbfs", "astar") and heuristic is None:
        raise InvalidConfig(f"{strategy} needs a heuristic")
    if helpful and strategy not in ("gbfs", "astar"):
        raise InvalidConfig("helpful states need gbfs or astar")
    if helpful and preferred is None:
        raise InvalidConfig("helpful states need a preferred-state predicate")
    if dt <= 0:
        raise InvalidConfig("dt must be positive")

    sim = sim or Simulator(problem)
    stats = SearchStats()
    t0 = time.perf_counter()
    deadline = None if timeout is None else t0 + timeout
    max_ticks = int(math.floor(horizon / dt + 1e-9))
    depth_bound = max_ticks + len(problem.domain.actions)
    dyn = _dynamic_positions(problem)
    closed = set()
    expansions = [] if record_expansions else None
    counter = [0]

    root_state = sim.fire_events(problem.initial).next
    root = SearchNode(root_state)

    def evaluate(n):
        counter[0] += 1
        n.nid = counter[0]
        if heuristic is not None:
            n.h = heuristic(n.state)
        if helpful:
            n.preferred = bool(preferred(n.state))

    def key_of(n):
        if strategy == "astar":
            return (n.ticks * dt + n.h, n.h)
        return n.h

    evaluate(root)
    stats.nodes_generated = 1

    if strategy == "bfs":
        frontier = deque([root])
        pop = frontier.popleft

        def push(n):
            # zero-time action edges go in front: layers are clock ticks
            if n.incoming not in (None, "wait"):
                frontier.appendleft(n)
            else:
                frontier.append(n)
    elif strategy == "dfs":
        frontier = []
        pop = frontier.pop
        push = frontier.append
    else:
        frontier = DualOpenList(start_preferred=True)
        pop = frontier.pop

        def push(n):
            frontier.push(key_of(n), n, n.preferred)

    push(root)
    result_node = None
    while True:
        if deadline is not None and stats.nodes_expanded % 64 == 0 and time.perf_counter() > deadline:
            stats.timed_out = True
            break
        if node_limit is not None and stats.nodes_expanded >= node_limit:
            stats.timed_out = True
            break
        try:
            node = pop()
        except (IndexError, BothEmpty):
            break
        if duplicate_detection:
            k = _state_key(node.state.values, dyn)
            if k in closed:
                stats.duplicates += 1
                continue
            closed.add(k)
        if sim.goal(node.state):
            result_node = node
            break
        if strategy == "dfs" and node.depth >= depth_bound:
            continue
        stats.nodes_expanded += 1
        if expansions is not None:
            expansions.append((node.ticks, node.state.values))
        children = successors(node, sim, dt, stats, max_ticks)
        for c in children:
            evaluate(c)
            stats.nodes_generated += 1
            push(c)

    stats.wall_ms = (time.perf_counter() - t0) * 1000.0
    stats.solved = result_node is not None
    plan = _extract_plan(result_node, dt) if result_node is not None else None
    return SearchResult(plan, stats, expansions, result_node)
