"""Search guidance for the birds domain: score and proximity heuristics and the
preferred-state test used by helpful-states search.

Each factory takes a grounded problem and returns a pure function of a state;
fluent positions are resolved once up front.
"""

from __future__ import annotations

import math

from ..core import TOLERANCE
from ..sim import DEFAULT_HORIZON
from .domain import BirdsConfig


class BirdsView:
    """Fluent positions of a grounded birds problem."""

    def __init__(self, problem):
        layout = problem.domain.layout
        idx = layout.index
        const = problem.statics
        self.problem = problem
        objs = [o for o, t in problem.source[1].objects]
        types = dict(problem.source[1].objects)

        def pos(*key):
            return idx.get(key)

        def static(*key):
            return const.get(key)

        self.active = pos("active_bird")
        self.gravity = problem.initial["gravity",]
        self.pigs_killed = pos("pigs_killed")
        self.blocks_hit = pos("blocks_hit")
        self.tnt_detonated = pos("tnt_detonated")
        self.birds = []
        for o in objs:
            if types[o] != "bird":
                continue
            self.birds.append({
                "id": problem.initial["bird_id", o],
                "released": pos("bird_released", o),
                "x": pos("x_bird", o), "y": pos("y_bird", o),
                "vx": pos("vx_bird", o), "vy": pos("vy_bird", o),
                "r": problem.initial["r_bird", o],
            })
        self.pigs = []
        for o in objs:
            if types[o] == "pig":
                self.pigs.append((pos("pig_dead", o), problem.initial["x_pig", o],
                                  problem.initial["y_pig", o], problem.initial["r_pig", o]))
        self.tnts = []
        for o in objs:
            if types[o] == "block" and static("is_tnt", o):
                w = problem.initial["block_width", o]
                h = problem.initial["block_height", o]
                self.tnts.append((pos("tnt_exploded", o), pos("x_block", o), pos("y_block", o), max(w, h) / 2))

    def active_bird(self, v):
        a = v[self.active]
        for b in self.birds:
            if abs(b["id"] - a) <= 1e-9:
                return b
        return None

    @staticmethod
    def _flag(v, p):
        return False if p is None else v[p]


def score_heuristic(problem, config: BirdsConfig = BirdsConfig()):
    """Negated game-style score: lower is better."""
    view = BirdsView(problem)
    ip, ib, it = view.pigs_killed, view.blocks_hit, view.tnt_detonated
    cp, cb, ct = config.c_pig, config.c_block, config.c_tnt

    def h(s):
        v = s.values
        return -(cp * v[ip] + cb * v[ib] + ct * v[it])

    return h


def proximity_heuristic(problem, horizon=DEFAULT_HORIZON):
    """Estimated flight time of the active bird to the nearest live pig.

    Pre-launch states score ``horizon``; a bird moving away from every pig
    scores infinity.
    """
    view = BirdsView(problem)
    flag = BirdsView._flag
    pigs = view.pigs

    def h(s):
        v = s.values
        live = [(x, y) for dead, x, y, _ in pigs if not flag(v, dead)]
        if not live:
            return 0.0
        b = view.active_bird(v)
        if b is None:
            return math.inf
        if not flag(v, b["released"]):
            return float(horizon)
        bx, by, vx, vy = v[b["x"]], v[b["y"]], v[b["vx"]], v[b["vy"]]
        best = math.inf
        for px, py in live:
            dx, dy = px - bx, py - by
            dist = math.hypot(dx, dy)
            if dist == 0:
                return 0.0
            closing = (vx * dx + vy * dy) / dist
            if closing > 0:
                best = min(best, dist / closing)
        return best

    return h


def preferred_predicate(problem):
    """True before launch, or when the bird's exact ballistic arc passes within
    contact distance of a live pig or an unexploded TNT crate ahead of it."""
    view = BirdsView(problem)
    flag = BirdsView._flag
    g = view.gravity

    def pref(s):
        v = s.values
        b = view.active_bird(v)
        if b is None:
            return False
        if not flag(v, b["released"]):
            return True
        x0, y0, vx, vy = v[b["x"]], v[b["y"]], v[b["vx"]], v[b["vy"]]
        if vx <= TOLERANCE:  # not moving forward; also keeps 1/vx^2 finite
            return False
        targets = [(x, y, r) for dead, x, y, r in view.pigs if not flag(v, dead)]
        targets += [(v[ix], v[iy], r) for done, ix, iy, r in view.tnts if not flag(v, done)]
        rb = b["r"]
        for x, y, r in targets:
            if x < x0:
                continue
            u = x - x0
            fy = y0 + (vy / vx) * u - g * u * u / (2 * vx * vx)
            if abs(fy - y) <= r + rb:
                return True
        return False

    return pref
