import pytest

from birdplan.birds import Bird, Block, LevelDescription, Pig, Platform, translate_level
from birdplan.core import (
    And, BinOp, Compare, Const, DeltaT, Fluent, Happening, HybridDomain, Literal, NumericEffect,
    PlanningProblem, SetBool,
)

# Verbatim listings from the reference figures.
FIG_RELEASE = """ (:action release_bird
    :parameters (?b - bird)
    :precondition (and
        (= (active_bird) (bird_id ?b))
        (not (angle_adjusted))
        (not (bird_released ?b)) )
    :effect (and
        (assign (vy_bird ?b)
            (* (v_bird ?b) SIN(angle)))
        (assign (vx_bird ?b)
            (* (v_bird ?b) COS(angle)))
        (bird_released ?b) (angle_adjusted)) )
"""

FIG_FLYING = """ (:process flying
    :parameters (?b - bird)
    :precondition (and
        (bird_released ?b)
        (= (active_bird) (bird_id ?b))
        (> (y_bird ?b) 0) )
    :effect (and
        (decrease (vy_bird ?b)
            (* #t (gravity) ))
        (increase (y_bird ?b)
            (* #t (vy_bird ?b)))
        (increase (x_bird ?b)
            (* #t (vx_bird ?b)))) )
"""

FIG_GROUND = """ (:event collision_ground
  :parameters (?b - bird)
  :precondition (and
     (= (active_bird) (bird_id ?b))
     (<= (y_bird ?b) 0)  )
  :effect (and
     (assign (y_bird ?b) 1)
     (assign (vy_bird ?b)
     (* (* (vy_bird ?b) -1)(ground_damper)))
     (assign (bounce_count ?b)
     (+ (bounce_count ?b) 1))) )
 """

FIGURES = {"release_bird": FIG_RELEASE, "flying": FIG_FLYING, "collision_ground": FIG_GROUND}

FIG_HEADER = """(define (domain figures)
  (:requirements :typing :fluents :time :negative-preconditions)
  (:types bird)
  (:predicates (bird_released ?b - bird) (angle_adjusted))
  (:functions (active_bird) (angle) (gravity) (ground_damper)
    (bird_id ?b - bird) (v_bird ?b - bird) (x_bird ?b - bird) (y_bird ?b - bird)
    (vx_bird ?b - bird) (vy_bird ?b - bird) (bounce_count ?b - bird))
"""


def figure_domain(*bodies):
    return FIG_HEADER + "".join(bodies) + ")\n"


def open_level(px=15.0, py=0.5, **kw):
    """One bird, one exposed pig on the ground."""
    return LevelDescription(birds=[Bird(0)], pigs=[Pig(px, py)], name="open", **kw)


@pytest.fixture
def level22():
    lv = open_level()
    lv.blocks = [Block(16.5, 0.5, 0.5, 1.0, 1.0, supports=[])]
    return lv


@pytest.fixture
def occluded_level():
    """Pig behind a tall platform wall that stops every arc the baseline can fire."""
    return LevelDescription(birds=[Bird(0)], pigs=[Pig(15.0, 0.5)],
                            platforms=[Platform(13.5, 15.0, 1.0, 30.0)], name="occluded")


@pytest.fixture
def open_problem():
    return translate_level(open_level())


# -- a tiny hand-built hybrid domain ------------------------------------------

def chain_problem(n=3):
    """Actions a1..an must fire in order; goal is the last flag."""
    flags = [("done", f"s{i}") for i in range(n + 1)]
    actions = []
    for i in range(1, n + 1):
        actions.append(Happening("action", "step", (f"s{i}",),
                                 And((Literal("done", (f"s{i-1}",)), Literal("done", (f"s{i}",), False))),
                                 (SetBool("done", (f"s{i}",)),)))
    dom = HybridDomain(flags, [], actions=actions)
    init = dom.state({("done", "s0"): True})
    return PlanningProblem(dom, init, Literal("done", (f"s{n}",)), name="chain")


def ballistic_problem(x=0.0, y=0.1, vx=30.0, vy=20.0, g=9.8):
    """A point mass under gravity with a ground event and no actions."""
    F = Fluent
    fly = Happening("process", "fly", (), Compare(">", F("y"), Const(0.0)), (
        NumericEffect("decrease", F("vy"), BinOp("*", DeltaT(), F("g"))),
        NumericEffect("increase", F("y"), BinOp("*", DeltaT(), F("vy"))),
        NumericEffect("increase", F("x"), BinOp("*", DeltaT(), F("vx"))),
    ))
    dom = HybridDomain([], [("x",), ("y",), ("vx",), ("vy",), ("g",)], processes=[fly])
    init = dom.state({("x",): x, ("y",): y, ("vx",): vx, ("vy",): vy, ("g",): g})
    return PlanningProblem(dom, init, Compare("<", F("y"), Const(-1.0)), name="ballistic")
