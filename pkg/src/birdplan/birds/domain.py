"""The Angry-Birds PDDL+ domain and the level -> problem translation."""

from __future__ import annotations

import functools
from dataclasses import dataclass, fields, replace

from ..pddl import ProblemAST, ground, parse_domain, print_domain, print_problem
from ..core import Compare, Const, Fluent
from .level import BIRD_TYPES, Bird, Block, LevelDescription, Pig, Platform


@dataclass(frozen=True)
class BirdsConfig:
    angle_rate: float = 0.3          # rad/s swept by increase_angle
    max_angle: float = 1.55          # rad
    pass_factor: float = 0.6         # speed kept after breaking through a block
    tnt_radius_factor: float = 2.0   # blast radius = factor * max(crate dims)
    stability_factor: float = 1.0    # scales every block's stability
    max_flight_time: float = 8.0     # s, then the bird expires
    c_pig: float = 5000.0
    c_block: float = 500.0
    c_tnt: float = 1000.0

    def with_overrides(self, overrides: dict) -> "BirdsConfig":
        known = {f.name: f.type for f in fields(self)}
        use = {k: float(v) for k, v in overrides.items() if k in known}
        return replace(self, **use)


def _overlap(b, x, y, w, h):
    return f"""
        (<= (- (x_bird {b}) (r_bird {b})) (+ {x} (/ {w} 2)))
        (>= (+ (x_bird {b}) (r_bird {b})) (- {x} (/ {w} 2)))
        (<= (- (y_bird {b}) (r_bird {b})) (+ {y} (/ {h} 2)))
        (>= (+ (y_bird {b}) (r_bird {b})) (- {y} (/ {h} 2)))"""


def _dot(b, x, y):
    return f"(+ (* (vx_bird {b}) (- (x_bird {b}) {x})) (* (vy_bird {b}) (- (y_bird {b}) {y})))"


def _dist2(ax, ay, bx, by):
    return f"(+ (* (- {ax} {bx}) (- {ax} {bx})) (* (- {ay} {by}) (- {ay} {by})))"


def _rebound(b, x, y, m):
    """Effects of an elastic hit on a resting body of mass ``m`` centred at (x, y)."""
    coef = f"(* (/ (* 2 {m}) (+ (m_bird {b}) {m})) (/ {_dot(b, x, y)} {_dist2(f'(x_bird {b})', f'(y_bird {b})', x, y)}))"
    return f"""
        (assign (vx_bird {b}) (- (vx_bird {b}) (* {coef} (- (x_bird {b}) {x}))))
        (assign (vy_bird {b}) (- (vy_bird {b}) (* {coef} (- (y_bird {b}) {y}))))"""


_MOMENTUM2 = "(* (* (m_bird ?b) (m_bird ?b)) (+ (* (vx_bird ?b) (vx_bird ?b)) (* (vy_bird ?b) (vy_bird ?b))))"
_ACTIVE = "(= (active_bird) (bird_id ?b))"
_BLOCK = ("(x_block ?k)", "(y_block ?k)", "(block_width ?k)", "(block_height ?k)")
_PLATFORM = ("(x_platform ?l)", "(y_platform ?l)", "(platform_width ?l)", "(platform_height ?l)")


def domain_source() -> str:
    """Domain text with trigonometry still written as SIN(x)/COS(x) calls."""
    return f"""; Angry Birds as a PDDL+ domain: one action, three processes, collision events.
(define (domain angry_birds)
  (:requirements :typing :fluents :time :negative-preconditions)
  (:types bird pig block platform)
  (:predicates
    (bird_released ?b - bird) (bird_dead ?b - bird) (angle_adjusted)
    (pig_dead ?p - pig)
    (block_removed ?k - block) (block_moved ?k - block) (is_tnt ?k - block)
    (tnt_exploded ?k - block)
    (supports_block ?s - block ?k - block) (supports_pig ?s - block ?p - pig))
  (:functions
    (x_bird ?b - bird) (y_bird ?b - bird) (v_bird ?b - bird) (vx_bird ?b - bird)
    (vy_bird ?b - bird) (m_bird ?b - bird) (r_bird ?b - bird) (bird_id ?b - bird)
    (bird_type ?b - bird) (bounce_count ?b - bird) (flight_time ?b - bird)
    (x_pig ?p - pig) (y_pig ?p - pig) (r_pig ?p - pig) (m_pig ?p - pig)
    (x_block ?k - block) (y_block ?k - block) (block_width ?k - block)
    (block_height ?k - block) (block_mass ?k - block) (block_life ?k - block)
    (block_stability ?k - block) (tnt_radius ?k - block)
    (x_platform ?l - platform) (y_platform ?l - platform)
    (platform_width ?l - platform) (platform_height ?l - platform)
    (active_bird) (angle) (angle_rate) (max_angle) (gravity) (ground_damper)
    (slingshot_x) (slingshot_y) (pass_factor) (max_flight_time)
    (pigs_killed) (blocks_hit) (tnt_detonated))

  (:action release_bird
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

  (:process increase_angle
    :parameters ()
    :precondition (and (not (angle_adjusted)) (< (angle) (max_angle)))
    :effect (increase (angle) (* #t (angle_rate))))

  (:process flying
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

  (:process flight_clock
    :parameters (?b - bird)
    :precondition (and (bird_released ?b) {_ACTIVE})
    :effect (increase (flight_time ?b) (* #t 1)))

  (:event load_bird
    :parameters (?b - bird)
    :precondition (and {_ACTIVE} (not (bird_released ?b)) (angle_adjusted))
    :effect (and (not (angle_adjusted)) (assign (angle) 0)
                 (assign (x_bird ?b) (slingshot_x)) (assign (y_bird ?b) (slingshot_y))))

  (:event collision_ground
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

  (:event bird_expire
    :parameters (?b - bird)
    :precondition (and {_ACTIVE} (bird_released ?b) (>= (bounce_count ?b) 3))
    :effect (and (bird_dead ?b) (increase (active_bird) 1)))

  (:event bird_timeout
    :parameters (?b - bird)
    :precondition (and {_ACTIVE} (bird_released ?b) (>= (flight_time ?b) (max_flight_time)))
    :effect (and (bird_dead ?b) (increase (active_bird) 1)))

  (:event collision_platform
    :parameters (?b - bird ?l - platform)
    :precondition (and {_ACTIVE} (bird_released ?b) {_overlap("?b", *_PLATFORM)})
    :effect (and (assign (vx_bird ?b) 0) (assign (vy_bird ?b) 0)
                 (bird_dead ?b) (increase (active_bird) 1)))

  (:event collision_pig
    :parameters (?b - bird ?p - pig)
    :precondition (and {_ACTIVE} (bird_released ?b) (not (pig_dead ?p))
        (<= {_dist2("(x_bird ?b)", "(y_bird ?b)", "(x_pig ?p)", "(y_pig ?p)")}
            (* (+ (r_bird ?b) (r_pig ?p)) (+ (r_bird ?b) (r_pig ?p)))))
    :effect (and {_rebound("?b", "(x_pig ?p)", "(y_pig ?p)", "(m_pig ?p)")}
        (pig_dead ?p) (increase (pigs_killed) 1)))

  (:event tnt_hit
    :parameters (?b - bird ?k - block)
    :precondition (and {_ACTIVE} (bird_released ?b) (is_tnt ?k) (not (tnt_exploded ?k)) {_overlap("?b", *_BLOCK)})
    :effect (and (tnt_exploded ?k) (block_removed ?k) (block_moved ?k) (increase (tnt_detonated) 1)))

  (:event tnt_chain
    :parameters (?t - block ?k - block)
    :precondition (and (is_tnt ?t) (is_tnt ?k) (tnt_exploded ?t) (not (tnt_exploded ?k))
        (<= {_dist2("(x_block ?t)", "(y_block ?t)", "(x_block ?k)", "(y_block ?k)")}
            (* (tnt_radius ?t) (tnt_radius ?t))))
    :effect (and (tnt_exploded ?k) (block_removed ?k) (block_moved ?k) (increase (tnt_detonated) 1)))

  (:event tnt_kill_pig
    :parameters (?t - block ?p - pig)
    :precondition (and (is_tnt ?t) (tnt_exploded ?t) (not (pig_dead ?p))
        (<= {_dist2("(x_block ?t)", "(y_block ?t)", "(x_pig ?p)", "(y_pig ?p)")}
            (* (tnt_radius ?t) (tnt_radius ?t))))
    :effect (and (pig_dead ?p) (increase (pigs_killed) 1)))

  (:event tnt_destroy_block
    :parameters (?t - block ?k - block)
    :precondition (and (is_tnt ?t) (not (is_tnt ?k)) (tnt_exploded ?t) (not (block_removed ?k))
        (<= {_dist2("(x_block ?t)", "(y_block ?t)", "(x_block ?k)", "(y_block ?k)")}
            (* (tnt_radius ?t) (tnt_radius ?t))))
    :effect (and (block_removed ?k) (block_moved ?k) (increase (blocks_hit) 1)))

  (:event bird_block_bounce
    :parameters (?b - bird ?k - block)
    :precondition (and {_ACTIVE} (bird_released ?b) (not (is_tnt ?k)) (not (block_removed ?k))
        {_overlap("?b", *_BLOCK)}
        (< {_dot("?b", "(x_block ?k)", "(y_block ?k)")} 0)
        (< {_MOMENTUM2} (* (block_stability ?k) (block_stability ?k))))
    :effect (and {_rebound("?b", "(x_block ?k)", "(y_block ?k)", "(block_mass ?k)")}
        (increase (bounce_count ?b) 1)))

  (:event bird_block_break
    :parameters (?b - bird ?k - block)
    :precondition (and {_ACTIVE} (bird_released ?b) (not (is_tnt ?k)) (not (block_removed ?k))
        {_overlap("?b", *_BLOCK)}
        (>= {_MOMENTUM2} (* (block_stability ?k) (block_stability ?k))))
    :effect (and
        (assign (vx_bird ?b) (* (vx_bird ?b) (pass_factor)))
        (assign (vy_bird ?b) (* (vy_bird ?b) (pass_factor)))
        (block_removed ?k) (block_moved ?k) (increase (blocks_hit) 1)))

  (:event block_collapse
    :parameters (?s - block ?k - block)
    :precondition (and (supports_block ?s ?k) (block_moved ?s) (not (block_moved ?k)))
    :effect (and
        (assign (y_block ?k) (/ (block_height ?k) 2))
        (assign (block_stability ?k) 0)
        (decrease (block_life ?k)
            (* (* (block_mass ?k) (gravity)) (- (y_block ?k) (/ (block_height ?k) 2))))
        (block_moved ?k)))

  (:event block_crushed
    :parameters (?k - block)
    :precondition (and (block_moved ?k) (not (block_removed ?k)) (<= (block_life ?k) 0))
    :effect (and (block_removed ?k) (increase (blocks_hit) 1)))

  (:event pig_crushed
    :parameters (?s - block ?p - pig)
    :precondition (and (supports_pig ?s ?p) (block_moved ?s) (not (pig_dead ?p)))
    :effect (and (pig_dead ?p) (increase (pigs_killed) 1)))
)
"""


@functools.lru_cache(maxsize=1)
def birds_template():
    return parse_domain(domain_source(), "angry_birds.pddl")


def birds_domain_text() -> str:
    """Printed domain with trigonometry expanded."""
    return print_domain(birds_template())


def _f(x):
    return float(x)


def level_problem_ast(lv: LevelDescription, config: BirdsConfig = BirdsConfig()) -> ProblemAST:
    lv.validate()
    objects = ([(f"b{i}", "bird") for i in range(len(lv.birds))]
               + [(f"p{i}", "pig") for i in range(len(lv.pigs))]
               + [(f"k{i}", "block") for i in range(len(lv.blocks))]
               + [(f"l{i}", "platform") for i in range(len(lv.platforms))])
    init = []

    def num(name, *args, value):
        init.append(("num", (name, *args), _f(value)))

    sx, sy = lv.slingshot
    num("active_bird", value=0)
    num("angle", value=0)
    num("angle_rate", value=config.angle_rate)
    num("max_angle", value=config.max_angle)
    num("gravity", value=lv.gravity)
    num("ground_damper", value=lv.ground_damper)
    num("slingshot_x", value=sx)
    num("slingshot_y", value=sy)
    num("pass_factor", value=config.pass_factor)
    num("max_flight_time", value=config.max_flight_time)
    num("pigs_killed", value=0)
    num("blocks_hit", value=0)
    num("tnt_detonated", value=0)
    for i, b in enumerate(lv.birds):
        o = f"b{i}"
        for name, value in (("x_bird", sx), ("y_bird", sy), ("v_bird", b.v_max), ("vx_bird", 0),
                            ("vy_bird", 0), ("m_bird", b.m_bird), ("r_bird", b.radius),
                            ("bird_id", b.bird_id), ("bird_type", BIRD_TYPES[b.bird_type]),
                            ("bounce_count", 0), ("flight_time", 0)):
            num(name, o, value=value)
    for i, p in enumerate(lv.pigs):
        for name in ("x_pig", "y_pig", "r_pig", "m_pig"):
            num(name, f"p{i}", value=getattr(p, name))
    for i, k in enumerate(lv.blocks):
        o = f"k{i}"
        radius = config.tnt_radius_factor * max(k.block_width, k.block_height) if k.material == "tnt" else 0.0
        for name, value in (("x_block", k.x_block), ("y_block", k.y_block),
                            ("block_width", k.block_width), ("block_height", k.block_height),
                            ("block_mass", k.block_mass), ("block_life", k.life),
                            ("block_stability", k.stability * config.stability_factor),
                            ("tnt_radius", radius)):
            num(name, o, value=value)
        if k.material == "tnt":
            init.append(("bool", ("is_tnt", o)))
        for s in k.supports:
            init.append(("bool", ("supports_pig" if s.startswith("p") else "supports_block", o, s)))
    for i, l in enumerate(lv.platforms):
        for name in ("x_platform", "y_platform", "platform_width", "platform_height"):
            num(name, f"l{i}", value=getattr(l, name))
    goal = Compare(">=", Fluent("pigs_killed"), Const(1.0))
    return ProblemAST(lv.name, "angry_birds", tuple(objects), tuple(init), goal)


def translate_level(lv: LevelDescription, config: BirdsConfig = BirdsConfig()):
    """Grounded planning problem for ``lv``: kill at least one pig."""
    return ground(birds_template(), level_problem_ast(lv, config))


def problem_text(lv: LevelDescription, config: BirdsConfig = BirdsConfig()) -> str:
    return print_problem(level_problem_ast(lv, config))


def observe_level(problem, state, level: LevelDescription) -> LevelDescription:
    """The level as it stands in ``state``: live pigs, standing blocks, and the
    birds not yet launched (renumbered from 0).

    ``problem`` must come from ``translate_level(level)``.
    """
    get = state.get
    birds = []
    for i, b in enumerate(level.birds):
        if not get("bird_released", f"b{i}") and not get("bird_dead", f"b{i}"):
            birds.append(replace(b, bird_id=len(birds)))
    pig_map, pigs = {}, []
    for i, p in enumerate(level.pigs):
        if not get("pig_dead", f"p{i}"):
            pig_map[f"p{i}"] = f"p{len(pigs)}"
            pigs.append(replace(p))
    block_map, kept = {}, []
    for i, k in enumerate(level.blocks):
        o = f"k{i}"
        if get("block_removed", o):
            continue
        block_map[o] = f"k{len(kept)}"
        kept.append((o, k))
    blocks = []
    for o, k in kept:
        moved = get("block_moved", o)
        supports = [] if moved else [block_map.get(s) or pig_map.get(s) for s in k.supports]
        blocks.append(Block(
            x_block=get("x_block", o), y_block=get("y_block", o),
            block_width=k.block_width, block_height=k.block_height, block_mass=k.block_mass,
            material=k.material, life=get("block_life", o), stability=get("block_stability", o),
            supports=[s for s in supports if s is not None]))
    return LevelDescription(
        slingshot=level.slingshot, gravity=level.gravity, ground_damper=level.ground_damper,
        birds=birds, pigs=pigs, blocks=blocks, platforms=[replace(l) for l in level.platforms],
        name=level.name, template=level.template, seed=level.seed)


def single_bird(level: LevelDescription) -> LevelDescription:
    """The first bird only: the planning problem for one shot."""
    return replace(level, birds=[replace(level.birds[0], bird_id=0)] if level.birds else [])
