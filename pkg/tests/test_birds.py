import math
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from birdplan.bench import TEMPLATES, generate_level
from birdplan.birds import (
    Bird, Block, BirdsConfig, CoincidentCenters, DomainError, InvalidLevel, LevelDescription, Pig,
    Platform, ballistic_y, collide_bird_pig, cos_b, direct_shot_angles, dump_level, load_level,
    observe_level, preferred_predicate, proximity_heuristic, score_heuristic, sin_b, single_bird,
    translate_level,
)
from birdplan.sim import Simulator

from conftest import open_level

B = "b0"


def flying(problem, **vals):
    up = {("bird_released", B): True, ("angle_adjusted",): True}
    up.update({(k, B): v for k, v in vals.items()})
    return problem.initial.replace(up)


# -- translation ----------------------------------------------------------------

def test_single_bird_single_pig_counts():
    d = translate_level(open_level()).domain
    assert len(d.processes) == 3
    assert [a.ident for a in d.actions] == ["release_bird b0"]


def test_two_birds_two_releases_in_order():
    lv = LevelDescription(birds=[Bird(0), Bird(1)], pigs=[Pig(15.0, 0.5)])
    p = translate_level(lv)
    sim = Simulator(p)
    assert [a.ident for a in p.domain.actions] == ["release_bird b0", "release_bird b1"]
    s = sim.fire_events(p.initial).next
    assert [a.ident for a in sim.applicable_actions(s)] == ["release_bird b0"]
    s = s.replace({("active_bird",): 1.0})
    assert [a.ident for a in sim.applicable_actions(s)] == ["release_bird b1"]


def test_cyclic_supports_rejected():
    lv = LevelDescription(birds=[Bird(0)], pigs=[Pig(15.0, 0.5)], blocks=[
        Block(10, 1, 1, 1, 1, supports=["k1"]), Block(10, 2, 1, 1, 1, supports=["k0"])])
    with pytest.raises(InvalidLevel):
        lv.validate()
    with pytest.raises(InvalidLevel):
        translate_level(lv)


def test_bad_level_fields_rejected():
    with pytest.raises(InvalidLevel):
        LevelDescription(birds=[Bird(1)]).validate()
    with pytest.raises(InvalidLevel):
        LevelDescription(ground_damper=1.5).validate()
    with pytest.raises(InvalidLevel):
        LevelDescription(blocks=[Block(1, 1, 1, 1, 1, material="glass")]).validate()


@pytest.mark.parametrize("template", sorted(TEMPLATES))
def test_generated_levels_translate_completely(template):
    for seed in range(3):
        lv = generate_level(template, seed)
        p = translate_level(lv)  # complete-assignment check lives in the problem constructor
        assert len(p.initial.values) == len(p.domain.layout)
        assert load_level(dump_level(lv)) == lv


def test_observe_level_drops_dead_pigs_and_spent_birds():
    lv = LevelDescription(birds=[Bird(0), Bird(1)], pigs=[Pig(10, 0.5), Pig(20, 0.5)])
    p = translate_level(lv)
    s = p.initial.replace({("pig_dead", "p0"): True, ("bird_dead", "b0"): True, ("bird_released", "b0"): True})
    obs = observe_level(p, s, lv)
    assert [pg.x_pig for pg in obs.pigs] == [20]
    assert [b.bird_id for b in obs.birds] == [0]
    assert single_bird(lv).birds == [Bird(0)]


# -- collisions -------------------------------------------------------------------

def test_equal_mass_head_on():
    assert collide_bird_pig((10, 0), (0, 0), (0, 0), (1, 0), 1, 1) == (0.0, 0.0)


def test_grazing_hit_keeps_velocity():
    assert collide_bird_pig((0, 5), (0, 0), (0, 0), (1, 0), 1, 3) == (0.0, 5.0)


def test_heavier_pig_example():
    vx, vy = collide_bird_pig((8, -6), (0, 0), (0, 1), (0, 0), 1, 2)
    assert (vx, vy) == pytest.approx((8.0, 2.0), abs=1e-12)


def test_coincident_centres():
    with pytest.raises(CoincidentCenters):
        collide_bird_pig((1, 0), (0, 0), (2, 2), (2, 2), 1, 1)


v = st.floats(-30, 30)
pos = st.floats(-5, 5)
mass = st.floats(0.1, 10)


@given(v, v, v, v, pos, pos, mass, mass)
def test_normal_component_law(vbx, vby, vpx, vpy, dx, dy, mb, mp):
    n2 = dx * dx + dy * dy
    if n2 < 1e-3:
        return
    n = math.sqrt(n2)
    nx, ny = dx / n, dy / n
    out = collide_bird_pig((vbx, vby), (vpx, vpy), (dx, dy), (0, 0), mb, mp)
    ub, up = vbx * nx + vby * ny, vpx * nx + vpy * ny
    want = ((mb - mp) * ub + 2 * mp * up) / (mb + mp)
    scale = 1 + abs(ub) + abs(up)
    assert out[0] * nx + out[1] * ny == pytest.approx(want, abs=1e-9 * scale)
    assert out[0] * -ny + out[1] * nx == pytest.approx(vbx * -ny + vby * nx, abs=1e-9 * scale)
    # pig's post-collision normal speed from momentum; kinetic energy along the normal is conserved
    up2 = up + mb * (ub - want) / mp
    e0 = mb * ub ** 2 + mp * up ** 2
    assert mb * want ** 2 + mp * up2 ** 2 == pytest.approx(e0, rel=1e-9, abs=1e-9)


# -- trigonometry -----------------------------------------------------------------

def test_sine_exact_points():
    assert sin_b(math.pi / 2) == 1.0
    assert sin_b(0.0) == 0.0 and sin_b(math.pi) == 0.0
    assert sin_b(math.pi / 6) == pytest.approx(0.5, abs=1e-15)
    assert cos_b(0.0) == 1.0


def test_trig_domain():
    with pytest.raises(DomainError):
        sin_b(-0.5)
    with pytest.raises(DomainError):
        cos_b(2.0)


@given(st.floats(0, math.pi))
def test_sine_close_and_symmetric(x):
    assert abs(sin_b(x) - math.sin(x)) < 2e-3
    assert sin_b(x) == pytest.approx(sin_b(math.pi - x), abs=1e-12)


@given(st.floats(-math.pi / 2, math.pi / 2))
def test_cosine_close(x):
    assert abs(cos_b(x) - math.cos(x)) < 2e-3


# -- heuristics --------------------------------------------------------------------

def test_score_heuristic():
    p = translate_level(open_level())
    h = score_heuristic(p)
    assert h(p.initial) == 0
    assert h(p.initial.replace({("pigs_killed",): 1.0})) == -5000
    two = p.initial.replace({("pigs_killed",): 2.0})
    one = p.initial.replace({("pigs_killed",): 1.0})
    assert min([one, two], key=h) is two
    assert score_heuristic(p, BirdsConfig(c_pig=10))(one) == -10


def test_proximity_examples():
    p = translate_level(open_level(px=30.0, py=40.0))
    h = proximity_heuristic(p, horizon=10.0)
    assert h(p.initial) == 10.0
    assert h(flying(p, x_bird=0.0, y_bird=0.0, vx_bird=10.0, vy_bird=0.0)) == pytest.approx(25 / 3)
    q = translate_level(open_level(px=10.0, py=1.5))
    hq = proximity_heuristic(q)
    assert hq(flying(q, x_bird=0.0, y_bird=1.5, vx_bird=10.0, vy_bird=0.0)) == pytest.approx(1.0)
    assert hq(flying(q, x_bird=0.0, y_bird=1.5, vx_bird=-10.0, vy_bird=0.0)) == math.inf


def test_preferred_examples():
    p = translate_level(open_level(px=20.0, py=0.5))
    pref = preferred_predicate(p)
    assert pref(p.initial)
    # exact arc from (0, 1.5) through the pig centre
    lo, _ = direct_shot_angles((0, 1.5), (20.0, 0.5), 20.0, 9.8)
    s = flying(p, x_bird=0.0, y_bird=1.5, vx_bird=20 * math.cos(lo), vy_bird=20 * math.sin(lo))
    assert pref(s)
    assert not pref(flying(p, x_bird=0.0, y_bird=1.5, vx_bird=-5.0, vy_bird=3.0))
    assert not pref(flying(p, x_bird=25.0, y_bird=1.5, vx_bird=5.0, vy_bird=3.0))


@given(st.floats(0.1, 10), st.floats(0, 20), st.floats(0.2, 10), st.floats(-5, 15), st.floats(-15, 15))
@settings(max_examples=60, deadline=None)
def test_preferred_ignores_masses(k, x, y, vx, vy):
    lv = open_level(px=20.0, py=0.5)
    heavy = replace(lv, birds=[replace(lv.birds[0], m_bird=k)], pigs=[replace(lv.pigs[0], m_pig=k * 3)])
    a, b = translate_level(lv), translate_level(heavy)
    sa = flying(a, x_bird=x, y_bird=y, vx_bird=vx, vy_bird=vy)
    sb = flying(b, x_bird=x, y_bird=y, vx_bird=vx, vy_bird=vy)
    assert preferred_predicate(a)(sa) == preferred_predicate(b)(sb)


# -- direct shots ----------------------------------------------------------------------

def test_direct_shot_apex():
    lo, hi = direct_shot_angles((0, 0), (10, 0), 10, 10)
    assert lo == pytest.approx(math.pi / 4) and hi == pytest.approx(math.pi / 4)


def test_direct_shot_two_arcs():
    lo, hi = direct_shot_angles((0, 0), (5, 0), 10, 10)
    assert lo == pytest.approx(math.radians(15), abs=1e-4)
    assert hi == pytest.approx(math.radians(75), abs=1e-4)
    for th in (lo, hi):
        vx, vy = 10 * math.cos(th), 10 * math.sin(th)
        assert ballistic_y(0, 0, vx, vy, 10, 5) == pytest.approx(0, abs=1e-9)


def test_direct_shot_out_of_range():
    assert direct_shot_angles((0, 0), (1000, 0), 10, 10) is None


# -- events ----------------------------------------------------------------------------

def test_third_bounce_expires_bird():
    lv = LevelDescription(birds=[Bird(0), Bird(1)], pigs=[Pig(30.0, 0.5)])
    p = translate_level(lv)
    out = Simulator(p).fire_events(flying(p, x_bird=5.0, y_bird=-0.1, vx_bird=3.0, vy_bird=-2.0, bounce_count=2.0))
    assert out.fired[:2] == ("collision_ground b0", "bird_expire b0")
    assert out.next.get("bird_dead", B) and out.next.get("active_bird") == 1.0


def test_platform_stops_bird():
    lv = LevelDescription(birds=[Bird(0)], pigs=[Pig(30.0, 0.5)], platforms=[Platform(10.0, 3.0, 2.0, 2.0)])
    p = translate_level(lv)
    s = flying(p, x_bird=10.0, y_bird=3.0, vx_bird=12.0, vy_bird=1.0)
    n = Simulator(p).fire_events(s).next
    assert (n.get("vx_bird", B), n.get("vy_bird", B)) == (0.0, 0.0)
    assert n.get("bird_dead", B) and n.get("active_bird") == 1.0
    assert not n.get("pig_dead", "p0")
    untouched = [k for k in p.domain.layout.keys if k[-1] != B and k != ("active_bird",)]
    assert all(n[k] == s[k] for k in untouched)


def test_collapse_crushes_supported_pig():
    lv = LevelDescription(birds=[Bird(0)], pigs=[Pig(10.0, 2.5)], blocks=[
        Block(10.0, 1.0, 0.5, 2.0, 1.0, material="ice", life=1, stability=1, supports=["p0"])])
    p = translate_level(lv)
    out = Simulator(p).fire_events(flying(p, x_bird=10.0, y_bird=1.0, vx_bird=15.0, vy_bird=0.0))
    assert "bird_block_break b0 k0" in out.fired and "pig_crushed k0 p0" in out.fired
    assert out.next.get("pigs_killed") == 1.0
