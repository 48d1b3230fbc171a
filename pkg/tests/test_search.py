import pytest
from hypothesis import given, settings, strategies as st

from birdplan.bench import generate_level
from birdplan.birds import preferred_predicate, proximity_heuristic, single_bird, translate_level
from birdplan.search import (
    BothEmpty, DualOpenList, InvalidConfig, Plan, PlanStep, SearchNode, search, successors,
)
from birdplan.sim import Simulator, validate_plan

from conftest import chain_problem, open_level


def node(nid):
    n = SearchNode(None)
    n.nid = nid
    return n


def test_prelaunch_has_release_and_wait(open_problem):
    sim = Simulator(open_problem)
    root = SearchNode(sim.fire_events(open_problem.initial).next)
    kids = successors(root, sim, 0.05)
    assert [k.incoming if k.incoming == "wait" else k.incoming.name for k in kids] == ["release_bird", "wait"]


def test_midflight_only_waits(open_problem):
    sim = Simulator(open_problem)
    s = sim.apply_action(open_problem.initial, sim.action("release_bird", "b0")).next
    kids = successors(SearchNode(sim.step(s, 0.05).next), sim, 0.05)
    assert [k.incoming for k in kids] == ["wait"]


def test_successors_do_not_prune_hopeless_states(open_problem):
    sim = Simulator(open_problem)
    s = open_problem.initial.replace({("bird_dead", "b0"): True, ("active_bird",): 1.0,
                                      ("angle_adjusted",): True, ("bird_released", "b0"): True})
    assert len(successors(SearchNode(s), sim, 0.05)) == 1


def test_chain_bfs():
    res = search(chain_problem(3), "bfs", timeout=None)
    assert [s.args for s in res.plan.steps] == [("s1",), ("s2",), ("s3",)]
    assert res.stats.nodes_expanded >= 3


def test_goal_at_root():
    for strategy in ("bfs", "dfs"):
        res = search(chain_problem(0), strategy, timeout=None)
        assert res.plan.steps == [] and res.stats.nodes_expanded == 0


def test_config_guards(open_problem):
    with pytest.raises(InvalidConfig):
        search(open_problem, "gbfs")
    with pytest.raises(InvalidConfig):
        search(open_problem, "bfs", helpful=True, preferred=lambda s: True)
    with pytest.raises(InvalidConfig):
        search(open_problem, "gbfs", heuristic=lambda s: 0, helpful=True)
    with pytest.raises(InvalidConfig):
        search(open_problem, "beam")


def test_gbfs_beats_bfs_on_a_level45_instance():
    p = translate_level(single_bird(generate_level(45, 0)))
    g = search(p, "gbfs", heuristic=proximity_heuristic(p), timeout=None)
    b = search(p, "bfs", timeout=None)
    assert g.plan is not None and b.plan is not None
    assert g.stats.nodes_expanded < b.stats.nodes_expanded


def test_dual_list_alternates():
    q = DualOpenList()
    p1, o1, o2 = node(1), node(2), node(3)
    q.push(0, o1)
    q.push(0, o2)
    q.push(5, p1, preferred=True)
    assert [q.pop().nid for _ in range(3)] == [1, 2, 3]
    with pytest.raises(BothEmpty):
        q.pop()


@given(st.lists(st.integers(0, 5), min_size=1, max_size=40))
def test_empty_preferred_list_is_plain_priority_queue(keys):
    q = DualOpenList()
    for i, k in enumerate(keys):
        q.push(k, node(i))
    popped = [q.pop().nid for _ in keys]
    assert popped == [i for _, i in sorted((k, i) for i, k in enumerate(keys))]


@given(st.lists(st.tuples(st.integers(0, 5), st.booleans()), min_size=1, max_size=40))
def test_dual_list_returns_each_node_once(items):
    q = DualOpenList()
    for i, (k, pref) in enumerate(items):
        q.push(k, node(i), preferred=pref)
    out = []
    while len(q):
        out.append(q.pop().nid)
    assert sorted(out) == list(range(len(items)))


def test_prelaunch_states_sweep_first(open_problem):
    pref = preferred_predicate(open_problem)
    res = search(open_problem, "gbfs", heuristic=proximity_heuristic(open_problem), helpful=True,
                 preferred=pref, timeout=None, record_expansions=True)
    idx = open_problem.domain.layout.index[("bird_released", "b0")]
    first = res.expansions[:6:2]  # the preferred turns
    assert all(not values[idx] for _, values in first)
    assert [t for t, _ in first] == [0, 1, 2]


def test_always_false_preference_changes_nothing(open_problem):
    h = proximity_heuristic(open_problem)
    a = search(open_problem, "gbfs", heuristic=h, timeout=None, record_expansions=True)
    b = search(open_problem, "gbfs", heuristic=h, helpful=True, preferred=lambda s: False,
               timeout=None, record_expansions=True)
    assert a.expansions == b.expansions and a.plan == b.plan


def test_duplicates_are_not_reexpanded():
    # pig out of reach: the whole tick-bounded graph is exhausted
    p = translate_level(open_level(px=200.0))
    res = search(p, "bfs", timeout=None, horizon=1.0, record_expansions=True)
    assert res.plan is None
    assert len({(t, v) for t, v in res.expansions}) == len(res.expansions)


def test_node_limit_marks_timeout(open_problem):
    res = search(open_problem, "bfs", timeout=None, node_limit=5)
    assert res.plan is None and res.stats.timed_out and res.stats.nodes_expanded == 5


@pytest.mark.parametrize("px", [9.0, 14.0, 21.0])
def test_bfs_is_tick_optimal(px):
    p = translate_level(open_level(px=px))
    res = search(p, "bfs", timeout=None)
    best = None
    for k in range(0, 100):
        r = validate_plan(p, Plan([PlanStep(round(k * 0.05, 9), "release_bird", ("b0",))]), horizon=8.0)
        if r.passes:
            best = r.goal_time if best is None else min(best, r.goal_time)
    assert res.plan is not None
    assert res.plan.makespan == pytest.approx(best)


def test_plan_text_roundtrip():
    plan = Plan([PlanStep(0.3, "release_bird", ("b0",))], 0.3)
    assert Plan.from_text("; comment\n" + plan.to_text()) == plan
