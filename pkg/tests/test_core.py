import math
import struct

import pytest
from hypothesis import given, settings, strategies as st

from birdplan.core import (
    And, BinOp, Compare, Const, DeltaT, DivisionByZero, Fluent, Happening, HybridDomain, Literal,
    ModelError, NumericEffect, SetBool, UnknownFluent, apply_effects, compile_condition,
    compile_expr, eval_condition, eval_expr,
)

DOM = HybridDomain([("flag",)], [("x",), ("y",), ("gravity",), ("active_bird",), ("bird_id", "b0")])


def state(**vals):
    base = {("x",): 0.0, ("y",): 1.0, ("gravity",): 9.8, ("active_bird",): 0.0, ("bird_id", "b0"): 0.0}
    base.update({(k,): v for k, v in vals.items()})
    return DOM.state(base)


def bits(x):
    return struct.pack("<d", x)


def test_constant_leaf():
    assert eval_expr(Const(9.8), state()) == 9.8


def test_delta_t_times_gravity():
    e = BinOp("*", DeltaT(), Fluent("gravity"))
    assert eval_expr(e, state(), dt=0.05) == pytest.approx(0.49, abs=1e-15)


def test_division_by_zero():
    e = BinOp("/", Const(1.0), Fluent("x"))
    with pytest.raises(DivisionByZero):
        eval_expr(e, state(x=0.0))
    with pytest.raises(DivisionByZero):
        compile_expr(e, DOM.layout.index)(state(x=0.0).values)


def test_unknown_fluent():
    with pytest.raises(UnknownFluent):
        eval_expr(Fluent("nope"), state())


def test_simple_comparisons():
    assert eval_condition(Compare(">", Fluent("y"), Const(0.0)), state(y=1.0))
    eq = Compare("=", Fluent("active_bird"), Fluent("bird_id", ("b0",)))
    assert eval_condition(eq, state())


def test_tolerance_on_ground_contact():
    c = Compare("<=", Fluent("y"), Const(0.0))
    assert eval_condition(c, state(y=1e-12))
    assert not eval_condition(c, state(y=1e-6))


def test_literal_and_conjunction():
    s = state()
    assert eval_condition(Literal("flag", (), False), s)
    assert not eval_condition(And((Literal("flag"), Compare(">", Fluent("y"), Const(0.0)))), s)


def test_effects_are_simultaneous():
    s = state(x=1.0, y=2.0)
    out = apply_effects([NumericEffect("assign", Fluent("x"), Fluent("y")),
                         NumericEffect("assign", Fluent("y"), Fluent("x"))], s)
    assert (out.get("x"), out.get("y")) == (2.0, 1.0)


def test_double_write_rejected():
    with pytest.raises(ModelError):
        Happening("event", "e", (), And(()), (NumericEffect("assign", Fluent("x"), Const(1.0)),
                                              NumericEffect("increase", Fluent("x"), Const(1.0))))


def test_process_cannot_assign():
    with pytest.raises(ModelError):
        Happening("process", "p", (), And(()), (NumericEffect("assign", Fluent("x"), DeltaT()),))


def test_delta_t_outside_process_rejected():
    with pytest.raises(ModelError):
        Happening("event", "e", (), And(()), (NumericEffect("increase", Fluent("x"), DeltaT()),))


def test_incomplete_state_rejected():
    with pytest.raises(ModelError):
        DOM.state({("x",): 1.0})


def test_domain_rejects_undeclared_fluent():
    h = Happening("action", "a", (), And(()), (SetBool("ghost"),))
    with pytest.raises(UnknownFluent):
        HybridDomain([("flag",)], [], actions=[h])


finite = st.floats(-1e6, 1e6, allow_nan=False)
exprs = st.recursive(
    st.one_of(finite.map(Const), st.sampled_from([Fluent("x"), Fluent("y"), Fluent("gravity")])),
    lambda inner: st.builds(BinOp, st.sampled_from(["+", "-", "*"]), inner, inner),
    max_leaves=8,
)


@given(exprs, finite, finite)
def test_eval_is_pure_and_dt_free(e, x, y):
    s = state(x=x, y=y)
    a = eval_expr(e, s, dt=0.05)
    b = eval_expr(e, s, dt=0.01)
    c = eval_expr(e, s)
    if math.isnan(a):
        assert math.isnan(b) and math.isnan(c)
    else:
        assert bits(a) == bits(b) == bits(c)


@given(exprs, finite, finite)
def test_compiled_matches_interpreted(e, x, y):
    s = state(x=x, y=y)
    a = eval_expr(e, s)
    b = compile_expr(e, DOM.layout.index)(s.values)
    assert (math.isnan(a) and math.isnan(b)) or bits(a) == bits(b)


@given(finite, finite, st.sampled_from(["<", "<=", "=", ">=", ">"]))
def test_compiled_condition_matches_interpreted(x, y, op):
    s = state(x=x, y=y)
    c = Compare(op, Fluent("x"), Fluent("y"))
    assert compile_condition(c, DOM.layout.index)(s.values) == eval_condition(c, s)


@given(finite)
def test_assign_then_read_back(c):
    s = apply_effects([NumericEffect("assign", Fluent("x"), Const(c))], state())
    assert bits(s.get("x")) == bits(c)
