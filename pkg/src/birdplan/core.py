"""Grounded PDDL+ data model: expressions, conditions, effects, happenings,
states and problems, plus an interpreter and a compiler for expressions.

States store every fluent in one flat tuple.  Boolean fluents hold ``bool``
values and numeric fluents hold ``float`` values; a shared :class:`FluentLayout`
maps fluent keys such as ``("x_bird", "b0")`` to tuple positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Union

TOLERANCE = 1e-9

ARITH_OPS = ("+", "-", "*", "/")
COMPARE_OPS = ("<", "<=", "=", ">=", ">")


class PlanningError(Exception):
    """Base class for every error raised by the package."""


class UnknownFluent(PlanningError, KeyError):
    def __str__(self):
        return f"unknown fluent {self.args[0]!r}"


class DivisionByZero(PlanningError, ZeroDivisionError):
    pass


class ModelError(PlanningError, ValueError):
    """A domain, state or problem violates a structural invariant."""


# --------------------------------------------------------------------------
# expressions

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Fluent:
    name: str
    args: tuple = ()

    @property
    def key(self):
        return (self.name, *self.args)


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"

    def __post_init__(self):
        if self.op not in ARITH_OPS:
            raise ModelError(f"unsupported arithmetic operator {self.op!r}")


@dataclass(frozen=True)
class DeltaT:
    """The ``#t`` marker: the length of the current integration step."""


Expr = Union[Const, Fluent, Neg, BinOp, DeltaT]


def walk_expr(expr) -> Iterator:
    yield expr
    if isinstance(expr, Neg):
        yield from walk_expr(expr.arg)
    elif isinstance(expr, BinOp):
        yield from walk_expr(expr.left)
        yield from walk_expr(expr.right)


def has_delta_t(expr) -> bool:
    return any(isinstance(e, DeltaT) for e in walk_expr(expr))


# --------------------------------------------------------------------------
# conditions

@dataclass(frozen=True)
class Compare:
    op: str
    left: Expr
    right: Expr

    def __post_init__(self):
        if self.op not in COMPARE_OPS:
            raise ModelError(f"unsupported comparison {self.op!r}")


@dataclass(frozen=True)
class Literal:
    name: str
    args: tuple = ()
    positive: bool = True

    @property
    def key(self):
        return (self.name, *self.args)


@dataclass(frozen=True)
class And:
    parts: tuple = ()


Condition = Union[Compare, Literal, And]


def conjuncts(cond) -> Iterator:
    """Flatten nested conjunctions."""
    if isinstance(cond, And):
        for part in cond.parts:
            yield from conjuncts(part)
    else:
        yield cond


def condition_exprs(cond) -> Iterator:
    for c in conjuncts(cond):
        if isinstance(c, Compare):
            yield c.left
            yield c.right


# --------------------------------------------------------------------------
# effects and happenings

@dataclass(frozen=True)
class SetBool:
    name: str
    args: tuple = ()
    value: bool = True

    @property
    def key(self):
        return (self.name, *self.args)


@dataclass(frozen=True)
class NumericEffect:
    kind: str  # assign | increase | decrease
    target: Fluent
    expr: Expr

    def __post_init__(self):
        if self.kind not in ("assign", "increase", "decrease"):
            raise ModelError(f"unsupported effect {self.kind!r}")

    @property
    def key(self):
        return self.target.key


EffectItem = Union[SetBool, NumericEffect]

KINDS = ("action", "event", "process")


def effect_keys(effects) -> list:
    return [e.key for e in effects]


def check_effects(effects, kind, where=""):
    seen = set()
    for e in effects:
        if e.key in seen:
            raise ModelError(f"{where}: fluent {e.key} is changed twice in one effect")
        seen.add(e.key)
        if isinstance(e, NumericEffect):
            if kind == "process":
                if e.kind == "assign":
                    raise ModelError(f"{where}: processes may only increase or decrease")
            elif has_delta_t(e.expr):
                raise ModelError(f"{where}: #t outside a process effect")


@dataclass(frozen=True)
class Happening:
    kind: str
    name: str
    args: tuple
    precondition: Condition
    effects: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ModelError(f"unknown happening kind {self.kind!r}")
        check_effects(self.effects, self.kind, self.ident)
        for e in condition_exprs(self.precondition):
            if has_delta_t(e):
                raise ModelError(f"{self.ident}: #t inside a precondition")

    @property
    def ident(self):
        return " ".join((self.name, *self.args))

    def fluent_keys(self) -> set:
        keys = set()
        for c in conjuncts(self.precondition):
            if isinstance(c, Literal):
                keys.add(c.key)
        for ex in condition_exprs(self.precondition):
            keys.update(f.key for f in walk_expr(ex) if isinstance(f, Fluent))
        for e in self.effects:
            keys.add(e.key)
            if isinstance(e, NumericEffect):
                keys.update(f.key for f in walk_expr(e.expr) if isinstance(f, Fluent))
        return keys


# --------------------------------------------------------------------------
# layout, domain, state, problem

class FluentLayout:
    """Positions of boolean and numeric fluents inside a state vector."""

    def __init__(self, boolean, numeric):
        self.keys = tuple(boolean) + tuple(numeric)
        self.n_bool = len(boolean)
        self.index = {k: i for i, k in enumerate(self.keys)}
        if len(self.index) != len(self.keys):
            raise ModelError("fluent ids must be unique across boolean and numeric fluents")

    def __len__(self):
        return len(self.keys)

    def __eq__(self, other):
        return isinstance(other, FluentLayout) and self.keys == other.keys and self.n_bool == other.n_bool

    def __hash__(self):
        return hash((self.keys, self.n_bool))

    def is_bool(self, key) -> bool:
        return self.index[key] < self.n_bool

    def position(self, key) -> int:
        try:
            return self.index[key]
        except KeyError:
            raise UnknownFluent(key) from None


@dataclass(frozen=True)
class WorldState:
    values: tuple
    time: float = 0.0
    layout: Optional[FluentLayout] = field(default=None, compare=False, repr=False)

    def __getitem__(self, key):
        return self.values[self.layout.position(key)]

    def get(self, name, *args):
        return self[(name, *args)]

    def replace(self, updates: dict, time=None) -> "WorldState":
        vals = list(self.values)
        for k, v in updates.items():
            pos = self.layout.position(k)
            vals[pos] = bool(v) if pos < self.layout.n_bool else float(v)
        return WorldState(tuple(vals), self.time if time is None else time, self.layout)

    def as_dict(self) -> dict:
        return dict(zip(self.layout.keys, self.values))


@dataclass
class HybridDomain:
    boolean_fluents: list
    numeric_fluents: list
    actions: list = field(default_factory=list)
    events: list = field(default_factory=list)
    processes: list = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        self.layout = FluentLayout(self.boolean_fluents, self.numeric_fluents)
        for group, kind in ((self.actions, "action"), (self.events, "event"), (self.processes, "process")):
            for h in group:
                if h.kind != kind:
                    raise ModelError(f"{h.ident} is a {h.kind}, listed as {kind}")
                for k in h.fluent_keys():
                    if k not in self.layout.index:
                        raise UnknownFluent(k)

    @property
    def happenings(self):
        return [*self.actions, *self.events, *self.processes]

    def state(self, assignment: dict, time=0.0) -> WorldState:
        """Build a complete state; boolean fluents default to false."""
        vals = []
        missing = []
        for i, k in enumerate(self.layout.keys):
            if i < self.layout.n_bool:
                vals.append(bool(assignment.get(k, False)))
            elif k in assignment:
                vals.append(float(assignment[k]))
            else:
                missing.append(k)
        if missing:
            raise ModelError(f"incomplete assignment, missing {missing[:5]}")
        return WorldState(tuple(vals), float(time), self.layout)


@dataclass
class PlanningProblem:
    domain: HybridDomain
    initial: WorldState
    goal: Condition
    name: str = ""
    source: object = field(default=None, compare=False, repr=False)
    statics: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.initial.layout != self.domain.layout or len(self.initial.values) != len(self.domain.layout):
            raise ModelError("initial state does not match the domain layout")
        if self.initial.time < 0:
            raise ModelError("state time must be non-negative")
        for c in conjuncts(self.goal):
            if isinstance(c, Literal):
                self.domain.layout.position(c.key)
        for ex in condition_exprs(self.goal):
            for f in walk_expr(ex):
                if isinstance(f, Fluent):
                    self.domain.layout.position(f.key)


# --------------------------------------------------------------------------
# interpretation

def eval_expr(expr, state: WorldState, dt=None) -> float:
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Fluent):
        return state.values[state.layout.position(expr.key)]
    if isinstance(expr, DeltaT):
        if dt is None or dt <= 0:
            raise PlanningError("#t evaluated without a positive step length")
        return dt
    if isinstance(expr, Neg):
        return -eval_expr(expr.arg, state, dt)
    a = eval_expr(expr.left, state, dt)
    b = eval_expr(expr.right, state, dt)
    return _arith(expr.op, a, b)


def _arith(op, a, b):
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if b == 0:
        raise DivisionByZero(f"division of {a!r} by zero")
    return a / b


def compare(op, a, b, tol=TOLERANCE) -> bool:
    if op == "=":
        return abs(a - b) <= tol
    if op == "<=":
        return a <= b + tol
    if op == ">=":
        return a >= b - tol
    if op == "<":
        return a < b - tol
    return a > b + tol


def eval_condition(cond, state: WorldState, tol=TOLERANCE) -> bool:
    if isinstance(cond, And):
        return all(eval_condition(p, state, tol) for p in cond.parts)
    if isinstance(cond, Literal):
        return bool(state.values[state.layout.position(cond.key)]) == cond.positive
    return compare(cond.op, eval_expr(cond.left, state), eval_expr(cond.right, state), tol)


def apply_effects(effects: Iterable, state: WorldState, dt=None) -> WorldState:
    """Apply an effect list with simultaneous semantics: every right-hand side
    is read from ``state`` before anything is written."""
    effects = list(effects)
    check_effects(effects, "process" if dt is not None else "action")
    updates = {}
    for e in effects:
        if isinstance(e, SetBool):
            updates[e.key] = e.value
            continue
        rhs = eval_expr(e.expr, state, dt)
        if e.kind == "assign":
            updates[e.key] = rhs
        elif e.kind == "increase":
            updates[e.key] = state[e.key] + rhs
        else:
            updates[e.key] = state[e.key] - rhs
    return state.replace(updates)


# --------------------------------------------------------------------------
# compilation to Python closures (the search hot path)

def _div(a, b):
    if b == 0:
        raise DivisionByZero(f"division of {a!r} by zero")
    return a / b


_ENV = {"_div": _div, "abs": abs}


def expr_source(expr, index: dict, constants: Optional[dict] = None) -> str:
    """Python source for ``expr`` reading fluents from ``v`` and #t from ``dt``.

    Fluents found in ``constants`` are inlined as literals.
    """
    if isinstance(expr, Const):
        return repr(float(expr.value))
    if isinstance(expr, Fluent):
        if constants is not None and expr.key in constants:
            return repr(float(constants[expr.key]))
        try:
            return f"v[{index[expr.key]}]"
        except KeyError:
            raise UnknownFluent(expr.key) from None
    if isinstance(expr, DeltaT):
        return "dt"
    if isinstance(expr, Neg):
        return f"(-{expr_source(expr.arg, index, constants)})"
    left = expr_source(expr.left, index, constants)
    right = expr_source(expr.right, index, constants)
    if expr.op == "/":
        return f"_div({left}, {right})"
    return f"({left} {expr.op} {right})"


def condition_source(cond, index: dict, constants=None, tol=TOLERANCE) -> str:
    parts = []
    for c in conjuncts(cond):
        if isinstance(c, Literal):
            if constants is not None and c.key in constants:
                if bool(constants[c.key]) != c.positive:
                    return "False"
                continue
            try:
                pos = index[c.key]
            except KeyError:
                raise UnknownFluent(c.key) from None
            parts.append(f"v[{pos}]" if c.positive else f"(not v[{pos}])")
        else:
            a = expr_source(c.left, index, constants)
            b = expr_source(c.right, index, constants)
            if c.op == "=":
                parts.append(f"(abs({a} - {b}) <= {tol!r})")
            elif c.op == "<=":
                parts.append(f"({a} <= {b} + {tol!r})")
            elif c.op == ">=":
                parts.append(f"({a} >= {b} - {tol!r})")
            elif c.op == "<":
                parts.append(f"({a} < {b} - {tol!r})")
            else:
                parts.append(f"({a} > {b} + {tol!r})")
    if not parts:
        return "True"
    # literals first: they are the cheapest tests and usually fail
    parts.sort(key=lambda p: 0 if p.startswith("v[") or p.startswith("(not v[") else 1)
    return " and ".join(parts)


def compile_expr(expr, index, constants=None) -> Callable:
    return eval(f"lambda v, dt=None: {expr_source(expr, index, constants)}", dict(_ENV))


def compile_condition(cond, index, constants=None, tol=TOLERANCE) -> Callable:
    return eval(f"lambda v: {condition_source(cond, index, constants, tol)}", dict(_ENV))
