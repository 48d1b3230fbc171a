"""Reader and writer for the PDDL+ subset used by the package.

Supported: typed objects, predicates and functions, ``:action``, ``:event`` and
``:process`` with conjunctive preconditions (comparisons, literals, negated
literals), ``assign``/``increase``/``decrease`` effects, ``#t``, and
``SIN(x)``/``COS(x)`` written as calls (expanded to their rational
approximations on read).  Anything else (``:durative-action``, ``forall``,
``or``...) is rejected.

Grounding happens once, when a problem is read against a domain template.
Happenings whose static preconditions are false in the initial state are
dropped, which keeps pairwise events (support relations, TNT blasts) small.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .core import (
    ARITH_OPS, COMPARE_OPS, And, BinOp, Compare, Const, DeltaT, Fluent,
    Happening, HybridDomain, Literal, ModelError, Neg, NumericEffect,
    PlanningError, PlanningProblem, SetBool, conjuncts, condition_exprs,
    walk_expr,
)
from .trig import cos_expr, sin_expr

HAPPENING_KEYS = {":action": "action", ":event": "event", ":process": "process"}
UNSUPPORTED = {
    "or", "forall", "exists", "imply", "when", "at", "over",
    ":durative-action", ":derived", ":constraints", ":constants",
    ":metric", ":timed-initial-literals",
}
_NUMBER = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


# --------------------------------------------------------------------------
# errors

@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    length: int

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"


class PDDLError(PlanningError):
    def __init__(self, message, span=None):
        super().__init__(f"{span}: {message}" if span else message)
        self.message = message
        self.span = span


class PDDLSyntaxError(PDDLError):
    pass


class UndeclaredParameter(PDDLError):
    pass


class UndeclaredFluent(PDDLError):
    pass


class UnknownObject(PDDLError):
    pass


class IncompleteInit(PDDLError):
    pass


# --------------------------------------------------------------------------
# s-expressions

@dataclass
class Atom:
    text: str
    span: SourceSpan
    end: int  # byte offset just past the token


@dataclass
class SList:
    items: list
    span: SourceSpan
    start: int


def _tokens(text, filename):
    line, col, i, n = 1, 1, 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line, col, i = line + 1, 1, i + 1
        elif c.isspace():
            col, i = col + 1, i + 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            yield c, SourceSpan(filename, line, col, 1), i, i + 1
            col, i = col + 1, i + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "();":
                j += 1
            yield text[i:j], SourceSpan(filename, line, col, len(text[i:j].encode("utf-8"))), i, j
            col, i = col + (j - i), j


def read_sexprs(text, filename="<string>") -> list:
    stack = [SList([], SourceSpan(filename, 1, 1, 0), 0)]
    for tok, span, start, end in _tokens(text, filename):
        if tok == "(":
            stack.append(SList([], span, start))
        elif tok == ")":
            if len(stack) == 1:
                raise PDDLSyntaxError("unbalanced ')'", span)
            done = stack.pop()
            stack[-1].items.append(done)
        else:
            stack[-1].items.append(Atom(tok, span, end))
    if len(stack) != 1:
        raise PDDLSyntaxError("unclosed '('", stack[-1].span)
    return stack[0].items


def _head(node):
    if isinstance(node, SList) and node.items and isinstance(node.items[0], Atom):
        return node.items[0].text.lower()
    return None


def _expect_list(node, what):
    if not isinstance(node, SList):
        raise PDDLSyntaxError(f"expected {what}", node.span)
    return node


def _expect_atom(node, what):
    if not isinstance(node, Atom):
        raise PDDLSyntaxError(f"expected {what}", node.span)
    return node.text


# --------------------------------------------------------------------------
# templates

@dataclass(frozen=True)
class Signature:
    name: str
    params: tuple  # ((var, type), ...)


@dataclass(frozen=True)
class LiftedHappening:
    kind: str
    name: str
    params: tuple
    precondition: object
    effects: tuple


@dataclass(frozen=True)
class DomainTemplate:
    name: str
    requirements: tuple = ()
    types: tuple = ()  # ((type, parent), ...)
    predicates: tuple = ()
    functions: tuple = ()
    happenings: tuple = ()

    def predicate(self, name):
        for p in self.predicates:
            if p.name == name:
                return p
        return None

    def function(self, name):
        for f in self.functions:
            if f.name == name:
                return f
        return None

    def count(self, kind):
        return sum(1 for h in self.happenings if h.kind == kind)


@dataclass(frozen=True)
class ProblemAST:
    name: str
    domain_name: str
    objects: tuple  # ((name, type), ...)
    init: tuple  # (("bool", key) | ("num", key, value), ...)
    goal: object


def _typed_list(items, span, allow_vars):
    out, pending = [], []
    i = 0
    while i < len(items):
        text = _expect_atom(items[i], "name")
        if text == "-":
            if i + 1 >= len(items) or not pending:
                raise PDDLSyntaxError("dangling '-' in typed list", items[i].span)
            typ = _expect_atom(items[i + 1], "type name")
            out.extend((p, typ) for p in pending)
            pending = []
            i += 2
            continue
        if allow_vars is not None and text.startswith("?") != allow_vars:
            raise PDDLSyntaxError(f"unexpected {'variable' if allow_vars is False else 'name'} {text!r}", items[i].span)
        pending.append(text)
        i += 1
    out.extend((p, "object") for p in pending)
    return tuple(out)


class _Ctx:
    def __init__(self, preds, funcs, params, allow_dt=False, objects=None):
        self.preds = preds
        self.funcs = funcs
        self.params = params
        self.allow_dt = allow_dt
        self.objects = objects  # problem context: object -> type


def _args(items, ctx, sig_name, arity, span):
    args = []
    for it in items:
        a = _expect_atom(it, "argument")
        if a.startswith("?"):
            if ctx.params is None or a not in ctx.params:
                raise UndeclaredParameter(f"parameter {a} is not declared", it.span)
        elif ctx.objects is not None and a not in ctx.objects:
            raise UnknownObject(f"unknown object {a!r}", it.span)
        args.append(a)
    if len(args) != arity:
        raise PDDLSyntaxError(f"{sig_name} expects {arity} arguments, got {len(args)}", span)
    return tuple(args)


def _fluent_ref(node, ctx):
    name = _expect_atom(node.items[0], "function name")
    if name not in ctx.funcs:
        raise UndeclaredFluent(f"function {name!r} is not declared", node.items[0].span)
    return Fluent(name, _args(node.items[1:], ctx, name, len(ctx.funcs[name].params), node.span))


def _merge_calls(items):
    """Fold ``SIN(x)``/``COS(x)`` (name immediately followed by a list)."""
    out, i = [], 0
    while i < len(items):
        it = items[i]
        if (isinstance(it, Atom) and it.text.upper() in ("SIN", "COS") and i + 1 < len(items)
                and isinstance(items[i + 1], SList) and items[i + 1].start == it.end):
            out.append(("call", it.text.upper(), items[i + 1], it.span))
            i += 2
        else:
            out.append(it)
            i += 1
    return out


def _parse_expr(node, ctx):
    if isinstance(node, tuple):
        _, fn, arg, _span = node
        inner = _parse_expr(arg, ctx)
        return sin_expr(inner) if fn == "SIN" else cos_expr(inner)
    if isinstance(node, Atom):
        t = node.text
        if t.lower() == "#t":
            if not ctx.allow_dt:
                raise PDDLSyntaxError("#t is only allowed inside process effects", node.span)
            return DeltaT()
        if _NUMBER.match(t):
            return Const(float(t))
        if t in ctx.funcs and not ctx.funcs[t].params:
            return Fluent(t)
        if t.startswith("?"):
            raise PDDLSyntaxError(f"parameter {t} used as a number", node.span)
        raise UndeclaredFluent(f"unknown term {t!r}", node.span)
    if not node.items:
        raise PDDLSyntaxError("empty expression", node.span)
    if isinstance(node.items[0], SList):
        raise PDDLSyntaxError("expected operator or function name", node.items[0].span)
    head = node.items[0].text
    if head.lower() in UNSUPPORTED:
        raise PDDLSyntaxError(f"unsupported construct {head!r}", node.items[0].span)
    if head in ARITH_OPS:
        args = [_parse_expr(a, ctx) for a in _merge_calls(node.items[1:])]
        if head == "-" and len(args) == 1:
            return Neg(args[0])
        if len(args) < 2:
            raise PDDLSyntaxError(f"operator {head} needs two operands", node.span)
        out = args[0]
        for a in args[1:]:
            out = BinOp(head, out, a)
        return out
    if len(node.items) == 1 and head.upper() in ("SIN", "COS"):
        raise PDDLSyntaxError(f"{head} must be written as {head}(x)", node.span)
    return _fluent_ref(node, ctx)


def _parse_literal(node, ctx, positive=True):
    node = _expect_list(node, "literal")
    name = _expect_atom(node.items[0], "predicate name") if node.items else None
    if name is None:
        raise PDDLSyntaxError("empty literal", node.span)
    if name not in ctx.preds:
        if name.lower() in UNSUPPORTED:
            raise PDDLSyntaxError(f"unsupported construct {name!r}", node.items[0].span)
        raise UndeclaredFluent(f"predicate {name!r} is not declared", node.items[0].span)
    return Literal(name, _args(node.items[1:], ctx, name, len(ctx.preds[name].params), node.span), positive)


def _parse_condition(node, ctx):
    node = _expect_list(node, "condition")
    head = _head(node)
    if head is None:
        if not node.items:
            return And(())
        raise PDDLSyntaxError("malformed condition", node.span)
    if head == "and":
        return And(tuple(_parse_condition(p, ctx) for p in node.items[1:]))
    if head == "not":
        if len(node.items) != 2:
            raise PDDLSyntaxError("not takes one argument", node.span)
        inner = _expect_list(node.items[1], "literal")
        if _head(inner) in COMPARE_OPS or _head(inner) in ("and", "not"):
            raise PDDLSyntaxError("negation is only supported on literals", inner.span)
        return _parse_literal(inner, ctx, positive=False)
    if head in COMPARE_OPS:
        items = _merge_calls(node.items[1:])
        if len(items) != 2:
            raise PDDLSyntaxError(f"comparison {head} needs two operands", node.span)
        return Compare(head, _parse_expr(items[0], ctx), _parse_expr(items[1], ctx))
    if head in UNSUPPORTED:
        raise PDDLSyntaxError(f"unsupported construct {head!r}", node.items[0].span)
    return _parse_literal(node, ctx)


def _parse_effects(node, ctx):
    node = _expect_list(node, "effect")
    if _head(node) == "and":
        items = node.items[1:]
    elif not node.items:
        items = []
    else:
        items = [node]
    effects = []
    seen = {}
    for it in items:
        it = _expect_list(it, "effect")
        head = _head(it)
        if head in ("assign", "increase", "decrease", "scale-up", "scale-down"):
            if head.startswith("scale"):
                raise PDDLSyntaxError(f"unsupported effect {head!r}", it.items[0].span)
            parts = _merge_calls(it.items[1:])
            if len(parts) != 2:
                raise PDDLSyntaxError(f"{head} takes a fluent and an expression", it.span)
            target = _fluent_ref(_expect_list(parts[0], "fluent"), ctx)
            eff = NumericEffect(head, target, _parse_expr(parts[1], ctx))
        elif head == "not":
            lit = _parse_literal(it.items[1], ctx)
            eff = SetBool(lit.name, lit.args, False)
        elif head in UNSUPPORTED:
            raise PDDLSyntaxError(f"unsupported construct {head!r}", it.items[0].span)
        else:
            lit = _parse_literal(it, ctx)
            eff = SetBool(lit.name, lit.args, True)
        if eff.key in seen:
            raise ModelError(f"{it.span}: fluent {eff.key} changed twice in one effect")
        seen[eff.key] = True
        effects.append(eff)
    return tuple(effects)


def _parse_happening(node, kind, preds, funcs):
    name = _expect_atom(node.items[1], "happening name") if len(node.items) > 1 else None
    if name is None:
        raise PDDLSyntaxError("happening without a name", node.span)
    fields = {}
    i = 2
    while i < len(node.items):
        key = _expect_atom(node.items[i], "keyword").lower()
        if key not in (":parameters", ":precondition", ":effect"):
            raise PDDLSyntaxError(f"unsupported happening field {key!r}", node.items[i].span)
        if i + 1 >= len(node.items):
            raise PDDLSyntaxError(f"missing value for {key}", node.items[i].span)
        fields[key] = node.items[i + 1]
        i += 2
    params = ()
    if ":parameters" in fields:
        p = _expect_list(fields[":parameters"], "parameter list")
        params = _typed_list(p.items, p.span, allow_vars=True)
    pnames = {v for v, _ in params}
    pre = _parse_condition(fields[":precondition"], _Ctx(preds, funcs, pnames)) if ":precondition" in fields else And(())
    eff = _parse_effects(fields[":effect"], _Ctx(preds, funcs, pnames, allow_dt=(kind == "process"))) if ":effect" in fields else ()
    return LiftedHappening(kind, name, params, pre, eff)


def _signatures(node):
    out = []
    for it in node.items[1:]:
        it = _expect_list(it, "declaration")
        name = _expect_atom(it.items[0], "name")
        out.append(Signature(name, _typed_list(it.items[1:], it.span, allow_vars=True)))
    return tuple(out)


def parse_domain(text: str, filename="<domain>") -> DomainTemplate:
    forms = read_sexprs(text, filename)
    if len(forms) != 1 or _head(forms[0]) != "define":
        raise PDDLSyntaxError("expected a single (define (domain ...) ...) form",
                              forms[0].span if forms else SourceSpan(filename, 1, 1, 0))
    root = forms[0]
    hdr = _expect_list(root.items[1], "(domain name)") if len(root.items) > 1 else None
    if hdr is None or _head(hdr) != "domain" or len(hdr.items) != 2:
        raise PDDLSyntaxError("expected (domain name)", root.span)
    name = _expect_atom(hdr.items[1], "domain name")
    reqs, types, preds, funcs, haps = (), (), (), (), []
    for sec in root.items[2:]:
        sec = _expect_list(sec, "domain section")
        head = _head(sec)
        if head == ":requirements":
            reqs = tuple(_expect_atom(a, "requirement") for a in sec.items[1:])
        elif head == ":types":
            types = _typed_list(sec.items[1:], sec.span, allow_vars=False)
        elif head == ":predicates":
            preds = _signatures(sec)
        elif head == ":functions":
            funcs = _signatures(sec)
        elif head in HAPPENING_KEYS:
            pmap = {p.name: p for p in preds}
            fmap = {f.name: f for f in funcs}
            haps.append(_parse_happening(sec, HAPPENING_KEYS[head], pmap, fmap))
        else:
            raise PDDLSyntaxError(f"unsupported domain section {sec.items[0].text if sec.items else '()'!r}",
                                  sec.items[0].span if sec.items else sec.span)
    names = [p.name for p in preds] + [f.name for f in funcs]
    dup = {n for n in names if names.count(n) > 1}
    if dup:
        raise ModelError(f"fluent names declared twice: {sorted(dup)}")
    return DomainTemplate(name, reqs, types, preds, funcs, tuple(haps))


# --------------------------------------------------------------------------
# problems

def parse_problem_ast(text: str, template: DomainTemplate, filename="<problem>") -> ProblemAST:
    forms = read_sexprs(text, filename)
    if len(forms) != 1 or _head(forms[0]) != "define":
        raise PDDLSyntaxError("expected a single (define (problem ...) ...) form",
                              forms[0].span if forms else SourceSpan(filename, 1, 1, 0))
    root = forms[0]
    hdr = _expect_list(root.items[1], "(problem name)") if len(root.items) > 1 else None
    if hdr is None or _head(hdr) != "problem" or len(hdr.items) != 2:
        raise PDDLSyntaxError("expected (problem name)", root.span)
    name = _expect_atom(hdr.items[1], "problem name")
    dname, objects, init, goal = template.name, (), [], And(())
    preds = {p.name: p for p in template.predicates}
    funcs = {f.name: f for f in template.functions}
    sections = [_expect_list(s, "problem section") for s in root.items[2:]]
    for sec in sections:
        if _head(sec) == ":objects":
            objects = _typed_list(sec.items[1:], sec.span, allow_vars=False)
    omap = dict(objects)
    ctx = _Ctx(preds, funcs, None, objects=omap)
    for sec in sections:
        head = _head(sec)
        if head == ":domain":
            dname = _expect_atom(sec.items[1], "domain name")
        elif head == ":objects":
            continue
        elif head == ":init":
            for it in sec.items[1:]:
                it = _expect_list(it, "init fact")
                if _head(it) == "=":
                    if len(it.items) != 3:
                        raise PDDLSyntaxError("(= fluent value) expected", it.span)
                    f = _fluent_ref(_expect_list(it.items[1], "fluent"), ctx)
                    val = _expect_atom(it.items[2], "number")
                    if not _NUMBER.match(val):
                        raise PDDLSyntaxError(f"expected a number, got {val!r}", it.items[2].span)
                    init.append(("num", f.key, float(val)))
                else:
                    lit = _parse_literal(it, ctx)
                    init.append(("bool", lit.key))
        elif head == ":goal":
            goal = _parse_condition(sec.items[1], ctx)
        else:
            raise PDDLSyntaxError(f"unsupported problem section {head!r}", sec.span)
    if dname != template.name:
        raise PDDLError(f"problem is for domain {dname!r}, template is {template.name!r}", hdr.span)
    return ProblemAST(name, dname, objects, tuple(init), goal)


def parse_problem(text: str, template: DomainTemplate, filename="<problem>") -> PlanningProblem:
    return ground(template, parse_problem_ast(text, template, filename))


# --------------------------------------------------------------------------
# grounding

def _subst_expr(e, b):
    if isinstance(e, Fluent):
        return Fluent(e.name, tuple(b.get(a, a) for a in e.args)) if e.args else e
    if isinstance(e, Neg):
        return Neg(_subst_expr(e.arg, b))
    if isinstance(e, BinOp):
        return BinOp(e.op, _subst_expr(e.left, b), _subst_expr(e.right, b))
    return e


def _subst_cond(c, b):
    if isinstance(c, And):
        return And(tuple(_subst_cond(p, b) for p in c.parts))
    if isinstance(c, Literal):
        return Literal(c.name, tuple(b.get(a, a) for a in c.args), c.positive)
    return Compare(c.op, _subst_expr(c.left, b), _subst_expr(c.right, b))


def _subst_effect(e, b):
    if isinstance(e, SetBool):
        return SetBool(e.name, tuple(b.get(a, a) for a in e.args), e.value)
    return NumericEffect(e.kind, _subst_expr(e.target, b), _subst_expr(e.expr, b))


def _vars_of(cond):
    out = set()
    if isinstance(cond, Literal):
        out.update(a for a in cond.args if a.startswith("?"))
    else:
        for ex in (cond.left, cond.right):
            for f in walk_expr(ex):
                if isinstance(f, Fluent):
                    out.update(a for a in f.args if a.startswith("?"))
    return out


def _changed_names(template):
    preds, funcs = set(), set()
    for h in template.happenings:
        for e in h.effects:
            (preds if isinstance(e, SetBool) else funcs).add(e.key[0])
    return preds, funcs


def _objects_of_type(objects, types):
    parent = dict(types)

    def is_a(t, want):
        seen = set()
        while t is not None and t not in seen:
            if t == want:
                return True
            seen.add(t)
            t = parent.get(t)
        return want == "object"

    return lambda want: [o for o, t in objects if is_a(t, want)]


def ground(template: DomainTemplate, ast: ProblemAST) -> PlanningProblem:
    """Instantiate every lifted happening over the problem's objects."""
    of_type = _objects_of_type(ast.objects, template.types)
    changed_preds, changed_funcs = _changed_names(template)

    numeric_keys = []
    for f in template.functions:
        for combo in itertools.product(*(of_type(t) for _, t in f.params)):
            numeric_keys.append((f.name, *combo))
    true_atoms = set()
    values = {}
    for item in ast.init:
        if item[0] == "bool":
            true_atoms.add(item[1])
        else:
            values[item[1]] = item[2]
    missing = [k for k in numeric_keys if k not in values]
    if missing:
        shown = ", ".join("(" + " ".join(k) + ")" for k in missing[:6])
        raise IncompleteInit(f"init leaves {len(missing)} numeric fluents undefined: {shown}")
    extra = [k for k in values if k not in set(numeric_keys)]
    if extra:
        raise UnknownObject(f"init assigns fluents outside the declared signatures: {extra[:4]}")

    statics = {}
    for k in numeric_keys:
        if k[0] not in changed_funcs:
            statics[k] = values[k]
    static_preds = {p.name for p in template.predicates if p.name not in changed_preds}

    def static_value(fkey):
        return statics.get(fkey)

    grounded = {"action": [], "event": [], "process": []}
    for lh in template.happenings:
        var_order = [v for v, _ in lh.params]
        tests = []
        for c in conjuncts(lh.precondition):
            if isinstance(c, Literal) and c.name in static_preds:
                tests.append((c, _vars_of(c)))
            elif isinstance(c, Compare):
                names = {f.name for ex in (c.left, c.right) for f in walk_expr(ex) if isinstance(f, Fluent)}
                if names and not names & changed_funcs:
                    tests.append((c, _vars_of(c)))
        staged = [[] for _ in var_order] or [[]]
        pre_tests = []
        for c, vs in tests:
            if not vs:
                pre_tests.append(c)
            else:
                staged[max(var_order.index(v) for v in vs)].append(c)
        if not all(_static_ok(c, {}, true_atoms, static_value) for c in pre_tests):
            continue
        domains = [of_type(t) for _, t in lh.params]
        instances = []

        def extend(i, binding):
            if i == len(var_order):
                instances.append(dict(binding))
                return
            for obj in domains[i]:
                binding[var_order[i]] = obj
                if all(_static_ok(c, binding, true_atoms, static_value) for c in staged[i]):
                    extend(i + 1, binding)
            binding.pop(var_order[i], None)

        extend(0, {})
        instances.sort(key=lambda b: tuple(b[v] for v in var_order))
        for b in instances:
            grounded[lh.kind].append(Happening(
                lh.kind, lh.name, tuple(b[v] for v in var_order),
                _subst_cond(lh.precondition, b),
                tuple(_subst_effect(e, b) for e in lh.effects)))

    bool_keys = []
    seen = set()

    def note(key):
        if key not in seen:
            seen.add(key)
            bool_keys.append(key)

    numeric_set = set(numeric_keys)
    for group in ("action", "event", "process"):
        for h in grounded[group]:
            for k in sorted(h.fluent_keys()):
                if k not in numeric_set:
                    note(k)
    goal_literals = [c for c in conjuncts(ast.goal) if isinstance(c, Literal)]
    for c in goal_literals:
        note(c.key)
    for k in sorted(true_atoms):
        if k[0] not in static_preds:
            note(k)
    for c in goal_literals:
        if template.predicate(c.name) is None:
            raise UndeclaredFluent(f"goal uses undeclared predicate {c.name!r}")

    domain = HybridDomain(bool_keys, numeric_keys, grounded["action"], grounded["event"],
                          grounded["process"], name=template.name)
    assignment = dict(values)
    for k in bool_keys:
        assignment[k] = k in true_atoms
    initial = domain.state(assignment)
    for k in bool_keys:
        if k[0] in static_preds:
            statics[k] = k in true_atoms
    return PlanningProblem(domain, initial, ast.goal, name=ast.name, source=(template, ast), statics=statics)


def _static_ok(c, binding, true_atoms, static_value):
    from .core import compare

    if isinstance(c, Literal):
        key = (c.name, *(binding.get(a, a) for a in c.args))
        return (key in true_atoms) == c.positive
    g = _subst_cond(c, binding)

    def ev(e):
        if isinstance(e, Const):
            return e.value
        if isinstance(e, Fluent):
            return static_value(e.key)
        if isinstance(e, Neg):
            return -ev(e.arg)
        a, b = ev(e.left), ev(e.right)
        if e.op == "/" and b == 0:
            return None
        return {"+": a + b, "-": a - b, "*": a * b}.get(e.op, a / b if b else None)

    try:
        return compare(g.op, ev(g.left), ev(g.right))
    except TypeError:
        return True


# --------------------------------------------------------------------------
# printing

def fmt_number(x: float) -> str:
    return repr(float(x))


def print_expr(e) -> str:
    if isinstance(e, Const):
        return fmt_number(e.value)
    if isinstance(e, DeltaT):
        return "#t"
    if isinstance(e, Fluent):
        return "(" + " ".join((e.name, *e.args)) + ")"
    if isinstance(e, Neg):
        return f"(- {print_expr(e.arg)})"
    return f"({e.op} {print_expr(e.left)} {print_expr(e.right)})"


def _print_literal(c):
    atom = "(" + " ".join((c.name, *c.args)) + ")"
    return atom if c.positive else f"(not {atom})"


def print_condition(c, indent="") -> str:
    if isinstance(c, And):
        if not c.parts:
            return "(and)"
        inner = ("\n" + indent + "  ").join(print_condition(p, indent + "  ") for p in c.parts)
        return f"(and\n{indent}  {inner})"
    if isinstance(c, Literal):
        return _print_literal(c)
    return f"({c.op} {print_expr(c.left)} {print_expr(c.right)})"


def print_effect(e) -> str:
    if isinstance(e, SetBool):
        atom = "(" + " ".join((e.name, *e.args)) + ")"
        return atom if e.value else f"(not {atom})"
    return f"({e.kind} {print_expr(e.target)} {print_expr(e.expr)})"


def _typed(pairs):
    out, i = [], 0
    pairs = list(pairs)
    while i < len(pairs):
        j = i
        while j < len(pairs) and pairs[j][1] == pairs[i][1]:
            j += 1
        names = " ".join(p for p, _ in pairs[i:j])
        out.append(names if pairs[i][1] == "object" else f"{names} - {pairs[i][1]}")
        i = j
    return " ".join(out)


def print_domain(t: DomainTemplate) -> str:
    lines = [f"(define (domain {t.name})"]
    if t.requirements:
        lines.append(f"  (:requirements {' '.join(t.requirements)})")
    if t.types:
        lines.append(f"  (:types {_typed(t.types)})")
    for key, sigs in ((":predicates", t.predicates), (":functions", t.functions)):
        if sigs:
            lines.append(f"  ({key}")
            for s in sigs:
                inner = " ".join(filter(None, (s.name, _typed(s.params))))
                lines.append(f"    ({inner})")
            lines.append("  )")
    for h in t.happenings:
        lines.append(f"  (:{h.kind} {h.name}")
        lines.append(f"    :parameters ({_typed(h.params)})")
        lines.append(f"    :precondition {print_condition(h.precondition, '    ')}")
        if h.effects:
            effs = "\n      ".join(print_effect(e) for e in h.effects)
            lines.append(f"    :effect (and\n      {effs})")
        else:
            lines.append("    :effect (and)")
        lines.append("  )")
    lines.append(")")
    return "\n".join(lines) + "\n"


def print_problem(problem) -> str:
    """Print a :class:`ProblemAST` or a problem produced by :func:`ground`."""
    ast = problem.source[1] if isinstance(problem, PlanningProblem) else problem
    if ast is None:
        raise PDDLError("problem has no source to print")
    lines = [f"(define (problem {ast.name})", f"  (:domain {ast.domain_name})"]
    lines.append(f"  (:objects {_typed(ast.objects)})")
    lines.append("  (:init")
    for item in ast.init:
        atom = "(" + " ".join(item[1]) + ")"
        lines.append(f"    {atom}" if item[0] == "bool" else f"    (= {atom} {fmt_number(item[2])})")
    lines.append("  )")
    lines.append(f"  (:goal {print_condition(ast.goal, '  ')})")
    lines.append(")")
    return "\n".join(lines) + "\n"
