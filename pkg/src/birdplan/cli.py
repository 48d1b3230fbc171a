"""Command-line entry point.

Exit codes: 0 success (plan found, plan valid, level passed), 1 no plan /
plan invalid / level not passed, 2 usage error, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import fields, replace

from .birds import BirdsConfig, read_level, translate_level, write_level
from .birds.level import LevelDescription
from .core import PlanningError
from .pddl import parse_domain, parse_problem, parse_problem_ast, print_domain, print_problem
from .search import STRATEGIES, InvalidConfig, Plan, search
from .sim import DEFAULT_DT, NotApplicable, validate_plan, write_trace

EXIT_OK, EXIT_NO_PLAN, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3

_CONFIG_KEYS = {f.name for f in fields(BirdsConfig)}
_LEVEL_KEYS = {"gravity", "ground_damper"}
_RUN_KEYS = {"dt", "dt_exec"}


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


def _overrides(pairs):
    out = {}
    for p in pairs or ():
        key, sep, value = p.partition("=")
        if not sep:
            raise UsageError(f"--set expects key=value, got {p!r}")
        if key not in _CONFIG_KEYS | _LEVEL_KEYS | _RUN_KEYS:
            known = ", ".join(sorted(_CONFIG_KEYS | _LEVEL_KEYS | _RUN_KEYS))
            raise UsageError(f"unknown --set key {key!r} (known: {known})")
        try:
            out[key] = float(value)
        except ValueError:
            raise UsageError(f"--set {key}: not a number: {value!r}") from None
    return out


def _settings(args):
    ov = _overrides(args.set)
    config = BirdsConfig().with_overrides({k: v for k, v in ov.items() if k in _CONFIG_KEYS})
    level = {k: v for k, v in ov.items() if k in _LEVEL_KEYS}
    dt = ov.get("dt", getattr(args, "dt", None) or DEFAULT_DT)
    dt_exec = ov.get("dt_exec", getattr(args, "dt_exec", None) or dt / 5)
    if dt <= 0 or dt_exec <= 0:
        raise UsageError("dt must be positive")
    return config, level, dt, dt_exec


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_problem(domain_path, problem_path):
    template = parse_domain(_read(domain_path), domain_path)
    return template, parse_problem(_read(problem_path), template, problem_path)


def _load_level(path, level_overrides) -> LevelDescription:
    try:
        lv = read_level(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return replace(lv, **level_overrides).validate() if level_overrides else lv


def _write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _guidance(problem, heuristic, helpful, config, horizon):
    from .birds.heuristics import preferred_predicate, proximity_heuristic, score_heuristic

    try:
        h = {"proximity": lambda: proximity_heuristic(problem, horizon),
             "score": lambda: score_heuristic(problem, config),
             "none": lambda: None}[heuristic]()
        pref = preferred_predicate(problem) if helpful else None
    except (KeyError, TypeError) as exc:
        raise InputError(f"heuristic {heuristic!r} needs a birds-domain problem ({exc})") from None
    return h, pref


# -- commands ---------------------------------------------------------------

def cmd_parse(args):
    template = parse_domain(_read(args.domain), args.domain)
    again = parse_domain(print_domain(template), "<printed>")
    print(f"domain={template.name}")
    print(f"predicates={len(template.predicates)} functions={len(template.functions)}")
    print(f"actions={template.count('action')} events={template.count('event')} "
          f"processes={template.count('process')}")
    ok = again == template
    if args.problem:
        ast = parse_problem_ast(_read(args.problem), template, args.problem)
        ok = ok and parse_problem_ast(print_problem(ast), template, "<printed>") == ast
        problem = parse_problem(_read(args.problem), template, args.problem)
        d = problem.domain
        print(f"problem={ast.name} objects={len(ast.objects)}")
        print(f"grounded actions={len(d.actions)} events={len(d.events)} processes={len(d.processes)} "
              f"fluents={len(d.layout.keys)}")
    if args.print:
        sys.stdout.write(print_domain(template))
        if args.problem:
            sys.stdout.write(print_problem(ast))
    print(f"roundtrip={'ok' if ok else 'mismatch'}")
    return EXIT_OK if ok else EXIT_NO_PLAN


def cmd_plan(args):
    if args.search in ("gbfs", "astar") and args.heuristic == "none":
        raise UsageError(f"--search {args.search} needs --heuristic score or proximity")
    if args.helpful and args.search not in ("gbfs", "astar"):
        raise UsageError("--helpful needs --search gbfs or astar")
    config, _, dt, _ = _settings(args)
    _, problem = _load_problem(args.domain, args.problem)
    h, pref = _guidance(problem, args.heuristic, args.helpful, config, args.horizon)
    res = search(problem, args.search, heuristic=h, helpful=args.helpful, preferred=pref,
                 timeout=args.timeout, dt=dt, horizon=args.horizon, node_limit=args.node_limit)
    sys.stdout.write(res.stats.as_text())
    print(f"seed={args.seed}")
    if res.plan is None:
        print("plan=none")
        return EXIT_NO_PLAN
    text = f"; seed={args.seed} search={args.search} heuristic={args.heuristic} dt={dt!r}\n"
    text += res.plan.to_text()
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args):
    _, _, dt, _ = _settings(args)
    _, problem = _load_problem(args.domain, args.problem)
    plan = Plan.from_text(_read(args.plan))
    try:
        res = validate_plan(problem, plan, dt=dt, horizon=args.horizon)
    except NotApplicable as exc:
        print(f"passed=false\nerror={exc}")
        return EXIT_NO_PLAN
    print(f"passed={'true' if res.passes else 'false'}")
    if res.goal_time is not None:
        print(f"goal_time={res.goal_time!r}")
    print(f"seed={args.seed}")
    return EXIT_OK if res.passes else EXIT_NO_PLAN


def cmd_play(args):
    from .bench.agents import AGENTS, run_episode

    if args.agent not in AGENTS:
        raise UsageError(f"unknown agent {args.agent!r}; choose from {', '.join(AGENTS)}")
    config, level, dt, dt_exec = _settings(args)
    lv = _load_level(args.level, level)
    res = run_episode(lv, args.agent, dt_plan=dt, dt_exec=dt_exec, timeout=args.timeout,
                      seed=args.seed, node_limit=args.node_limit, config=config)
    for s in res.shots:
        extra = f" nodes_expanded={s.stats.nodes_expanded}" if s.stats else ""
        print(f"shot bird={s.bird} source={s.source} release={s.release_time!r} "
              f"angle={s.angle:.4f} pigs_killed={s.pigs_killed}{extra}")
    print(f"passed={'true' if res.passed else 'false'}")
    print(f"birds_used={res.birds_used} pigs_killed={res.pigs_killed}/{res.total_pigs} "
          f"fallback_shots={res.fallback_shots} fidelity_misses={res.fidelity_misses}")
    print(f"seed={args.seed}")
    if args.out:
        _write(args.out, f"; seed={args.seed} agent={args.agent}\n" + res.executed.to_text())
    return EXIT_OK if res.passed else EXIT_NO_PLAN


def cmd_gen_level(args):
    from .bench.templates import TEMPLATES, generate_level

    if args.template not in TEMPLATES:
        raise UsageError(f"unknown template {args.template}; choose from {sorted(TEMPLATES)}")
    lv = generate_level(args.template, args.seed)
    if args.out:
        os.makedirs(os.path.dirname(os.path.abspath(args.out)), exist_ok=True)
        write_level(args.out, lv)
    else:
        from .birds import dump_level
        sys.stdout.write(dump_level(lv))
    print(f"objects={lv.n_objects} seed={args.seed}", file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_bench(args):
    from .bench.agents import AGENTS
    from .bench.harness import BenchSettings, run_benchmark

    config, level, dt, dt_exec = _settings(args)
    try:
        templates = [int(t) for t in args.templates.split(",") if t]
    except ValueError:
        raise UsageError(f"--templates expects comma-separated ids, got {args.templates!r}") from None
    agents = [a for a in args.agents.split(",") if a]
    for a in agents:
        if a not in AGENTS:
            raise UsageError(f"unknown agent {a!r}; choose from {', '.join(AGENTS)}")
    settings = BenchSettings(dt_plan=dt, dt_exec=dt_exec, node_limit=args.node_limit,
                             timeout=args.timeout, timing=args.timing, config=config,
                             level_overrides=tuple(sorted(level.items())))
    try:
        res = run_benchmark(templates, args.count, agents, seed=args.seed, jobs=args.jobs,
                            settings=settings, out=args.out)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sys.stdout.write(res.summary())
    print(f"\nrows={len(res.rows)} seed={args.seed} csv={args.out}")
    if not args.no_figures:
        from .bench.figures import write_figures
        for p in write_figures(res, args.out):
            print(f"figure={p}")
    return EXIT_OK


def cmd_trace(args):
    config, level, dt, _ = _settings(args)
    lv = _load_level(args.level, level)
    problem = translate_level(lv, config)
    plan = Plan.from_text(_read(args.plan))
    try:
        res = validate_plan(problem, plan, dt=dt, horizon=args.horizon, stop_at_goal=False)
    except NotApplicable as exc:
        print(f"error={exc}")
        return EXIT_NO_PLAN
    os.makedirs(os.path.dirname(os.path.abspath(args.out)), exist_ok=True)
    write_trace(args.out, res.trace, res.fired)
    with open(args.out, "r+", encoding="utf-8") as fh:
        body = fh.read()
        fh.seek(0)
        fh.write(json.dumps({"meta": {"dt": dt, "level": lv.name, "seed": args.seed}}, sort_keys=True) + "\n" + body)
    print(f"passed={'true' if res.passes else 'false'} states={len(res.trace)} seed={args.seed}")
    return EXIT_OK if res.passes else EXIT_NO_PLAN


# -- argument parsing --------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="birdplan", description="PDDL+ planning for Angry-Birds-style levels.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, dt=True):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override a numeric knob (repeatable)")
        if dt:
            sp.add_argument("--dt", type=float, default=None, help=f"planning step, default {DEFAULT_DT}")

    sp = sub.add_parser("parse", help="parse a domain (and problem) and check the print round trip")
    sp.add_argument("domain")
    sp.add_argument("problem", nargs="?")
    sp.add_argument("--print", action="store_true", help="also print the normalised PDDL")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("plan", help="search for a plan")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--problem", required=True)
    sp.add_argument("--search", choices=STRATEGIES, default="gbfs")
    sp.add_argument("--heuristic", choices=("score", "proximity", "none"), default="none")
    sp.add_argument("--helpful", action="store_true")
    sp.add_argument("--timeout", type=float, default=30.0)
    sp.add_argument("--node-limit", type=int, default=None)
    sp.add_argument("--horizon", type=float, default=10.0)
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("validate", help="simulate a plan and check the goal")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--problem", required=True)
    sp.add_argument("--plan", required=True)
    sp.add_argument("--horizon", type=float, default=10.0)
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("play", help="play a level file with an agent")
    sp.add_argument("--level", required=True)
    sp.add_argument("--agent", default="planner")
    sp.add_argument("--dt-exec", type=float, default=None)
    sp.add_argument("--timeout", type=float, default=None)
    sp.add_argument("--node-limit", type=int, default=20000)
    sp.add_argument("--out", help="write the executed release times as a plan file")
    common(sp)
    sp.set_defaults(func=cmd_play)

    sp = sub.add_parser("gen-level", help="generate a level from a template")
    sp.add_argument("--template", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen_level)

    sp = sub.add_parser("bench", help="run agents over generated levels")
    sp.add_argument("--templates", default="22,25,36,45,46,53,54,57,55")
    sp.add_argument("--count", type=int, default=25)
    sp.add_argument("--agents", default="planner,baseline")
    sp.add_argument("--out", required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--dt-exec", type=float, default=None)
    sp.add_argument("--node-limit", type=int, default=20000)
    sp.add_argument("--timeout", type=float, default=None)
    sp.add_argument("--timing", action="store_true", help="record wall-clock columns")
    sp.add_argument("--no-figures", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("trace", help="simulate a plan on a level and write a JSON-lines trace")
    sp.add_argument("--level", required=True)
    sp.add_argument("--plan", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--horizon", type=float, default=10.0)
    common(sp)
    sp.set_defaults(func=cmd_trace)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, InvalidConfig) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, PlanningError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main_exit():
    sys.exit(main())
