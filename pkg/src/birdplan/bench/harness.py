"""Benchmark runs: levels x agents -> CSV rows and summary tables."""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from ..birds import BirdsConfig
from .agents import agent_config, run_episode
from .templates import TEMPLATES, generate_level

CSV_HEADER = ("level_id", "template", "seed", "agent", "passed", "birds_used", "pigs_killed",
              "nodes_expanded", "nodes_generated", "plan_wall_ms", "episode_wall_ms",
              "fallback_shots")


@dataclass(frozen=True)
class BenchSettings:
    dt_plan: float = 0.05
    dt_exec: float = 0.01
    node_limit: int = 20000
    timeout: float = None      # wall seconds per search; None keeps runs deterministic
    timing: bool = False       # record wall-clock columns (otherwise written as 0)
    config: BirdsConfig = BirdsConfig()
    level_overrides: tuple = ()  # ((LevelDescription field, value), ...)


@dataclass
class BenchResult:
    rows: list = field(default_factory=list)
    templates: tuple = ()
    agents: tuple = ()

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow([r[k] for k in CSV_HEADER])
        return buf.getvalue()

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())

    def passed(self):
        """{(agent, template): levels passed}"""
        out = {}
        for r in self.rows:
            key = (r["agent"], r["template"])
            out[key] = out.get(key, 0) + (r["passed"] == "true")
        return out

    def mean_expanded(self):
        """{(agent, template): mean nodes expanded}; planner agents only."""
        sums, counts = {}, {}
        for r in self.rows:
            if agent_config(r["agent"]).kind != "planner" or agent_config(r["agent"]).strategy == "none":
                continue
            key = (r["agent"], r["template"])
            sums[key] = sums.get(key, 0) + r["nodes_expanded"]
            counts[key] = counts.get(key, 0) + 1
        return {k: sums[k] / counts[k] for k in sums}

    def summary(self) -> str:
        levels = {}
        for r in self.rows:
            levels[r["template"]] = levels.get(r["template"], set()) | {r["level_id"]}
        temps = list(self.templates)
        passed = self.passed()
        head = ["agent"] + [str(t) for t in temps]
        body = [[a] + [f"{passed.get((a, t), 0)}/{len(levels.get(t, ()))}" for t in temps]
                for a in self.agents]
        out = ["Levels passed", _table(head, body)]
        means = self.mean_expanded()
        planners = [a for a in self.agents if any((a, t) in means for t in temps)]
        if planners:
            body = [[a] + [f"{means[(a, t)]:,.1f}" if (a, t) in means else "-" for t in temps]
                    for a in planners]
            out += ["", "Mean nodes expanded", _table(head, body)]
        return "\n".join(out) + "\n"


def _table(head, body):
    widths = [max(len(row[i]) for row in [head] + body) for i in range(len(head))]

    def line(row):
        return "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(row, widths)))

    return "\n".join([line(head), "  ".join("-" * w for w in widths)] + [line(r) for r in body])


def _row(res, settings: BenchSettings):
    ms = (lambda x: f"{x:.1f}") if settings.timing else (lambda x: "0")
    return {
        "level_id": res.level_id, "template": res.template, "seed": res.seed, "agent": res.agent,
        "passed": "true" if res.passed else "false", "birds_used": res.birds_used,
        "pigs_killed": res.pigs_killed, "nodes_expanded": res.nodes_expanded,
        "nodes_generated": res.nodes_generated, "plan_wall_ms": ms(res.plan_wall_ms),
        "episode_wall_ms": ms(res.wall_ms), "fallback_shots": res.fallback_shots,
    }


def run_job(job):
    """One (template, level seed, agent) episode -> CSV row dict."""
    template, seed, agent, settings = job
    lv = generate_level(template, seed)
    if settings.level_overrides:
        lv = replace(lv, **dict(settings.level_overrides))
    res = run_episode(lv, agent, dt_plan=settings.dt_plan, dt_exec=settings.dt_exec,
                      timeout=settings.timeout, seed=seed, node_limit=settings.node_limit,
                      config=settings.config)
    return _row(res, settings)


def _sort_key(row):
    return (row["template"], row["seed"], row["agent"])


def run_benchmark(templates=tuple(TEMPLATES), count=25, agents=("planner", "baseline"), seed=0,
                  jobs=1, settings: BenchSettings = BenchSettings(), out=None,
                  progress=None) -> BenchResult:
    """Play ``count`` levels of each template with every agent.

    Level ``i`` of a template uses generator seed ``seed + i``.  Rows are
    sorted by (template, seed, agent) whatever order workers finish in.  On
    interrupt the rows finished so far are written to ``out`` before the
    exception propagates.
    """
    templates = tuple(int(t) for t in templates)
    for t in templates:
        if t not in TEMPLATES:
            raise ValueError(f"unknown template {t}")
    agents = tuple(agent_config(a).name for a in agents)
    work = [(t, seed + i, a, settings) for t in templates for i in range(count) for a in agents]
    result = BenchResult([], templates, agents)
    try:
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for row in pool.map(run_job, work, chunksize=1):
                    result.rows.append(row)
                    if progress:
                        progress(row)
        else:
            for job in work:
                row = run_job(job)
                result.rows.append(row)
                if progress:
                    progress(row)
    finally:
        result.rows.sort(key=_sort_key)
        if out is not None:
            os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
            result.write_csv(out)
    return result


def read_csv(path) -> BenchResult:
    ints = ("template", "seed", "birds_used", "pigs_killed", "nodes_expanded", "nodes_generated",
            "fallback_shots")
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        for k in ints:
            r[k] = int(r[k])
    temps = tuple(dict.fromkeys(r["template"] for r in rows))
    agents = tuple(dict.fromkeys(r["agent"] for r in rows))
    return BenchResult(rows, temps, agents)
