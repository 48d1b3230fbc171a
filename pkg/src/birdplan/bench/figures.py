"""Bar charts for a benchmark run, written next to its CSV."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _grouped_bars(ax, templates, agents, value):
    width = 0.8 / max(len(agents), 1)
    xs = range(len(templates))
    for j, a in enumerate(agents):
        ax.bar([x + j * width for x in xs], [value(a, t) for t in templates], width, label=a)
    ax.set_xticks([x + width * (len(agents) - 1) / 2 for x in xs])
    ax.set_xticklabels([str(t) for t in templates])
    ax.set_xlabel("template")
    ax.legend(fontsize="small")


def write_figures(result, csv_path) -> list:
    """Render levels-passed and mean-nodes-expanded charts; returns the paths."""
    stem = os.path.splitext(os.path.abspath(csv_path))[0]
    templates, agents = list(result.templates), list(result.agents)
    paths = []

    passed = result.passed()
    fig, ax = plt.subplots(figsize=(8, 4))
    _grouped_bars(ax, templates, agents, lambda a, t: passed.get((a, t), 0))
    ax.set_ylabel("levels passed")
    fig.tight_layout()
    paths.append(f"{stem}_passed.png")
    fig.savefig(paths[-1], dpi=100)
    plt.close(fig)

    means = result.mean_expanded()
    planners = [a for a in agents if any((a, t) in means for t in templates)]
    if planners:
        fig, ax = plt.subplots(figsize=(8, 4))
        _grouped_bars(ax, templates, planners, lambda a, t: means.get((a, t), 0))
        ax.set_ylabel("mean nodes expanded")
        ax.set_yscale("symlog")
        fig.tight_layout()
        paths.append(f"{stem}_nodes.png")
        fig.savefig(paths[-1], dpi=100)
        plt.close(fig)
    return paths
