"""Figures written next to the sweep reports.

plot_agreement
    Grid of instances (rows, grouped by field) against properties, colored by
    outcome.
plot_timings
    Per-property distribution of row runtimes.
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

# outcome codes: 0 not admissible, 1 error, 2 agree/true, 3 agree/false, 4 disagree
_COLORS = ["#d9d9d9", "#7f7f7f", "#4daf4a", "#377eb8", "#e41a1c"]
_LABELS = ["not admissible", "error", "agree (true)", "agree (false)", "disagree"]


def _outcome(row) -> int:
    if row.status == "not_admissible":
        return 0
    if row.status == "error":
        return 1
    if row.agree is False:
        return 4
    return 2 if row.decider else 3


def save_figure(fig, path, dpi=150):
    path = Path(path)
    # fixed metadata keeps the files reproducible across runs
    fig.savefig(path, dpi=dpi, bbox_inches="tight", metadata={"Software": None})
    plt.close(fig)
    return path


def plot_agreement(report, path):
    instances = list(dict.fromkeys(r.instance for r in report.rows))
    props = list(report.properties)
    grid = np.zeros((len(instances), len(props)), dtype=int)
    pos = {name: i for i, name in enumerate(instances)}
    for r in report.rows:
        if r.property in props:
            grid[pos[r.instance], props.index(r.property)] = _outcome(r)
    height = min(14.0, max(2.5, 0.04 * len(instances) + 1.5))
    fig, ax = plt.subplots(figsize=(2.2 + 1.3 * len(props), height))
    if len(instances):
        ax.imshow(grid, aspect="auto", cmap=ListedColormap(_COLORS), vmin=0, vmax=4,
                  interpolation="nearest")
    ax.set_xticks(range(len(props)))
    ax.set_xticklabels(props, rotation=30, ha="right")
    # label only field boundaries; hundreds of instance names are unreadable
    fields = [name.split("[")[0] for name in instances]
    ticks, labels = [], []
    for i, f in enumerate(fields):
        if i == 0 or f != fields[i - 1]:
            ticks.append(i)
            labels.append(f)
    ax.set_yticks(ticks)
    ax.set_yticklabels(labels, fontsize=8)
    ax.set_ylabel("instance (grouped by field)")
    handles = [plt.Rectangle((0, 0), 1, 1, color=c) for c in _COLORS]
    ax.legend(handles, _LABELS, loc="upper left", bbox_to_anchor=(1.02, 1), fontsize=8, frameon=False)
    s = report.summary()
    ax.set_title(f"decider vs oracle: {s['agree']} agree, {s['disagree']} disagree")
    return save_figure(fig, path)


def plot_timings(report, path):
    per_prop = defaultdict(list)
    for key, value in report.timings.items():
        if "|" in key:
            per_prop[key.rsplit("|", 1)[1]].append(value)
    props = [p for p in report.properties if per_prop.get(p)]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    if props:
        ax.boxplot([per_prop[p] for p in props], showfliers=True)
        ax.set_xticks(range(1, len(props) + 1))
        ax.set_xticklabels(props)
        ax.set_yscale("log")
    ax.set_ylabel("seconds per row")
    ax.set_title(f"row runtimes (total {report.timings.get('total', 0):.1f} s)")
    return save_figure(fig, path)
