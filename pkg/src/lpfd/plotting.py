"""Figures for CLI reports, rendered off-screen to image files."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from . import analysis  # noqa: E402
from .model import PDModel  # noqa: E402

PANEL = ("nash", "weakPareto", "strongPareto", "ca1", "ca2", "ca")
LABELS = {"nash": "Nash", "weakPareto": "weak Pareto", "strongPareto": "strong Pareto",
          "ca1": "ca1", "ca2": "ca2", "ca": "ca"}


def membership_matrix(m: PDModel, group, concepts=PANEL) -> np.ndarray:
    """Rows follow ``concepts``, columns the canonical profile order."""
    rows = []
    for c in concepts:
        rep = analysis.solve(m, c, group)
        rows.append([s in rep.solutions for s in m.profiles])
    return np.array(rows, dtype=bool)


def membership_figure(m: PDModel, group, path, highlight: str | None = None, concepts=PANEL, dpi: int = 120):
    """Heatmap of which profiles satisfy which concept for ``group``."""
    mat = membership_matrix(m, group, concepts)
    n_rows, n_cols = mat.shape
    fig, ax = plt.subplots(figsize=(max(4.0, 0.55 * n_cols + 2.2), 0.45 * n_rows + 1.6))
    ax.imshow(mat, cmap=ListedColormap(["#eeeeee", "#2b7bba"]), vmin=0, vmax=1, aspect="auto")
    ax.set_xticks(range(n_cols))
    ax.set_xticklabels([s.id for s in m.profiles], rotation=60 if n_cols > 6 else 0,
                       ha="right" if n_cols > 6 else "center", fontsize=8)
    ax.set_yticks(range(n_rows))
    ax.set_yticklabels([LABELS.get(c, c) for c in concepts], fontsize=9)
    ax.set_xticks(np.arange(-0.5, n_cols), minor=True)
    ax.set_yticks(np.arange(-0.5, n_rows), minor=True)
    ax.grid(which="minor", color="white", linewidth=1.5)
    ax.tick_params(which="minor", length=0)
    if highlight in concepts:
        k = list(concepts).index(highlight)
        ax.add_patch(plt.Rectangle((-0.5, k - 0.5), n_cols, 1, fill=False, edgecolor="#d62728", linewidth=2))
    members = ",".join(m.vocab.ordered(group))
    ax.set_title(f"solution concepts for {{{members}}}", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    return mat


def fuzz_figure(report: dict, path, dpi: int = 120):
    """Bar chart of instances checked and violations found per schema."""
    names = list(report["schemata"])
    checked = [report["schemata"][n]["instances"] for n in names]
    bad = [report["schemata"][n]["violations"] for n in names]
    fig, ax = plt.subplots(figsize=(max(5.0, 0.5 * len(names) + 2), 3.2))
    x = np.arange(len(names))
    ax.bar(x, checked, color="#cccccc", label="instances")
    ax.bar(x, bad, color="#d62728", label="violations")
    ax.set_xticks(x)
    ax.set_xticklabels(names, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("count")
    ax.legend(frameon=False, fontsize=8)
    for side in ("top", "right"):
        ax.spines[side].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
