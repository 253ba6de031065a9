"""Figures for lemma reports."""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _style(ax, xlabel, ylabel, title):
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title, fontsize=11)
    ax.grid(True, alpha=0.3)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)


def plot_uq_sizes(report, path):
    qs = [i["q"] for i in report.instances]
    sizes = [i["size"] for i in report.instances]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(qs, [q // 2 if q % 2 == 0 else (q - 1) // 2 for q in qs], "k--", lw=1, label="expected size")
    colors = ["tab:green" if i["covers"] else "tab:red" for i in report.instances]
    ax.scatter(qs, sizes, c=colors, s=18, zorder=3)
    ax.scatter([], [], c="tab:green", s=18, label="U_q + U_q = F_q")
    ax.scatter([], [], c="tab:red", s=18, label="U_q + U_q != F_q")
    _style(ax, "q", "|U_q|", "Trace sets U_q over prime powers")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_curve_counts(report, path):
    rows = [i for i in report.instances if "min_curve_count" in i]
    if not rows:
        return False
    qs = [i["q"] for i in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(qs, [i["min_curve_count"] for i in rows], "o", ms=4, label="min over a of #X(F_q)")
    grid = [qs[0] + (qs[-1] - qs[0]) * t / 200 for t in range(201)]
    ax.plot(grid, [q + 1 - 2 * math.sqrt(q) - 12 for q in grid], "k-", lw=1, label="q + 1 - 2 sqrt(q) - 12")
    _style(ax, "q", "points", "Curve counts against the Hasse bound")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return True


def render_figures(reports, outdir) -> list[str]:
    """Write PNGs for the reports that have something to plot; returns paths."""
    os.makedirs(outdir, exist_ok=True)
    written = []
    for r in reports:
        if r.lemma_id != "U_q":
            continue
        path = os.path.join(outdir, "uq_sizes.png")
        plot_uq_sizes(r, path)
        written.append(path)
        path = os.path.join(outdir, "uq_curve_counts.png")
        if plot_curve_counts(r, path):
            written.append(path)
    return written
