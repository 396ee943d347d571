"""Figure rendering for the report subcommands.

Figures are written straight to files; the Agg backend keeps this usable on
headless machines.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .experiments import ViolinGraph


def save_ratio_figure(rows: Sequence[tuple[int, float, float]], path) -> None:
    """True versus estimated ratio across delta, one marker per integer."""
    deltas = [r[0] for r in rows]
    true_vals = [r[1] for r in rows]
    approx_vals = [r[2] for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(deltas, true_vals, "o-", label="exact ratio")
    ax.plot(deltas, approx_vals, "s--", label="closed-form estimate")
    ax.set_xlabel(r"$\delta$")
    ax.set_ylabel("ratio of normalising constants")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_violin_figure(graphs: Sequence[ViolinGraph], path) -> None:
    """Violin of the replicate estimates per graph with both reference lines."""
    fig, axes = plt.subplots(1, len(graphs), figsize=(3.2 * len(graphs), 4.0),
                             squeeze=False)
    for ax, vg in zip(axes[0], graphs):
        values = [est.log_value for est in vg.estimates]
        ax.violinplot([values], positions=[0], showmedians=True, widths=0.7)
        ax.axhline(vg.exact_log, color="black", lw=1.0, label="exact")
        ax.axhline(vg.conjectured_log, color="black", lw=1.0, ls="--",
                   label="estimate")
        ax.set_title(f"graph {vg.graph_id}")
        ax.set_xticks([])
        if vg is graphs[0]:
            ax.set_ylabel("log normalising constant")
            ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
