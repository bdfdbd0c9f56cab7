"""Matplotlib rendering for preset reports (file output only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_FIGSIZE = (6.4, 4.0)


def line_figure(curves, path, ylabel: str, title: str | None = None, points=None):
    """Plot (label, linestyle, x, y) curves against gt/pi and save to path.

    `points` is an optional list of (x, y, label) markers, used to flag the
    located concurrence peaks.
    """
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    for label, style, x, y in curves:
        ax.plot(x, y, style, label=label)
    if points:
        for x, y, label in points:
            ax.plot([x], [y], "ko", markersize=4)
            ax.annotate(label, (x, y), textcoords="offset points", xytext=(4, 4), fontsize=8)
    ax.set_xlabel(r"$gt/\pi$")
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.set_ylim(bottom=0.0)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def concurrence_nbar_figure(panels, path, title: str | None = None):
    """Side-by-side panels of concurrence (solid) and mean photon number
    (dashed); `panels` is a list of (panel_title, x, concurrence, nbar)."""
    fig, axes = plt.subplots(1, len(panels), figsize=(_FIGSIZE[0] * len(panels) * 0.75, 3.6))
    if len(panels) == 1:
        axes = [axes]
    for ax, (panel_title, x, concurrence, nbar) in zip(axes, panels):
        ax.plot(x, concurrence, "-", label="concurrence")
        ax.plot(x, nbar, "--", label="mean photon number")
        ax.set_xlabel(r"$gt/\pi$")
        ax.set_title(panel_title)
        ax.set_ylim(bottom=0.0)
        ax.grid(True, alpha=0.3)
        ax.legend()
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
