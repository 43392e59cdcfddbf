"""Rendering of sweep output to figure files (PNG/PDF via matplotlib)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .reports import FIG4B_SEPARATIONS


def render_xy(path, header, rows, x_col, y_cols, ylabel, logy=False, title=None):
    """Line plot of selected columns against one x column."""
    xi = header.index(x_col)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for name in y_cols:
        yi = header.index(name)
        xs = [row[xi] for row in rows]
        ys = [abs(row[yi]) if logy else row[yi] for row in rows]
        ax.plot(xs, ys, marker="o", markersize=3, label=name)
    ax.set_xlabel(x_col)
    ax.set_ylabel(ylabel)
    if logy:
        ax.set_yscale("log")
    if title:
        ax.set_title(title)
    if len(y_cols) > 1:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_fig4b(path, header, rows, title=None):
    """Triple-panel style curves: solid = Debye off, dashed = Debye on."""
    xs = [row[0] for row in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    colors = ("C0", "C1", "C2")
    for i, a in enumerate(FIG4B_SEPARATIONS):
        off = [row[1 + 2 * i] for row in rows]
        on = [row[2 + 2 * i] for row in rows]
        label = f"a = {a*1e9:.0f} nm"
        ax.plot(xs, off, "-", color=colors[i], label=label + " (no orientation)")
        ax.plot(xs, on, "--", color=colors[i], label=label + " (with orientation)")
    ax.set_xlabel("T (K)")
    ax.set_ylabel("relative thermal correction")
    ax.legend(fontsize=7)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
