"""Deterministic CSV and SVG figure writers for experiment outputs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "holomimo"

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def format_cell(value) -> str:
    """Shortest round-trip text for a cell; floats keep full double precision."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path, header, rows) -> None:
    """UTF-8 comma-separated table with a header row and '.' decimals."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_cell(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_xy_csv(path, x_name, x_values, series: dict) -> None:
    """Column-per-series table keyed by a shared abscissa."""
    header = [x_name] + list(series)
    cols = [np.asarray(x_values)] + [np.asarray(v) for v in series.values()]
    rows = zip(*cols)
    write_csv(path, header, rows)


def save_line_plot(path, x, series: dict, xlabel: str, ylabel: str,
                   title: str = "", logy: bool = False) -> None:
    """Polyline SVG plot with labeled axes; byte-stable across runs.

    The SVG date metadata is stripped and element ids are salted with a
    fixed string so repeated runs produce identical files.
    """
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, y in series.items():
        ax.plot(np.asarray(x), np.asarray(y), label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if logy:
        ax.set_yscale("log")
    if len(series) > 1:
        ax.legend(frameon=False, fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def save_panel_plot(path, panels, xlabel: str, shade_below=None) -> None:
    """Vertically stacked line panels sharing an x axis.

    ``panels`` is a list of (ylabel, x, series-dict, logy) tuples.
    ``shade_below`` = (x_limit, label) marks the region left of x_limit on
    every panel (used to annotate validity boundaries without clipping).
    """
    fig, axes = plt.subplots(len(panels), 1, figsize=(6.0, 3.2 * len(panels)), sharex=True)
    if len(panels) == 1:
        axes = [axes]
    for ax, (ylabel, x, series, logy) in zip(axes, panels):
        for label, y in series.items():
            ax.plot(np.asarray(x), np.asarray(y), label=label)
        if shade_below is not None:
            limit, label = shade_below
            ax.axvspan(float(np.min(x)), limit, alpha=0.12, color="gray", label=label)
        ax.set_ylabel(ylabel)
        if logy:
            ax.set_yscale("log")
        ax.legend(frameon=False, fontsize=9)
        ax.grid(True, alpha=0.3)
    axes[-1].set_xlabel(xlabel)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def write_summary(path, entries: dict) -> None:
    """Flat key = value text summary."""
    lines = [f"{k} = {format_cell(v)}" for k, v in entries.items()]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
