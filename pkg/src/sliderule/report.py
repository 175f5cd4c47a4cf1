"""Matplotlib figure for reading-error profiles.

Written next to the CSV by the profile command: a heatmap of the relative
reading error over the sampled grid, with off-scale cells masked out.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .simulator import ProfileTable  # noqa: E402

__all__ = ["save_error_figure"]


def save_error_figure(table: ProfileTable, out_path: str, title: str = "") -> None:
    xs = sorted({row.x for row in table.rows})
    ys = sorted({row.y for row in table.rows})
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}
    grid = np.full((len(ys), len(xs)), np.nan)
    for row in table.rows:
        if row.rel_err is not None:
            grid[yi[row.y], xi[row.x]] = row.rel_err

    fig, ax = plt.subplots(figsize=(7.0, 5.6), dpi=120)
    masked = np.ma.masked_invalid(grid)
    mesh = ax.pcolormesh(xs, ys, masked, shading="nearest", cmap="viridis")
    mesh.cmap.set_bad("#d9d9d9")
    fig.colorbar(mesh, ax=ax, label="relative reading error")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    if title:
        ax.set_title(title)
    n_off = sum(1 for row in table.rows if row.off_scale)
    note = f"max {table.max_rel_err:.3g}, mean {table.mean_rel_err:.3g}"
    if n_off:
        note += f", {n_off} off-scale point(s) masked"
    ax.annotate(note, xy=(0.0, 1.02), xycoords="axes fraction", fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
