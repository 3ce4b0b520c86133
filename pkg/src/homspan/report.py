"""Render a spanning set to files: CSV + JSON alongside a heatmap figure."""

from __future__ import annotations

import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .spanning_set import SpanningSet, spanning_to_csv, spanning_to_json  # noqa: E402

__all__ = ["render_spanning_figure", "write_report"]


def render_spanning_figure(ss: SpanningSet, path, *, dpi: int = 150,
                           max_panels: int = 64) -> None:
    """One heatmap panel per spanning matrix, annotated when small."""
    shown = list(ss.items[:max_panels])
    count = max(len(shown), 1)
    ncols = min(8, max(1, math.ceil(math.sqrt(count))))
    nrows = math.ceil(count / ncols)
    fig, axes = plt.subplots(nrows, ncols,
                             figsize=(2.2 * ncols, 2.2 * nrows),
                             squeeze=False)
    vmax = 1.0
    arrays = []
    for item in shown:
        arr = np.array(item.matrix.tolists(), dtype=np.float64)
        arrays.append(arr)
        if arr.size:
            vmax = max(vmax, float(arr.max()))
    for ax_row in axes:
        for ax in ax_row:
            ax.set_axis_off()
    for idx, (item, arr) in enumerate(zip(shown, arrays)):
        ax = axes[idx // ncols][idx % ncols]
        ax.set_axis_on()
        ax.imshow(np.atleast_2d(arr), cmap="viridis", vmin=0.0, vmax=vmax)
        ax.set_xticks([])
        ax.set_yticks([])
        ax.set_title(f"#{idx} step {item.provenance.get('step', '?')}",
                     fontsize=8)
        if arr.size <= 64:
            for (r, c), v in np.ndenumerate(np.atleast_2d(arr)):
                ax.text(c, r, f"{int(v)}", ha="center", va="center",
                        fontsize=7,
                        color="white" if v < vmax / 2 else "black")
    title = (f"n={ss.graph.n}, order ({ss.k},{ss.l}): "
             f"{len(ss.items)} matrices")
    if len(shown) < len(ss.items):
        title += f" (showing {len(shown)})"
    fig.suptitle(title)
    fig.savefig(path, bbox_inches="tight", dpi=dpi)
    plt.close(fig)


def write_report(ss: SpanningSet, outdir, *, dpi: int = 150,
                 max_panels: int = 64) -> dict[str, Path]:
    """Write spanset.csv, spanset.json and spanset.png into `outdir`."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "csv": out / "spanset.csv",
        "json": out / "spanset.json",
        "png": out / "spanset.png",
    }
    paths["csv"].write_text(spanning_to_csv(ss))
    paths["json"].write_text(json.dumps(spanning_to_json(ss), indent=2) + "\n")
    render_spanning_figure(ss, paths["png"], dpi=dpi, max_panels=max_panels)
    return paths
