"""Persistence-diagram rendering.

Diagrams are drawn with matplotlib, one panel per degree: finite bars as
(birth, death) points above the diagonal, infinite bars on a dashed top
gutter line.  The output format follows the file extension, so ``.svg``
paths give the vector diagrams emitted by the CLI.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .barcode import Barcode


def _bounds(barcodes):
    lo, hi = math.inf, -math.inf
    for b in barcodes:
        for _, bar in b.all_bars():
            lo = min(lo, bar.birth)
            hi = max(hi, bar.death if not bar.infinite else bar.birth)
    if not math.isfinite(lo):
        lo, hi = 0.0, 1.0
    if hi <= lo:
        hi = lo + 1.0
    pad = 0.1 * (hi - lo)
    return lo - pad, hi + pad


def plot_barcodes(barcodes, path, titles=None):
    """Write persistence diagrams for one or more barcodes to a file."""
    barcodes = list(barcodes)
    titles = titles or [f"barcode {i}" for i in range(len(barcodes))]
    degrees = sorted({n for b in barcodes for n in b.degrees}) or [0]
    lo, hi = _bounds(barcodes)
    gutter = hi + 0.15 * (hi - lo)
    fig, axes = plt.subplots(
        len(barcodes), len(degrees),
        figsize=(3.2 * len(degrees), 3.0 * len(barcodes)),
        squeeze=False,
    )
    for r, b in enumerate(barcodes):
        for cidx, n in enumerate(degrees):
            ax = axes[r][cidx]
            ax.plot([lo, hi], [lo, hi], color="0.6", lw=0.8)
            ax.axhline(gutter, color="0.4", lw=0.8, ls="--")
            fin = [bar for bar in b.bars(n) if not bar.infinite]
            inf = [bar for bar in b.bars(n) if bar.infinite]
            if fin:
                ax.scatter([x.birth for x in fin], [x.death for x in fin],
                           s=18, color="tab:blue")
            if inf:
                ax.scatter([x.birth for x in inf], [gutter] * len(inf),
                           s=24, color="tab:red", marker="^")
            ax.set_xlim(lo, hi)
            ax.set_ylim(lo, gutter + 0.1 * (hi - lo))
            ax.set_title(f"{titles[r]}, degree {n}", fontsize=9)
            if r == len(barcodes) - 1:
                ax.set_xlabel("birth")
            if cidx == 0:
                ax.set_ylabel("death")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_barcode(barcode: Barcode, path, title="barcode"):
    return plot_barcodes([barcode], path, [title])
