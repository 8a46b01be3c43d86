"""Deterministic matplotlib defaults shared by every panel."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

RC = {
    "figure.figsize": (4.2, 3.2),
    "figure.dpi": 150,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
    "font.size": 9,
    "font.family": "DejaVu Sans",
    "axes.labelsize": 10,
    "axes.titlesize": 10,
    "axes.linewidth": 0.8,
    "lines.linewidth": 1.4,
    "lines.markersize": 4,
    "legend.fontsize": 8,
    "legend.frameon": False,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "image.cmap": "viridis",
    # reproducible SVG ids
    "svg.hashsalt": "magnomech-figures",
}

CYCLE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"]


def use():
    plt.rcParams.update(RC)


def save(fig, path):
    """Write the figure without volatile metadata (dates, tool versions)."""
    path = str(path)
    if path.endswith(".svg"):
        fig.savefig(path, metadata={"Date": None})
    elif path.endswith(".png"):
        fig.savefig(path, metadata={"Software": None})
    else:
        fig.savefig(path)
    plt.close(fig)
