"""The five panel kinds; each returns the arrays it drew for inspection."""

from __future__ import annotations

import math
import warnings

import numpy as np

from . import style
from .csvio import SchemaError, column, read_table, require_columns

style.use()

import matplotlib.pyplot as plt  # noqa: E402


def _annotate_empty(ax, path):
    warnings.warn(f"{path}: no data rows, rendering blank axes", RuntimeWarning, stacklevel=3)
    ax.annotate("no data", xy=(0.5, 0.5), xycoords="axes fraction",
                ha="center", va="center", color="0.4")


def heatmap(path, x, y, value, output, xlabel=None, ylabel=None, title=None,
            colorbar_label=None):
    """2D sweep CSV -> pcolormesh over the sorted unique axis values."""
    columns, rows = read_table(path)
    ix, iy, iv = require_columns(columns, (x, y, value), path)
    fig, ax = plt.subplots()
    if not rows:
        _annotate_empty(ax, path)
        xs = ys = np.array([])
        grid = np.zeros((0, 0))
    else:
        xs = np.unique(column(rows, ix))
        ys = np.unique(column(rows, iy))
        grid = np.full((len(ys), len(xs)), np.nan)
        for row in rows:
            xv, yv, vv = row[ix], row[iy], row[iv]
            if not isinstance(vv, float):
                vv = math.nan
            i = int(np.searchsorted(ys, yv))
            j = int(np.searchsorted(xs, xv))
            grid[i, j] = vv
        mesh = ax.pcolormesh(xs, ys, np.ma.masked_invalid(grid), shading="nearest")
        fig.colorbar(mesh, ax=ax, label=colorbar_label or value)
    ax.set_xlabel(xlabel or x)
    ax.set_ylabel(ylabel or y)
    if title:
        ax.set_title(title)
    style.save(fig, output)
    return {"x": xs, "y": ys, "grid": grid}


def line(paths, x, y, output, labels=None, xlabel=None, ylabel=None, title=None):
    """One curve per input CSV, sharing the x column name."""
    if isinstance(paths, str):
        paths = [paths]
    labels = labels or [None] * len(paths)
    if len(labels) != len(paths):
        raise SchemaError("labels must match inputs one to one")
    fig, ax = plt.subplots()
    drawn = []
    any_rows = False
    for k, (path, label) in enumerate(zip(paths, labels)):
        columns, rows = read_table(path)
        ix, iy = require_columns(columns, (x, y), path)
        xs = np.asarray(column(rows, ix))
        ys = np.asarray(column(rows, iy))
        order = np.argsort(xs) if len(xs) else np.array([], dtype=int)
        xs, ys = xs[order], ys[order]
        any_rows = any_rows or len(xs) > 0
        ax.plot(xs, ys, color=style.CYCLE[k % len(style.CYCLE)], label=label,
                marker="o" if len(xs) <= 40 else None)
        drawn.append({"x": xs, "y": ys, "label": label})
    if not any_rows:
        _annotate_empty(ax, paths[0])
    if any(lbl for lbl in labels):
        ax.legend()
    ax.set_xlabel(xlabel or x)
    ax.set_ylabel(ylabel or y)
    if title:
        ax.set_title(title)
    style.save(fig, output)
    return drawn


def polar(path, theta, r, output, title=None):
    """Closed curve of r(theta) in polar axes; theta in radians."""
    columns, rows = read_table(path)
    it, ir = require_columns(columns, (theta, r), path)
    fig = plt.figure()
    ax = fig.add_subplot(projection="polar")
    ths = np.asarray(column(rows, it))
    rs = np.asarray(column(rows, ir))
    if len(ths) == 0:
        _annotate_empty(ax, path)
    else:
        order = np.argsort(ths)
        ths, rs = ths[order], rs[order]
        # close the loop for a periodic response
        if not math.isclose(ths[-1] % (2 * math.pi), ths[0] % (2 * math.pi), abs_tol=1e-9):
            ths = np.append(ths, ths[0] + 2 * math.pi)
            rs = np.append(rs, rs[0])
        ax.plot(ths, rs, color=style.CYCLE[0])
    if title:
        ax.set_title(title)
    style.save(fig, output)
    return {"theta": ths, "r": rs}


def timeseries(path, x, ys, output, labels=None, xlabel=None, ylabel=None, title=None):
    """Columns of one trace CSV against time."""
    if isinstance(ys, str):
        ys = [ys]
    columns, rows = read_table(path)
    idx = require_columns(columns, (x, *ys), path)
    fig, ax = plt.subplots()
    ts = np.asarray(column(rows, idx[0]))
    drawn = {"t": ts}
    if len(ts) == 0:
        _annotate_empty(ax, path)
    labels = labels or ys
    for k, (name, iy) in enumerate(zip(ys, idx[1:])):
        vals = np.asarray(column(rows, iy))
        ax.plot(ts, vals, color=style.CYCLE[k % len(style.CYCLE)],
                label=labels[k] if len(ys) > 1 else None)
        drawn[name] = vals
    if len(ys) > 1:
        ax.legend()
    ax.set_xlabel(xlabel or x)
    ax.set_ylabel(ylabel or (ys[0] if len(ys) == 1 else None))
    if title:
        ax.set_title(title)
    style.save(fig, output)
    return drawn


def grouped_bars(paths, category, value, output, labels=None, xlabel=None,
                 ylabel=None, title=None):
    """One bar group per category value, one bar per input CSV."""
    if isinstance(paths, str):
        paths = [paths]
    labels = labels or [f"series {k}" for k in range(len(paths))]
    if len(labels) != len(paths):
        raise SchemaError("labels must match inputs one to one")
    series = []
    cats = None
    for path in paths:
        columns, rows = read_table(path)
        ic, iv = require_columns(columns, (category, value), path)
        cs = np.asarray(column(rows, ic))
        vs = np.asarray(column(rows, iv))
        order = np.argsort(cs)
        cs, vs = cs[order], vs[order]
        if cats is None:
            cats = cs
        elif len(cs) != len(cats) or not np.allclose(cs, cats, equal_nan=True):
            raise SchemaError(f"{path}: category column does not match the first input")
        series.append(vs)
    fig, ax = plt.subplots()
    if cats is None or len(cats) == 0:
        _annotate_empty(ax, paths[0])
        cats = np.array([])
    width = 0.8 / max(len(series), 1)
    xBase = np.arange(len(cats))
    for k, vs in enumerate(series):
        ax.bar(xBase + (k - (len(series) - 1) / 2) * width, np.nan_to_num(vs),
               width=width, label=labels[k], color=style.CYCLE[k % len(style.CYCLE)])
    ax.set_xticks(xBase)
    ax.set_xticklabels([format(c, "g") for c in cats])
    ax.legend()
    ax.set_xlabel(xlabel or category)
    ax.set_ylabel(ylabel or value)
    if title:
        ax.set_title(title)
    style.save(fig, output)
    return {"categories": cats, "series": series, "labels": labels}
