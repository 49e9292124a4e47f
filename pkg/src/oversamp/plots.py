"""Render CLI reports to PNG figures alongside their delimited output.

One figure per report kind; the data plotted is exactly the rows the
report emits, so the image is a faithful view of the CSV next to it.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _column(rows, columns, name):
    i = columns.index(name)
    return [row[i] for row in rows]


def _eig_pairs(columns):
    """(label, re-index, im-index) triples for lam*_re/lam*_im column pairs."""
    out = []
    for i, c in enumerate(columns):
        if c.startswith("lam") and c.endswith("_re"):
            label = c[3:-3]
            out.append((label, i, columns.index(f"lam{label}_im")))
    return out


def _plot_bounds_table(ax, report):
    for block, marker in (("s11", "o"), ("s22", "s")):
        rows = [r for r in report.rows if r[1] == block]
        if not rows:
            continue
        rs = [r[0] for r in rows]
        ax.plot(rs, [r[3] for r in rows], marker + "-", label=f"{block} min")
        ax.plot(rs, [r[4] for r in rows], marker + "--", label=f"{block} max")
        lo = [(r[0], r[2]) for r in rows if r[2] != ""]
        hi = [(r[0], r[5]) for r in rows if r[5] != ""]
        if lo:
            ax.plot(*zip(*lo), "k:", alpha=0.6)
        if hi:
            ax.plot(*zip(*hi), "k:", alpha=0.6)
    ax.set_xlabel("r")
    ax.set_ylabel("eigenvalue")
    ax.legend(fontsize=8)


def _plot_cond_table(ax, report):
    rs = _column(report.rows, report.columns, "r")
    conds = _column(report.rows, report.columns, "cond")
    ax.semilogy(rs, conds, "o-")
    ax.set_xlabel("r")
    ax.set_ylabel("condition number")


def _plot_eig_sweep(ax, report, sweep):
    vals = _column(report.rows, report.columns, sweep)
    for label, ire, iim in _eig_pairs(report.columns):
        ax.plot(vals, [row[ire] for row in report.rows], ".-", label=f"lam {label}")
    if sweep == "r":
        rr = np.linspace(min(vals), max(vals), 200)
        ax.plot(rr, 2 * rr - rr**2, "k--", alpha=0.5)
        ax.plot(rr, rr**2, "k--", alpha=0.5)
    if sweep == "m":
        r = report.config.get("r")
        if isinstance(r, (int, float)):
            ax.axhline(2 * r - r * r, color="k", ls="--", alpha=0.5)
            ax.axhline(r * r, color="k", ls="--", alpha=0.5)
        ax.set_xscale("log", base=2)
    ax.set_xlabel(sweep)
    ax.set_ylabel("Re eigenvalue")
    ax.legend(fontsize=8)


def _plot_eig_vs_n(ax, report):
    rs = sorted(set(_column(report.rows, report.columns, "r")))
    pairs = _eig_pairs(report.columns)
    for r in rs:
        rows = [row for row in report.rows if row[1] == r]
        ns = [row[0] for row in rows]
        for label, ire, _ in pairs:
            ax.plot(ns, [row[ire] for row in rows], ".-", label=f"r={r:g} lam {label}")
    ax.set_xlabel("N")
    ax.set_ylabel("Re eigenvalue")
    ax.legend(fontsize=8)


def _plot_recover(ax, report):
    for channel, color in (("f", "C0"), ("df", "C1")):
        rows = [row for row in report.rows if row[1] == channel]
        if not rows:
            continue
        xs = [row[0] for row in rows]
        ax.plot(xs, [row[2] for row in rows], color + "o", label=f"{channel} truth")
        ax.plot(xs, [row[3] for row in rows], color + "x", ms=10, label=f"{channel} recovered")
    ax.set_xlabel("x")
    ax.set_ylabel("sample value")
    ax.legend(fontsize=8)


def _plot_reconstruct(ax, report):
    xs = _column(report.rows, report.columns, "x")
    ax.plot(xs, _column(report.rows, report.columns, "truth"), "-", label="original")
    ax.plot(xs, _column(report.rows, report.columns, "reconstructed"), ":", label="reconstructed")
    ax.set_xlabel("x")
    ax.set_ylabel("signal")
    ax.legend(fontsize=8)


def _plot_spectrum(ax, report):
    ax.scatter(
        _column(report.rows, report.columns, "re"),
        _column(report.rows, report.columns, "im"),
        marker="x",
    )
    ax.axvline(0.0, color="k", lw=0.5)
    ax.axvline(1.0, color="k", lw=0.5)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")


_RENDERERS = {
    "bounds-table": _plot_bounds_table,
    "cond-table": _plot_cond_table,
    "eig-vs-N": _plot_eig_vs_n,
    "eig-vs-r": lambda ax, rep: _plot_eig_sweep(ax, rep, "r"),
    "eig-vs-m": lambda ax, rep: _plot_eig_sweep(ax, rep, "m"),
    "recover": _plot_recover,
    "reconstruct": _plot_reconstruct,
    "spectrum": _plot_spectrum,
}


def render(report, path: str) -> str:
    """Write the figure for a report; returns the path written."""
    renderer = _RENDERERS.get(report.kind)
    if renderer is None:
        raise ValueError(f"no renderer for report kind {report.kind!r}")
    fig, ax = plt.subplots(figsize=(7, 5))
    renderer(ax, report)
    ax.set_title(report.kind)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
