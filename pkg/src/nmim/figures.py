"""Render the experiment battery's row data to PNG files.

Each function takes the same row dictionaries the CSV writers consume,
so a figure is always drawn from exactly the data that was written out.
All rendering is headless (Agg) and returns the written path.
"""
from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

LN2 = 0.6931471805599453

_STYLE = {
    "figure.figsize": (7.0, 4.6),
    "figure.dpi": 130,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
}

Row = Mapping[str, object]


def _finish(fig: "plt.Figure", path: str | Path) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)
    return out


def _series(rows: Sequence[Row], key_field: str, key: object, x: str, y: str):
    pts = [(r[x], r[y]) for r in rows if r[key_field] == key and r[y] is not None]
    return [p[0] for p in pts], [p[1] for p in pts]


def render_gap_figure(rows: Sequence[Row], path: str | Path) -> Path:
    """Score-vs-rarest-event gap against alphabet size, one line per family."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for source in sorted({r["source"] for r in rows}):
            ns, gaps = _series(rows, "source", source, "n", "gap")
            ax.plot(ns, gaps, marker="o", ms=3.5, label=str(source))
        ax.axhline(LN2, color="gray", ls="--", lw=1, label="ln 2")
        ax.set_xlabel("number of events n")
        ax.set_ylabel("score minus L(p_min) (nats)")
        ax.set_title("Importance gap to the rarest event")
        ax.legend()
        return _finish(fig, path)


def render_allocation_figure(rows: Sequence[Row], model: str, path: str | Path) -> Path:
    """Importance loss against budget K for each allocation scheme."""
    model_rows = [r for r in rows if r["model"] == model and r["importance_loss"] is not None]
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for scheme in sorted({r["scheme"] for r in model_rows}):
            ks, losses = _series(model_rows, "scheme", scheme, "K", "importance_loss")
            ax.plot(ks, losses, marker="o", ms=3.5, label=str(scheme))
        ax.set_xlabel("total budget K (symbols)")
        ax.set_ylabel("log importance loss (nats)")
        ax.set_title(f"Allocation loss, {model} error model")
        ax.legend()
        return _finish(fig, path)


def render_bsc_figure(rows: Sequence[Row], path: str | Path) -> Path:
    """Exact and approximate channel importance change against p."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for field, style in (("exact", "-"), ("fine", "--"), ("coarse", ":")):
            xs = [r["p"] for r in rows if r[field] is not None]
            ys = [r[field] for r in rows if r[field] is not None]
            ax.plot(xs, ys, style, label=field)
        ax.set_xlabel("source parameter p")
        ax.set_ylabel("importance change (nats)")
        eps = rows[0]["epsilon"] if rows else "?"
        ax.set_title(f"Channel importance change, crossover {eps}")
        ax.legend()
        return _finish(fig, path)


def render_distortion_figure(rows: Sequence[Row], path: str | Path) -> Path:
    """Loss-distortion curves, one line per source parameter."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for p in sorted({r["p"] for r in rows}):
            ds, Rs = _series(rows, "p", p, "D", "R")
            ax.plot(ds, Rs, label=f"p = {p}")
        ax.set_xlabel("Hamming distortion D")
        ax.set_ylabel("maximum importance loss (nats)")
        ax.set_title("Loss-distortion curves")
        ax.legend()
        return _finish(fig, path)


def render_plan_figure(rows: Sequence[Row], path: str | Path) -> Path:
    """Best received entropy against the loss allowance, one line per capacity."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for c in sorted({r["C"] for r in rows}):
            deltas, ents = _series(rows, "C", c, "delta", "max_entropy")
            ax.plot(deltas, ents, label=f"C = {c}")
        ax.set_xlabel("loss allowance (nats)")
        ax.set_ylabel("max received entropy (bits)")
        ax.set_title("Maximum transmission under a loss allowance")
        ax.legend()
        return _finish(fig, path)
