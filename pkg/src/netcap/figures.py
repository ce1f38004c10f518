"""Render report figures to files: training curves, decision maps, sweep charts."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from netcap.datasets import _FEATURE_FN, SQUARE, Dataset
from netcap.network import NetworkState, _Compiled

POSITIVE_COLOR = "#2166ac"
NEGATIVE_COLOR = "#b2182b"


def _save(fig: Figure, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    FigureCanvasAgg(fig).print_figure(str(path), dpi=120)
    return path


def training_curves(frames, path) -> Path:
    """Loss curves plus the generalization ratio, with the G = 1 line marked."""
    steps = [f.step for f in frames]
    fig = Figure(figsize=(7, 4))
    ax = fig.add_subplot(111)
    ax.plot(steps, [f.train_loss for f in frames], label="train loss", color="#555555")
    ax.plot(steps, [f.test_loss for f in frames], label="test loss", color="#111111", ls="--")
    ax.set_xlabel("step")
    ax.set_ylabel("loss")
    ax2 = ax.twinx()
    ax2.plot(steps, [f.generalization for f in frames], label="G", color=POSITIVE_COLOR)
    ax2.axhline(1.0, color=NEGATIVE_COLOR, lw=1, ls=":")
    ax2.annotate(
        "G = 1 (memorization boundary)",
        xy=(steps[-1] if steps else 0, 1.0),
        ha="right",
        va="bottom",
        fontsize=8,
        color=NEGATIVE_COLOR,
    )
    ax2.set_ylabel("generalization ratio")
    lines, labels = ax.get_legend_handles_labels()
    lines2, labels2 = ax2.get_legend_handles_labels()
    ax.legend(lines + lines2, labels + labels2, loc="upper right", fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def decision_map(state: NetworkState, dataset: Dataset, path, resolution: int = 120) -> Path:
    """Network output over the canonical square with the data scattered on top."""
    grid = np.linspace(-SQUARE, SQUARE, resolution)
    xx, yy = np.meshgrid(grid, grid)
    cols = [
        np.asarray(_FEATURE_FN[f](xx.ravel(), yy.ravel()), dtype=float)
        for f in state.topology.features
    ]
    x = np.column_stack(cols)
    compiled = _Compiled(state.topology, state.params)
    pred, _, _ = compiled.forward(x)
    fig = Figure(figsize=(5, 4.5))
    ax = fig.add_subplot(111)
    mesh = ax.pcolormesh(
        xx, yy, pred.reshape(xx.shape), cmap="RdBu", vmin=-1.0, vmax=1.0, shading="auto"
    )
    fig.colorbar(mesh, ax=ax, label="prediction")
    pos = [(p.x1, p.x2) for p in dataset.points if p.label == 1]
    neg = [(p.x1, p.x2) for p in dataset.points if p.label == -1]
    if pos:
        ax.scatter(*zip(*pos), s=8, c=POSITIVE_COLOR, edgecolors="white", lw=0.3, label="+1")
    if neg:
        ax.scatter(*zip(*neg), s=8, c=NEGATIVE_COLOR, edgecolors="white", lw=0.3, label="-1")
    ax.set_xlim(-SQUARE, SQUARE)
    ax.set_ylim(-SQUARE, SQUARE)
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def sweep_chart(rows, path) -> Path:
    """Capacity versus generalization for a sweep; the preferred row is starred."""
    fig = Figure(figsize=(6, 4))
    ax = fig.add_subplot(111)
    mecs = [r["mec_bits"] for r in rows]
    gs = [r["generalization"] for r in rows]
    ax.scatter(mecs, gs, c="#444444", s=24)
    for r in rows:
        ax.annotate(r["architecture"], (r["mec_bits"], r["generalization"]), fontsize=7,
                    xytext=(3, 3), textcoords="offset points")
    if rows:
        ax.scatter([rows[0]["mec_bits"]], [rows[0]["generalization"]],
                   marker="*", s=160, c=POSITIVE_COLOR, label="preferred")
        ax.legend(fontsize=8)
    ax.axhline(1.0, color=NEGATIVE_COLOR, lw=1, ls=":")
    ax.set_xlabel("capacity (bits)")
    ax.set_ylabel("generalization ratio")
    fig.tight_layout()
    return _save(fig, path)
