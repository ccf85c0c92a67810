"""Render policies and partitions as figures next to the delimited report."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib import colormaps

from .chainpart import ChainPartition
from .policy import Policy, iter_bits
from .treepart import TreePartition, edge_weight, node_weight

MAX_PLOT_LABELS = 400


def layered_positions(p: Policy) -> dict[int, tuple[float, float]]:
    """Place each label at (slot within layer, longest chain strictly below)."""
    level = [0] * p.n
    order = sorted(range(p.n), key=lambda x: p.below[x].bit_count())
    for x in order:
        children = list(iter_bits(p.cover_children[x]))
        level[x] = 1 + max((level[c] for c in children), default=-1)
    layers: dict[int, list[int]] = {}
    for x in range(p.n):
        layers.setdefault(level[x], []).append(x)
    pos: dict[int, tuple[float, float]] = {}
    for lvl, members in layers.items():
        members.sort()
        for k, x in enumerate(members):
            pos[x] = (k - (len(members) - 1) / 2.0, float(lvl))
    return pos


def _setup_axes(p: Policy, pos, title: str):
    xs = [xy[0] for xy in pos.values()]
    ys = [xy[1] for xy in pos.values()]
    w = max(4.0, (max(xs) - min(xs) + 2) * 0.8) if xs else 4.0
    h = max(3.0, (max(ys) - min(ys) + 2) * 0.9) if ys else 3.0
    fig, ax = plt.subplots(figsize=(min(w, 16), min(h, 12)))
    ax.set_title(title)
    ax.axis("off")
    return fig, ax


def _draw_nodes(ax, p: Policy, pos, labels: dict[int, str] | None = None):
    for x, (px, py) in pos.items():
        text = labels[x] if labels else p.name_of(x)
        ax.annotate(
            text,
            (px, py),
            ha="center",
            va="center",
            fontsize=8,
            bbox=dict(boxstyle="round,pad=0.25", fc="white", ec="black", lw=0.8),
        )


def _draw_edge(ax, pos, parent, child, *, color="0.45", lw=1.0, label=None, zorder=1):
    (x1, y1), (x2, y2) = pos[parent], pos[child]
    ax.plot([x1, x2], [y1, y2], color=color, lw=lw, zorder=zorder)
    if label is not None:
        ax.annotate(
            label,
            ((x1 + x2) / 2, (y1 + y2) / 2),
            fontsize=7,
            color="0.2",
            ha="center",
            va="center",
            bbox=dict(boxstyle="round,pad=0.1", fc="white", ec="none", alpha=0.8),
        )


def render_policy_figure(p: Policy, path: Path) -> Path:
    """Hasse diagram with each edge annotated by its weight."""
    pos = layered_positions(p)
    fig, ax = _setup_axes(p, pos, "policy: covering edges and edge weights")
    for parent, child in p.hasse_edges():
        _draw_edge(ax, pos, parent, child, label=str(edge_weight(p, parent, child)))
    _draw_nodes(ax, p, pos)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_tree_figure(p: Policy, t: TreePartition, path: Path) -> Path:
    """Chosen forest edges highlighted, nodes annotated with their weight."""
    pos = layered_positions(p)
    fig, ax = _setup_axes(p, pos, "minimal tree partition: node weights")
    chosen = {(y, z) for z, y in enumerate(t.parents) if y is not None}
    for parent, child in p.hasse_edges():
        if (parent, child) not in chosen:
            _draw_edge(ax, pos, parent, child, color="0.85")
    for parent, child in chosen:
        _draw_edge(ax, pos, parent, child, color="tab:blue", lw=2.0, zorder=2)
    labels = {x: f"{p.name_of(x)}:{node_weight(p, t, x)}" for x in range(p.n)}
    _draw_nodes(ax, p, pos, labels)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_chain_figure(p: Policy, c: ChainPartition, path: Path) -> Path:
    """Chains drawn in distinct colors over a faint Hasse diagram."""
    pos = layered_positions(p)
    fig, ax = _setup_axes(p, pos, f"minimal chain partition: {c.chain_count()} chains")
    for parent, child in p.hasse_edges():
        _draw_edge(ax, pos, parent, child, color="0.9")
    cmap = colormaps["tab20"]
    for k, chain in enumerate(c.chains):
        color = cmap(k % 20)
        for a, b in zip(chain, chain[1:]):
            _draw_edge(ax, pos, a, b, color=color, lw=2.2, zorder=2)
    _draw_nodes(ax, p, pos)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_analysis_figures(
    p: Policy,
    tree: TreePartition,
    chain: ChainPartition,
    outdir: Path,
    stem: str,
) -> list[Path]:
    """Write the three analysis figures, returning the created paths."""
    if p.n > MAX_PLOT_LABELS:
        raise ValueError(f"refusing to draw {p.n} labels (limit {MAX_PLOT_LABELS})")
    outdir.mkdir(parents=True, exist_ok=True)
    return [
        render_policy_figure(p, outdir / f"{stem}_policy.png"),
        render_tree_figure(p, tree, outdir / f"{stem}_tree.png"),
        render_chain_figure(p, chain, outdir / f"{stem}_chains.png"),
    ]
