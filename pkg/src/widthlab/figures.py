"""Matplotlib renderings of core graphs and member graphs."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Circle, FancyArrowPatch  # noqa: E402

from .core_graph import CoreGraph


def _ring(n: int, radius: float = 1.0) -> list[tuple[float, float]]:
    if n == 1:
        return [(0.0, 0.0)]
    return [(radius * math.cos(math.pi / 2 - 2 * math.pi * i / n),
             radius * math.sin(math.pi / 2 - 2 * math.pi * i / n)) for i in range(n)]


def save_core_figure(graph: CoreGraph, path: str, title: str | None = None) -> None:
    pos = _ring(graph.n_vertices)
    fig, ax = plt.subplots(figsize=(5, 5))
    loops_at = {v: 0 for v in range(graph.n_vertices)}
    seen_pairs: dict[tuple[int, int], int] = {}
    for u, i, v in graph.edges:
        if u == v:
            k = loops_at[u]
            loops_at[u] += 1
            x, y = pos[u]
            angle = math.pi / 2 + k * 2 * math.pi / 3
            cx, cy = x + 0.28 * math.cos(angle), y + 0.28 * math.sin(angle)
            ax.add_patch(Circle((cx, cy), 0.17, fill=False, color="tab:blue"))
            ax.text(cx, cy + 0.24, f"x{i}", ha="center", va="center", fontsize=9)
        else:
            key = (min(u, v), max(u, v))
            bend = 0.15 * seen_pairs.get(key, 0)
            seen_pairs[key] = seen_pairs.get(key, 0) + 1
            arrow = FancyArrowPatch(pos[u], pos[v], arrowstyle="-|>", mutation_scale=12,
                                    color="tab:blue", shrinkA=10, shrinkB=10,
                                    connectionstyle=f"arc3,rad={0.15 + bend}")
            ax.add_patch(arrow)
            mx = (pos[u][0] + pos[v][0]) / 2 + (0.18 + bend) * (pos[v][1] - pos[u][1])
            my = (pos[u][1] + pos[v][1]) / 2 - (0.18 + bend) * (pos[v][0] - pos[u][0])
            ax.text(mx, my, f"x{i}", ha="center", va="center", fontsize=9)
    for v, (x, y) in enumerate(pos):
        ax.add_patch(Circle((x, y), 0.09, color="white", ec="black", zorder=3))
        if v == graph.base:
            ax.add_patch(Circle((x, y), 0.12, fill=False, ec="black", zorder=3))
        ax.text(x, y, str(v), ha="center", va="center", fontsize=8, zorder=4)
    if title:
        ax.set_title(title)
    ax.set_xlim(-1.7, 1.7)
    ax.set_ylim(-1.7, 1.7)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def save_member_figure(labels: list[str], edges: set[tuple[int, int]], path: str,
                       title: str | None = None, highlight: list[int] | None = None) -> None:
    n = len(labels)
    pos = _ring(max(n, 1), radius=1.2)
    fig, ax = plt.subplots(figsize=(5, 5))
    picked = set(highlight or ())
    for i, j in sorted(edges):
        color = "tab:red" if i in picked and j in picked else "0.6"
        ax.plot([pos[i][0], pos[j][0]], [pos[i][1], pos[j][1]], color=color,
                lw=2.0 if color == "tab:red" else 1.2, zorder=1)
    for v in range(n):
        x, y = pos[v]
        color = "tab:red" if v in picked else "tab:blue"
        ax.add_patch(Circle((x, y), 0.10, color=color, zorder=2))
        ax.text(1.22 * x, 1.22 * y + 0.08, labels[v], ha="center", va="center", fontsize=9)
    if title:
        ax.set_title(title)
    ax.set_xlim(-1.9, 1.9)
    ax.set_ylim(-1.9, 1.9)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
