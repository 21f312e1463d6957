"""
Figures for budget tables, value distributions, paired comparisons and rollouts.

All figures are rendered off-screen with the ``Agg`` backend and written to
disk; the output format follows the file suffix (``.png``, ``.pdf``, ``.svg``).
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
from matplotlib.patches import Circle, Polygon  # noqa: E402

from ..baseline import handover_range  # noqa: E402
from ..calibration import BudgetTable  # noqa: E402
from ..game import GameState, ScenarioParams  # noqa: E402
from .style import BASE_COLOR, JAMMER_COLOR, RANGE_ALPHA, agent_colors  # noqa: E402

logger = logging.getLogger(__name__)

PAIR_METRICS = {"V": ("V_a", "V_b"), "T_del": ("T_a", "T_b"), "D_tot": ("D_a", "D_b")}


def _save(fig: plt.Figure, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    logger.info("Wrote figure %s", path)
    return path


def plot_budget_curves(
    tables: Mapping[int, BudgetTable],
    params: ScenarioParams,
    path: str | Path,
    *,
    points: int = 200,
) -> Path:
    """
    Draw the fitted terminal budget over [R_min(K), R_max(K)], one curve per K.

    The calibration samples are overlaid as markers.
    """
    fig, ax = plt.subplots(figsize=(6, 4))
    colors = agent_colors(len(tables))
    for color, agents in zip(colors, sorted(tables)):
        table = tables[agents]
        R = np.linspace(params.r_min(agents), params.r_max(agents), points)
        ax.plot(R, [table.terminal(float(r)) for r in R], color=color, label=f"K={agents}")
        ax.plot(table.grid, table.raw, linestyle="none", marker=".", markersize=3, color=color)
    ax.set_xlabel("Base separation R")
    ax.set_ylabel("Terminal budget")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize="small")
    return _save(fig, path)


def plot_value_histograms(
    values: Mapping[int, Sequence[float] | np.ndarray],
    path: str | Path,
    *,
    normalize: bool = False,
    bins: int = 40,
) -> Path:
    """
    Overlay value histograms per agent count.

    Args:
        values: Episode values V keyed by K.
        path: Output image.
        normalize: Divide each distribution by its median.
        bins: Histogram bin count.
    """
    fig, ax = plt.subplots(figsize=(6, 4))
    colors = agent_colors(len(values))
    for color, agents in zip(colors, sorted(values)):
        v = np.asarray(values[agents], dtype=float)
        v = v[np.isfinite(v)]
        if v.size == 0:
            logger.warning("No finite values for K=%d; skipping its histogram", agents)
            continue
        if normalize:
            median = float(np.median(v))
            if median != 0.0:
                v = v / median
        ax.hist(v, bins=bins, histtype="stepfilled", alpha=0.35, color=color, label=f"K={agents}")
    ax.axvline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("V / median(V)" if normalize else "V")
    ax.set_ylabel("Episodes")
    ax.legend(fontsize="small")
    return _save(fig, path)


def plot_paired_scatter(
    paired: pd.DataFrame,
    path: str | Path,
    *,
    metric: str = "V",
    labels: tuple[str, str] = ("a", "b"),
) -> Path:
    """
    Scatter one metric of policy a against policy b with a diagonal reference.

    Pairs with a negative value are left out of the plot only.
    """
    col_a, col_b = PAIR_METRICS[metric]
    a = paired[col_a].to_numpy(dtype=float)
    b = paired[col_b].to_numpy(dtype=float)
    keep = np.isfinite(a) & np.isfinite(b) & (a >= 0) & (b >= 0)
    if (~keep).any():
        logger.info("Leaving %d of %d pair(s) out of the %s scatter", int((~keep).sum()), keep.size, metric)
    a, b = a[keep], b[keep]

    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    ax.scatter(a, b, s=6, alpha=0.5)
    upper = float(max(a.max(initial=0.0), b.max(initial=0.0))) or 1.0
    ax.plot([0.0, upper], [0.0, upper], color="black", linewidth=0.8, linestyle="--")
    ax.set_xlim(0.0, upper * 1.05)
    ax.set_ylim(0.0, upper * 1.05)
    ax.set_aspect("equal")
    ax.set_xlabel(f"{metric} ({labels[0]})")
    ax.set_ylabel(f"{metric} ({labels[1]})")
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def capsule_outline(R: float, radius: float, points: int = 64) -> np.ndarray:
    """Closed boundary of the capsule around the base segment."""
    right = np.linspace(np.pi / 2, -np.pi / 2, points)
    left = np.linspace(-np.pi / 2, -3 * np.pi / 2, points)
    return np.vstack(
        [
            np.column_stack([R + radius * np.cos(right), radius * np.sin(right)]),
            np.column_stack([radius * np.cos(left), radius * np.sin(left)]),
        ]
    )


def plot_trajectory(
    states: Sequence[GameState],
    params: ScenarioParams,
    path: str | Path,
    *,
    header: Mapping[str, Any] | None = None,
) -> Path:
    """
    Draw a rollout: bases, jammer capsule and path, agent paths and ranges.

    Communication ranges are shaded around the bases and the agents' final
    positions. A marker sits where each agent first carries the message.
    """
    if not states:
        raise ValueError("Trajectory has no states")
    first, last = states[0], states[-1]
    K = first.K
    track = np.stack([s.positions for s in states])  # (T, K, 2)
    carrying = np.stack([s.carrying for s in states])
    reach = handover_range(params)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    if params.jammed:
        ax.add_patch(
            Polygon(capsule_outline(first.R, params.capsule_radius), closed=True, fill=False, linestyle=":", color=JAMMER_COLOR)
        )
        jammer = np.stack([s.jammer for s in states])
        ax.plot(jammer[:, 0], jammer[:, 1], color=JAMMER_COLOR, linewidth=1.0, label="jammer")
        ax.plot(*jammer[-1], marker="x", color=JAMMER_COLOR)

    for base, name in ((first.sender, "p_t"), (first.receiver, "p_r")):
        ax.add_patch(Circle(tuple(base), params.r_com, color=BASE_COLOR, alpha=RANGE_ALPHA, linewidth=0))
        ax.plot(*base, marker="s", color=BASE_COLOR)
        ax.annotate(name, tuple(base), textcoords="offset points", xytext=(4, 4), fontsize="small")

    for color, k in zip(agent_colors(K), range(K)):
        ax.plot(track[:, k, 0], track[:, k, 1], color=color, linewidth=1.2, label=f"agent {k}")
        ax.plot(*track[0, k], marker="o", markersize=4, color=color)
        ax.add_patch(Circle(tuple(last.positions[k]), reach, color=color, alpha=RANGE_ALPHA, linewidth=0))
        received = np.flatnonzero(carrying[:, k])
        if received.size:
            ax.plot(*track[received[0], k], marker="*", markersize=9, color=color)

    title = f"{params.scenario}, K={K}, R={first.R:.2f}"
    if header is not None and header.get("T_del") is not None:
        title += f", T_del={header['T_del']}"
    ax.set_title(title)
    ax.set_aspect("equal")
    ax.autoscale_view()
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize="x-small", loc="upper right")
    return _save(fig, path)
