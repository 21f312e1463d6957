"""Plotting - budget curves, value histograms, paired scatter and rollout trajectories."""

from .figures import (
    PAIR_METRICS,
    capsule_outline,
    plot_budget_curves,
    plot_paired_scatter,
    plot_trajectory,
    plot_value_histograms,
)

__all__ = [
    "PAIR_METRICS",
    "capsule_outline",
    "plot_budget_curves",
    "plot_value_histograms",
    "plot_paired_scatter",
    "plot_trajectory",
]
