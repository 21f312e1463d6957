"""Shared colors."""

from __future__ import annotations

import matplotlib

BASE_COLOR = "tab:gray"
JAMMER_COLOR = "tab:red"
RANGE_ALPHA = 0.12


def agent_colors(n: int) -> list[tuple[float, float, float, float]]:
    """n distinct colors from the viridis map."""
    cmap = matplotlib.colormaps["viridis"]
    if n <= 1:
        return [cmap(0.3)]
    return [cmap(0.9 * i / (n - 1)) for i in range(n)]
