"""Spreading clustered relay points along L_k within each agent's motion budget."""

from __future__ import annotations

import logging
from collections.abc import Sequence

import networkx as nx
import numpy as np

from .geometry import CandidateFrame

logger = logging.getLogger(__name__)

# Relay points move in increments of this fraction of r_com
STEP_FRACTION = 0.01
SLACK_EPS = 1e-12


def clusters(points: dict[int, np.ndarray], spacing: float) -> list[tuple[int, ...]]:
    """Connected components of the "closer than spacing" relation, each sorted by agent index."""
    graph = nx.Graph()
    agents = sorted(points)
    graph.add_nodes_from(agents)
    for n, i in enumerate(agents):
        for j in agents[n + 1 :]:
            if float(np.linalg.norm(points[i] - points[j])) < spacing:
                graph.add_edge(i, j)
    return sorted(tuple(sorted(component)) for component in nx.connected_components(graph))


def _targets(coords: Sequence[float], spacing: float, length: float) -> list[float]:
    """Targets spaced ``spacing`` symmetric about the mean, shifted into [0, length]."""
    n = len(coords)
    center = float(np.mean(coords))
    targets = [center + (j - (n - 1) / 2.0) * spacing for j in range(n)]
    if targets[-1] > length:
        shift = length - targets[-1]
        targets = [t + shift for t in targets]
    if targets[0] < 0.0:
        shift = -targets[0]
        targets = [t + shift for t in targets]
    return targets


def _move(
    frame: CandidateFrame,
    points: dict[int, np.ndarray],
    agent: int,
    target: float,
    lower: float,
    upper: float,
    increment: float,
) -> np.ndarray:
    """Walk one relay point along u towards ``target`` while its budget allows."""
    u = frame.direction
    point = points[agent]
    coord = float((point - frame.retrieval) @ u)
    goal = min(max(target, lower), upper)
    while True:
        remaining = goal - coord
        if abs(remaining) <= 0.0:
            return point
        delta = min(increment, abs(remaining))
        candidate = point + np.sign(remaining) * delta * u
        if frame.slack(agent, candidate) < -SLACK_EPS:
            return point
        point = candidate
        coord = goal if delta == abs(remaining) else coord + np.sign(remaining) * delta


def repulse(
    frame: CandidateFrame,
    chain: Sequence[int],
    r_com: float,
    max_rounds: int | None = None,
) -> dict[int, np.ndarray]:
    """
    Spread chain relay points that sit closer than r_com to each other.

    Members of a cluster get targets spaced r_com apart around the cluster
    centroid along L_k. Agents with spare envelope budget walk towards
    their targets in small increments; the retriever and agents without
    budget stay put and cannot be passed. Rounds repeat until the
    clustering stops changing, at most K times.

    Returns:
        Adjusted relay points for every chain agent.
    """
    points = {agent: np.array(frame.relay_points[agent], dtype=float) for agent in chain}
    rounds = len(chain) if max_rounds is None else max_rounds
    increment = STEP_FRACTION * r_com
    length = frame.line_length
    u = frame.direction

    def coord_of(agent: int) -> float:
        return float((points[agent] - frame.retrieval) @ u)

    grouping = clusters(points, r_com)
    for round_no in range(rounds):
        for cluster in grouping:
            if len(cluster) < 2:
                continue
            members = sorted(cluster, key=lambda a: (coord_of(a), a))
            fixed = {
                a for a in members if a == frame.retriever or frame.slack(a, points[a]) <= SLACK_EPS
            }
            if len(fixed) == len(members):
                continue
            targets = _targets([coord_of(a) for a in members], r_com, length)
            for position, agent in enumerate(members):
                if agent in fixed:
                    continue
                lower = max((coord_of(f) for f in members[:position] if f in fixed), default=-np.inf)
                upper = min((coord_of(f) for f in members[position + 1 :] if f in fixed), default=np.inf)
                points[agent] = _move(frame, points, agent, targets[position], lower, upper, increment)

        regrouped = clusters(points, r_com)
        logger.debug("Repulsion round %d: %d cluster(s)", round_no + 1, len(regrouped))
        if regrouped == grouping:
            break
        grouping = regrouped

    return points
