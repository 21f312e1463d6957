"""Relay graph construction and deterministic shortest relay paths."""

from __future__ import annotations

import heapq
import logging
import math
from collections.abc import Hashable, Sequence

import networkx as nx
import numpy as np

from .geometry import CandidateFrame

logger = logging.getLogger(__name__)

SENDER = "t"
RECEIVER = "r"

Node = Hashable


def node_rank(node: Node, agents: int) -> int:
    """Tie-break rank: agents by index, then the sender node, then the receiver."""
    if node == SENDER:
        return agents
    if node == RECEIVER:
        return agents + 1
    return int(node)


def build_graph(frame: CandidateFrame, relay_points: dict[int, np.ndarray] | None = None) -> nx.DiGraph:
    """
    Weighted relay graph of one candidate frame.

    Edge families:
        (k, t)  |phat_k - p_k|                    retriever travels to its retrieval point
        (t, r)  |p_r - phat_k|                    retriever carries all the way
        (t, i)  max(0, |phat_i - phat_k| - r)     retriever carries to relay i
        (i, r)  max(0, |p_r - phat_i| - r)        relay i carries to the receiver
        (i, l)  max(0, |phat_l - phat_i| - r)     relay i carries to relay l
    """
    points = frame.relay_points if relay_points is None else relay_points
    r = frame.r_cover
    k = frame.retriever
    retrieval = points[k]
    relays = [i for i in frame.order if i != k]

    graph = nx.DiGraph(agents=frame.positions.shape[0])
    graph.add_node(k)
    graph.add_edge(k, SENDER, weight=frame.travel)
    graph.add_edge(SENDER, RECEIVER, weight=float(np.linalg.norm(frame.receiver - retrieval)))
    for i in relays:
        graph.add_edge(SENDER, i, weight=max(0.0, float(np.linalg.norm(points[i] - retrieval)) - r))
        graph.add_edge(i, RECEIVER, weight=max(0.0, float(np.linalg.norm(frame.receiver - points[i])) - r))
    for i in relays:
        for l in relays:
            if i != l:
                graph.add_edge(i, l, weight=max(0.0, float(np.linalg.norm(points[l] - points[i])) - r))
    return graph


def shortest_relay(graph: nx.DiGraph, source: Node, target: Node = RECEIVER) -> tuple[list[Node], float]:
    """
    Dijkstra from the retriever to the receiver node.

    Among paths of equal cost the one with the lexicographically smallest
    node-rank sequence wins, so the result does not depend on insertion
    order of the graph.

    Returns:
        Tuple of (node path, total weight).
    """
    agents = int(graph.graph.get("agents", sum(1 for n in graph if n not in (SENDER, RECEIVER))))
    rank = {node: node_rank(node, agents) for node in graph}

    frontier: list[tuple[float, tuple[int, ...], Node, tuple[Node, ...]]] = []
    heapq.heappush(frontier, (0.0, (rank[source],), source, (source,)))
    settled: set[Node] = set()

    while frontier:
        dist, key, node, path = heapq.heappop(frontier)
        if node in settled:
            continue
        settled.add(node)
        if node == target:
            return list(path), dist
        for _, succ, weight in graph.out_edges(node, data="weight"):
            if succ in settled:
                continue
            heapq.heappush(frontier, (dist + weight, key + (rank[succ],), succ, path + (succ,)))

    return [], math.inf


def path_cost(graph: nx.DiGraph, path: Sequence[Node]) -> float:
    """Sum of edge weights along a node path, accumulated from the source."""
    total = 0.0
    for u, v in zip(path, path[1:]):
        total += graph[u][v]["weight"]
    return total


def chain_of(path: Sequence[Node]) -> list[int]:
    """Agents on a relay path, in carry order."""
    return [int(node) for node in path if node not in (SENDER, RECEIVER)]
