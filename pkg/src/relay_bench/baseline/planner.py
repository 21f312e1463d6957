"""Open-loop relay planning from the initial state."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..game import GameState, ScenarioParams
from .geometry import CandidateFrame, candidate_frame, handover_range
from .graph import build_graph, chain_of, shortest_relay
from .repulsion import repulse

logger = logging.getLogger(__name__)

# Second pass is accepted when it does not increase the carry distance beyond this
SECOND_PASS_TOL = 1e-12


def handover_point(start: np.ndarray, goal: np.ndarray, reach: float) -> np.ndarray:
    """Point on [start, goal] at distance ``reach`` from goal (start itself when already in reach)."""
    gap = goal - start
    distance = float(np.linalg.norm(gap))
    if distance <= reach:
        return np.array(start, dtype=float)
    return goal - reach * gap / distance


@dataclass(frozen=True)
class Waypoints:
    """Relay point and handover point of one chain agent."""

    relay: np.ndarray
    handover: np.ndarray


@dataclass(frozen=True)
class RelayPlan:
    """
    The baseline's plan for one episode.

    Attributes:
        retriever: Index k* of the retrieving agent.
        chain: Agents carrying the message, in order; starts with k*.
        waypoints: Relay and handover point of every chain agent.
        passive: Agents outside the chain.
        total_carry_distance: D of the final relay path.
        handover_range: Reach of agent-transmitted links used for planning.
        receiver: p_r.
    """

    retriever: int
    chain: tuple[int, ...]
    waypoints: dict[int, Waypoints]
    passive: tuple[int, ...]
    total_carry_distance: float
    handover_range: float
    receiver: np.ndarray
    passes: dict[str, float] = field(default_factory=dict)

    def successor(self, agent: int) -> int | None:
        position = self.chain.index(agent)
        return self.chain[position + 1] if position + 1 < len(self.chain) else None

    def next_target(self, agent: int) -> np.ndarray:
        """Relay point of the successor, or p_r for the last chain agent."""
        succ = self.successor(agent)
        return self.receiver if succ is None else self.waypoints[succ].relay

    def to_dict(self) -> dict[str, Any]:
        return {
            "retriever": self.retriever,
            "chain": list(self.chain),
            "passive": list(self.passive),
            "waypoints": {
                str(agent): {"relay": wp.relay.tolist(), "handover": wp.handover.tolist()}
                for agent, wp in self.waypoints.items()
            },
            "total_carry_distance": self.total_carry_distance,
            "handover_range": self.handover_range,
            "passes": dict(self.passes),
        }


def _best_retriever(state: GameState, params: ScenarioParams) -> tuple[CandidateFrame, list, float]:
    best: tuple[CandidateFrame, list, float] | None = None
    for k in range(state.K):
        frame = candidate_frame(state.positions, k, state.receiver, params)
        path, cost = shortest_relay(build_graph(frame), k)
        logger.debug("Retriever %d: D=%.6f path=%s", k, cost, path)
        if best is None or cost < best[2]:
            best = (frame, path, cost)
    assert best is not None
    return best


def plan(state: GameState, params: ScenarioParams) -> RelayPlan:
    """
    Plan the relay chain for an initial state.

    Every agent is tried as retriever and the cheapest relay path wins
    (lowest index on ties). Agents off that path are dropped and the frame
    is rebuilt with compacted chain indices; the rebuilt path is kept if it
    is no longer. Clustered relay points are then spread out and the path
    is recomputed one last time.
    """
    r_h = handover_range(params)
    frame, path, first_cost = _best_retriever(state, params)
    k_star = frame.retriever
    passes = {"first": first_cost}

    chain = chain_of(path)
    pruned = candidate_frame(state.positions, k_star, state.receiver, params, members=chain)
    pruned_path, pruned_cost = shortest_relay(build_graph(pruned), k_star)
    passes["pruned"] = pruned_cost
    if pruned_cost <= first_cost + SECOND_PASS_TOL:
        frame, path, cost = pruned, pruned_path, pruned_cost
    else:
        cost = first_cost
    chain = chain_of(path)

    adjusted = repulse(frame, chain, params.r_com)
    points = dict(frame.relay_points)
    points.update(adjusted)
    final_path, final_cost = shortest_relay(build_graph(frame, points), k_star)
    passes["repulsed"] = final_cost
    chain = chain_of(final_path)

    waypoints: dict[int, Waypoints] = {}
    receiver = state.receiver
    for position, agent in enumerate(chain):
        relay = np.array(points[agent], dtype=float)
        goal = receiver if position + 1 == len(chain) else points[chain[position + 1]]
        waypoints[agent] = Waypoints(relay=relay, handover=handover_point(relay, goal, r_h))

    passive = tuple(a for a in range(state.K) if a not in chain)
    logger.debug("Plan: k*=%d chain=%s D=%.6f (before repulsion %.6f)", k_star, chain, final_cost, cost)
    return RelayPlan(
        retriever=k_star,
        chain=tuple(chain),
        waypoints=waypoints,
        passive=passive,
        total_carry_distance=final_cost,
        handover_range=r_h,
        receiver=receiver,
        passes=passes,
    )
