"""Handcrafted baseline - retrieval points, relay graph, repulsion and waypoint control."""

from .geometry import (
    CandidateFrame,
    candidate_frame,
    envelope,
    handover_range,
    lambda_solve,
    retrieval_point,
)
from .graph import (
    RECEIVER,
    SENDER,
    build_graph,
    chain_of,
    node_rank,
    path_cost,
    shortest_relay,
)
from .repulsion import clusters, repulse
from .planner import RelayPlan, Waypoints, handover_point, plan
from .controller import BaselineController, act

__all__ = [
    # Geometry
    "CandidateFrame",
    "candidate_frame",
    "envelope",
    "handover_range",
    "lambda_solve",
    "retrieval_point",
    # Graph
    "RECEIVER",
    "SENDER",
    "build_graph",
    "chain_of",
    "node_rank",
    "path_cost",
    "shortest_relay",
    # Repulsion
    "clusters",
    "repulse",
    # Planner
    "RelayPlan",
    "Waypoints",
    "handover_point",
    "plan",
    # Controller
    "BaselineController",
    "act",
]
