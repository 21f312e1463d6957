"""Waypoint-following control for a relay plan."""

from __future__ import annotations

import logging
import math

import numpy as np

from ..errors import PlanError
from ..game import AgentAction, GameState, JointAction, ScenarioParams
from .planner import RelayPlan, plan

logger = logging.getLogger(__name__)


def _wrap_signed(angle: float) -> float:
    return (angle + math.pi) % (2.0 * math.pi) - math.pi


def _step_towards(position: np.ndarray, target: np.ndarray, stop: float, sigma_p: float) -> tuple[np.ndarray, float]:
    """Displacement towards target that halts at distance ``stop``; also returns distance left afterwards."""
    gap = target - position
    distance = float(np.linalg.norm(gap))
    remaining = distance - stop
    if remaining <= 0.0 or distance == 0.0:
        return np.zeros(2), 0.0
    length = min(sigma_p, remaining)
    return gap / distance * length, remaining - length


def _steer(
    orientation: float,
    anchor: np.ndarray,
    aim: np.ndarray,
    steps_left: int,
    sigma_phi: float,
) -> float:
    """Deferred greedy rotation towards the bearing from anchor to aim."""
    gap = aim - anchor
    if float(np.hypot(gap[0], gap[1])) == 0.0:
        return 0.0
    offset = _wrap_signed(math.atan2(gap[1], gap[0]) - orientation)
    if offset == 0.0:
        return 0.0
    needed = math.ceil(abs(offset) / sigma_phi)
    if steps_left > needed:
        return 0.0
    return max(-sigma_phi, min(sigma_phi, offset))


def act(state: GameState, relay_plan: RelayPlan | None, params: ScenarioParams) -> JointAction:
    """
    Joint action of the baseline in the current state.

    Only the most advanced carrier on the chain moves on; agents before it
    are done and hold still. Chain agents that have not received the
    message head to their relay point and wait there. The carrier heads to
    its successor's relay point (p_r for the last agent) and halts within
    handover range, or keeps going all the way in jammed scenes. Passive
    agents never move.

    Raises:
        PlanError: If no plan is given.
    """
    if relay_plan is None:
        raise PlanError("Baseline act() called without a plan", code="BASE_NO_PLAN")

    actions = [AgentAction.zero() for _ in range(state.K)]
    carriers = [agent for agent in relay_plan.chain if state.carrying[agent]]
    lead = max((relay_plan.chain.index(a) for a in carriers), default=-1)
    reach = 0.0 if params.jammed else relay_plan.handover_range

    for position, agent in enumerate(relay_plan.chain):
        if position < lead:
            continue
        p = state.positions[agent]
        aim = relay_plan.next_target(agent)
        if state.carrying[agent]:
            dp, left = _step_towards(p, aim, reach, params.sigma_p)
            anchor = p
        else:
            relay = relay_plan.waypoints[agent].relay
            goal = np.zeros(2) if params.jammed and agent == relay_plan.retriever else relay
            dp, left = _step_towards(p, goal, 0.0, params.sigma_p)
            left += max(0.0, float(np.linalg.norm(aim - goal)) - reach)
            anchor = goal

        dphi = 0.0
        if params.directional:
            steps_left = math.ceil(round(left / params.sigma_p, 9))
            dphi = _steer(float(state.orientations[agent]), anchor, aim, steps_left, params.sigma_phi)
        actions[agent] = AgentAction((float(dp[0]), float(dp[1])), dphi)

    return JointAction(actions)


class BaselineController:
    """Plans once on the first state of an episode and follows the plan."""

    def __init__(self, params: ScenarioParams):
        self.params = params
        self.plan: RelayPlan | None = None

    def reset(self, initial: GameState) -> RelayPlan:
        self.plan = plan(initial, self.params)
        return self.plan

    def __call__(self, state: GameState, t: int) -> JointAction:
        if self.plan is None:
            self.reset(state)
        return act(state, self.plan, self.params)
