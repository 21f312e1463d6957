"""Horizon, discounted value and the generic rollout loop."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .actions import JointAction, clip_joint_action
from .budget import Budget
from .config import ScenarioParams
from .dynamics import ValidationMode, step
from .state import W_ABSORBED, W_RUNNING, GameState

logger = logging.getLogger(__name__)

# Horizon geometry: spawn ball reach and base approach margin, in units of R_max and r_com
HORIZON_REACH = 1.1
HORIZON_MARGIN = 2.0

Controller = Callable[[GameState, int], JointAction]


def t_max(agents: int, params: ScenarioParams, c_time: float) -> int:
    """ceil(c_time * ((1.1 * R_max + 2 r_com) / sigma_p + K))."""
    steps = c_time * (
        (HORIZON_REACH * params.r_max(agents) + HORIZON_MARGIN * params.r_com) / params.sigma_p + agents
    )
    # Round away representation noise before the ceiling (38.50000000000001 -> 38.5).
    return math.ceil(round(steps, 9))


class Transition(NamedTuple):
    """One (x_t, a_t, r_t) triple."""

    state: GameState
    joint: JointAction
    reward: float


def discounted_return(rewards: Iterable[float], gamma: float) -> float:
    """sum_t gamma^t r_t."""
    value = 0.0
    discount = 1.0
    for reward in rewards:
        value += discount * reward
        discount *= gamma
    return value


def rollout_value(trajectory: Iterable[Transition], gamma: float) -> float:
    """Discounted value of a trajectory that starts at t = 0."""
    return discounted_return((transition.reward for transition in trajectory), gamma)


@dataclass
class Rollout:
    """
    Outcome of one played episode.

    Attributes:
        initial: x_0.
        final: Last state reached.
        value: Discounted value accumulated during play.
        delivered_at: T_del, or None if never delivered within the horizon.
        distance: Total travelled distance sum_t sum_k |dp_k,t|.
        steps: Number of transitions taken (including the terminal one).
        clipped: Agent actions clipped in lenient mode.
        transitions: Stored (x_t, a_t, r_t) triples when recording.
    """

    initial: GameState
    final: GameState
    value: float = 0.0
    delivered_at: int | None = None
    distance: float = 0.0
    steps: int = 0
    clipped: int = 0
    transitions: list[Transition] = field(default_factory=list)

    @property
    def delivered(self) -> bool:
        return self.delivered_at is not None

    def displacements(self) -> list[np.ndarray]:
        return [t.joint.displacements() for t in self.transitions]


def play(
    initial: GameState,
    controller: Controller,
    params: ScenarioParams,
    budget: Budget,
    horizon: int,
    *,
    mode: ValidationMode = "strict",
    record: bool = False,
    on_step: Callable[[int, GameState, JointAction, float, GameState], None] | None = None,
) -> Rollout:
    """
    Step from x_0 until delivery or until the horizon is used up.

    A delivery at t <= horizon is followed by one motion-free step that
    collects the terminal budget, discounted by gamma^T_del.

    Args:
        initial: Propagated initial state x_0.
        controller: Maps (x_t, t) to the joint action a_t.
        params: Scenario parameters.
        budget: Terminal budget.
        horizon: t_max; motion steps are taken for t < horizon.
        mode: Action validation mode.
        record: Keep every transition in the result.
        on_step: Callback receiving (t, x_t, a_t, r_t, x_t+1).
    """
    rollout = Rollout(initial=initial, final=initial)
    state = initial
    discount = 1.0
    t = 0
    if state.w != W_RUNNING:
        rollout.delivered_at = 0

    while state.w != W_ABSORBED:
        if state.w == W_RUNNING:
            if t >= horizon:
                break
            joint = controller(state, t)
            if mode == "lenient":
                joint, clipped = clip_joint_action(joint, state.K, params)
                rollout.clipped += clipped
            rollout.distance += float(np.linalg.norm(joint.displacements(), axis=1).sum())
        else:
            joint = JointAction.zeros(state.K)

        next_state, reward = step(state, joint, params, budget, mode=mode)
        rollout.value += discount * reward
        if record:
            rollout.transitions.append(Transition(state, joint, reward))
        if on_step is not None:
            on_step(t, state, joint, reward, next_state)

        discount *= params.gamma
        t += 1
        if state.w == W_RUNNING and next_state.w != W_RUNNING:
            rollout.delivered_at = t
        state = next_state

    rollout.final = state
    rollout.steps = t
    logger.debug(
        "Rollout ended after %d step(s): delivered_at=%s value=%.6f",
        t,
        rollout.delivered_at,
        rollout.value,
    )
    return rollout
