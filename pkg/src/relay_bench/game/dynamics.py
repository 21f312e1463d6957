"""State transition: motion, message propagation, jammer dynamics and reward."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from typing import Literal

import numpy as np

from ..comms import ISOTROPIC, link_sinr_matrix, meets_threshold
from ..errors import DomainError
from .actions import JointAction, check_joint_action, clip_joint_action
from .budget import Budget
from .config import ScenarioParams
from .sampling import in_capsule, sample_initial_state
from .state import W_ABSORBED, W_DELIVERED, W_RUNNING, GameState

logger = logging.getLogger(__name__)

ValidationMode = Literal["strict", "lenient"]

TWO_PI = 2.0 * math.pi


def wrap_angle(values: np.ndarray) -> np.ndarray:
    """Map angles into [0, 2*pi)."""
    wrapped = np.mod(values, TWO_PI)
    return np.where(wrapped >= TWO_PI, 0.0, wrapped)


def communication_matrix(state: GameState, params: ScenarioParams) -> np.ndarray:
    """
    Boolean contact matrix of a scene.

    Row 0 is the sender base, rows 1..K the agents. Columns 0..K-1 are the
    agents and column K is the receiver base.
    """
    K = state.K
    tx_positions = np.vstack((state.sender[None, :], state.positions))
    tx_orientations = np.concatenate(([0.0], state.orientations))
    tx_antennas = [ISOTROPIC] + [params.agent_antenna] * K
    rx_positions = np.vstack((state.positions, state.receiver[None, :]))
    jammer = state.jammer if params.jammed else None
    values, _ = link_sinr_matrix(
        tx_positions, tx_orientations, tx_antennas, rx_positions, jammer=jammer, c_jam=params.c_jam
    )
    return np.asarray(meets_threshold(values, params.sinr_threshold), dtype=bool)


def message_propagation(
    state: GameState,
    params: ScenarioParams,
    order: Sequence[int] | None = None,
) -> tuple[np.ndarray, bool]:
    """
    Spread the message to a fixpoint within one step.

    Args:
        state: Post-motion state.
        params: Scenario parameters.
        order: Sweep order over the agents; the result does not depend on it.

    Returns:
        Tuple of (carry flags, delivered).
    """
    K = state.K
    contact = communication_matrix(state, params)
    carrying = state.carrying.copy()
    sweep = list(range(K)) if order is None else list(order)
    if sorted(sweep) != list(range(K)):
        raise DomainError(f"Sweep order must permute 0..{K - 1}", code="GAME_SWEEP_ORDER")

    passes = 0
    changed = True
    while changed:
        changed = False
        passes += 1
        for k in sweep:
            if carrying[k]:
                continue
            if contact[0, k] or bool(np.any(contact[1:, k] & carrying)):
                carrying[k] = True
                changed = True

    delivered = bool(contact[0, K] or np.any(contact[1:, K] & carrying))
    logger.debug("Propagation settled after %d pass(es); delivered=%s", passes, delivered)
    return carrying, delivered


def move_jammer(state: GameState, params: ScenarioParams) -> tuple[np.ndarray, np.ndarray]:
    """
    Advance the jammer by dp_j.

    The displacement is negated for the next step when the jammer lands
    outside the capsule.
    """
    if not params.jammed:
        return np.zeros(2), np.zeros(2)
    jammer = state.jammer + state.jammer_step
    jammer_step = np.array(state.jammer_step)
    if not in_capsule(jammer, state.R, params.capsule_radius):
        jammer_step = -jammer_step
    return jammer, jammer_step


def motion_cost(joint: JointAction, params: ScenarioParams) -> float:
    """c_pos * sum |dp|^2 + c_phi * sum dphi^2."""
    dp = joint.displacements()
    dphi = joint.rotations()
    return params.c_pos * float(np.sum(dp * dp)) + params.c_phi * float(np.sum(dphi * dphi))


def step(
    state: GameState,
    joint: JointAction,
    params: ScenarioParams,
    budget: Budget,
    *,
    mode: ValidationMode = "strict",
) -> tuple[GameState, float]:
    """
    One transition of the game.

    At w = 1 the terminal budget is paid and the state becomes absorbing;
    at w = 2 nothing changes and the reward is 0. In both cases the joint
    action is ignored.

    Raises:
        ActionBoundsError: Out-of-bounds action in strict mode.
    """
    if state.w == W_ABSORBED:
        return state, 0.0
    if state.w == W_DELIVERED:
        return state.replace(w=W_ABSORBED), float(budget.terminal(state.R))

    if mode == "strict":
        check_joint_action(joint, state.K, params)
    else:
        joint, _ = clip_joint_action(joint, state.K, params)

    moved = state.replace(
        positions=state.positions + joint.displacements(),
        orientations=wrap_angle(state.orientations + joint.rotations()),
    )
    carrying, delivered = message_propagation(moved, params)
    jammer, jammer_step = move_jammer(state, params)

    next_state = moved.replace(
        carrying=carrying,
        jammer=jammer,
        jammer_step=jammer_step,
        w=W_DELIVERED if delivered else W_RUNNING,
    )
    return next_state, -motion_cost(joint, params)


def reset(params: ScenarioParams, agents: int, rng: np.random.Generator) -> GameState:
    """Sample x_0 and run one propagation pass on it."""
    return propagate_initial(sample_initial_state(params, agents, rng), params)


def propagate_initial(state: GameState, params: ScenarioParams) -> GameState:
    """Propagate on a freshly built state; delivery at t = 0 sets w = 1."""
    carrying, delivered = message_propagation(state, params)
    if delivered:
        logger.debug("Message delivered at t=0 (R=%.3f)", state.R)
    return state.replace(carrying=carrying, w=W_DELIVERED if delivered else W_RUNNING)
