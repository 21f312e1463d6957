"""Agent and joint actions, with strict and lenient bounds handling."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from ..errors import ActionBoundsError, DomainError
from .config import ScenarioParams

logger = logging.getLogger(__name__)

# Relative slack on the bound checks
BOUND_RTOL = 1e-9


@dataclass(frozen=True)
class AgentAction:
    """
    One agent's action (dp, dphi).

    Attributes:
        dp: Positional displacement (dx, dy).
        dphi: Orientation displacement in radians.
    """

    dp: tuple[float, float] = (0.0, 0.0)
    dphi: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "dp", (float(self.dp[0]), float(self.dp[1])))
        object.__setattr__(self, "dphi", float(self.dphi))

    @property
    def norm(self) -> float:
        return math.hypot(self.dp[0], self.dp[1])

    @classmethod
    def zero(cls) -> AgentAction:
        return cls()

    def to_dict(self) -> dict[str, object]:
        return {"dp": list(self.dp), "dphi": self.dphi}


@dataclass(frozen=True)
class JointAction:
    """The K agent actions of one time step."""

    actions: tuple[AgentAction, ...]

    def __init__(self, actions: Iterable[AgentAction]):
        object.__setattr__(self, "actions", tuple(actions))

    def __len__(self) -> int:
        return len(self.actions)

    def __getitem__(self, index: int) -> AgentAction:
        return self.actions[index]

    def __iter__(self):
        return iter(self.actions)

    @classmethod
    def zeros(cls, agents: int) -> JointAction:
        return cls(AgentAction.zero() for _ in range(agents))

    @classmethod
    def from_arrays(cls, dp: np.ndarray, dphi: Sequence[float]) -> JointAction:
        """Build from a (K, 2) displacement array and K rotations."""
        dp = np.asarray(dp, dtype=float).reshape(-1, 2)
        return cls(AgentAction((row[0], row[1]), angle) for row, angle in zip(dp, dphi, strict=True))

    def displacements(self) -> np.ndarray:
        return np.array([a.dp for a in self.actions], dtype=float).reshape(-1, 2)

    def rotations(self) -> np.ndarray:
        return np.array([a.dphi for a in self.actions], dtype=float)

    def to_dict(self) -> list[dict[str, object]]:
        return [a.to_dict() for a in self.actions]


def _check_length(joint: JointAction, agents: int) -> None:
    if len(joint) != agents:
        raise DomainError(
            f"Joint action has {len(joint)} entries, expected {agents}",
            code="GAME_ACTION_COUNT",
        )


def check_joint_action(joint: JointAction, agents: int, params: ScenarioParams) -> None:
    """
    Validate every action against the action space.

    Raises:
        DomainError: If the joint action has the wrong length.
        ActionBoundsError: On the first agent whose action is out of bounds.
    """
    _check_length(joint, agents)
    max_step = params.sigma_p * (1.0 + BOUND_RTOL)
    max_turn = params.sigma_phi * (1.0 + BOUND_RTOL)
    for index, action in enumerate(joint):
        if not (math.isfinite(action.dp[0]) and math.isfinite(action.dp[1]) and math.isfinite(action.dphi)):
            raise ActionBoundsError(f"Agent {index} action is not finite", agent=index)
        if action.norm > max_step:
            raise ActionBoundsError(
                f"Agent {index} displacement {action.norm:.6g} exceeds sigma_p={params.sigma_p}",
                agent=index,
            )
        if abs(action.dphi) > max_turn:
            raise ActionBoundsError(
                f"Agent {index} rotation {action.dphi:.6g} exceeds sigma_phi={params.sigma_phi:.6g}",
                agent=index,
            )


def clip_action(action: AgentAction, params: ScenarioParams) -> tuple[AgentAction, bool]:
    """
    Project one action onto the action space.

    Non-finite components are replaced by zero.

    Returns:
        Tuple of (clipped action, whether anything changed).
    """
    dx, dy = action.dp
    dphi = action.dphi
    changed = False
    if not (math.isfinite(dx) and math.isfinite(dy)):
        dx, dy, changed = 0.0, 0.0, True
    if not math.isfinite(dphi):
        dphi, changed = 0.0, True

    norm = math.hypot(dx, dy)
    if norm > params.sigma_p:
        scale = params.sigma_p / norm
        dx, dy, changed = dx * scale, dy * scale, True
    if abs(dphi) > params.sigma_phi:
        dphi, changed = math.copysign(params.sigma_phi, dphi), True

    if not changed:
        return action, False
    return AgentAction((dx, dy), dphi), True


def clip_joint_action(joint: JointAction, agents: int, params: ScenarioParams) -> tuple[JointAction, int]:
    """
    Lenient counterpart of check_joint_action.

    Returns:
        Tuple of (clipped joint action, number of agents whose action was clipped).
    """
    _check_length(joint, agents)
    clipped = []
    count = 0
    for action in joint:
        fixed, changed = clip_action(action, params)
        clipped.append(fixed)
        count += int(changed)
    if count:
        logger.debug("Clipped %d of %d agent actions", count, agents)
    return JointAction(clipped), count
