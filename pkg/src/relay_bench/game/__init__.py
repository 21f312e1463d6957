"""The deterministic relay game - scene sampling, transition, propagation and value."""

from .config import (
    SCENARIOS,
    CAPSULE_FACTOR,
    SPAWN_BALL_FACTOR,
    ScenarioName,
    ScenarioParams,
)
from .state import GameState, W_RUNNING, W_DELIVERED, W_ABSORBED
from .actions import (
    AgentAction,
    JointAction,
    check_joint_action,
    clip_action,
    clip_joint_action,
)
from .budget import Budget, ConstantBudget, NO_BUDGET
from .sampling import (
    capsule_distance,
    in_capsule,
    sample_capsule_point,
    sample_initial_state,
)
from .dynamics import (
    ValidationMode,
    communication_matrix,
    message_propagation,
    motion_cost,
    move_jammer,
    propagate_initial,
    reset,
    step,
    wrap_angle,
)
from .value import (
    Controller,
    Rollout,
    Transition,
    discounted_return,
    play,
    rollout_value,
    t_max,
)

__all__ = [
    # Config
    "SCENARIOS",
    "CAPSULE_FACTOR",
    "SPAWN_BALL_FACTOR",
    "ScenarioName",
    "ScenarioParams",
    # State
    "GameState",
    "W_RUNNING",
    "W_DELIVERED",
    "W_ABSORBED",
    # Actions
    "AgentAction",
    "JointAction",
    "check_joint_action",
    "clip_action",
    "clip_joint_action",
    # Budget
    "Budget",
    "ConstantBudget",
    "NO_BUDGET",
    # Sampling
    "capsule_distance",
    "in_capsule",
    "sample_capsule_point",
    "sample_initial_state",
    # Dynamics
    "ValidationMode",
    "communication_matrix",
    "message_propagation",
    "motion_cost",
    "move_jammer",
    "propagate_initial",
    "reset",
    "step",
    "wrap_angle",
    # Value
    "Controller",
    "Rollout",
    "Transition",
    "discounted_return",
    "play",
    "rollout_value",
    "t_max",
]
