"""relay_bench - a deterministic multi-agent message-relay game and its benchmark harness.

Agents relay a message from a sending base to a receiving base, possibly
with directional antennas and under a roaming jammer. The package provides:

1. Comms - SINR link model with isotropic and directional antennas
2. Game - state, transitions, rewards and seeded initial states
3. Baseline - Dijkstra relay planner with repulsion and its controller
4. Calibration - terminal budget tables fitted from dimensioning rollouts
5. Policy - observation encodings, discrete actions and the external policy protocol
6. Evaluation - seeded rollouts, metrics, reference checks and paired comparison
"""

# Errors
from .errors import (
    RelayBenchError,
    DomainError,
    ActionBoundsError,
    ConfigError,
    PlanError,
    CalibrationError,
    CalibrationMissingError,
    StaleBudgetError,
    ProtocolError,
    ComparisonError,
)

# Game
from .game import GameState, JointAction, AgentAction, ScenarioParams, SCENARIOS, reset, step, play, t_max

# Baseline
from .baseline import BaselineController, RelayPlan, plan

# Calibration
from .calibration import BudgetTable, CalibrationConfig, calibrate, fit_budget, load_table

# Policy
from .policy import BaselinePolicy, ExternalPolicy, PolicySpec, ZeroPolicy, encode

# Evaluation
from .evaluation import EpisodeRecord, MetricsTable, aggregate, compare, evaluate, run_episode

# Run configuration
from .config import RunConfig

__all__ = [
    # Errors
    "RelayBenchError",
    "DomainError",
    "ActionBoundsError",
    "ConfigError",
    "PlanError",
    "CalibrationError",
    "CalibrationMissingError",
    "StaleBudgetError",
    "ProtocolError",
    "ComparisonError",
    # Game
    "GameState",
    "JointAction",
    "AgentAction",
    "ScenarioParams",
    "SCENARIOS",
    "reset",
    "step",
    "play",
    "t_max",
    # Baseline
    "BaselineController",
    "RelayPlan",
    "plan",
    # Calibration
    "BudgetTable",
    "CalibrationConfig",
    "calibrate",
    "fit_budget",
    "load_table",
    # Policy
    "BaselinePolicy",
    "ExternalPolicy",
    "PolicySpec",
    "ZeroPolicy",
    "encode",
    # Evaluation
    "EpisodeRecord",
    "MetricsTable",
    "aggregate",
    "compare",
    "evaluate",
    "run_episode",
    # Config
    "RunConfig",
]
