"""Evaluation - seeded rollouts, metrics, aggregation, reference checks and paired comparison."""

from .metrics import AGGREGATE_COLUMNS, MetricsRow, MetricsTable, aggregate, aggregate_frame, lower_median
from .records import (
    FAILURE_PROTOCOL,
    RESULT_COLUMNS,
    EpisodeRecord,
    read_results,
    records_to_frame,
    write_results,
)
from .reference import (
    BASELINE_REFERENCE,
    BUDGET_FIT_GRID,
    DIRECTIONAL_HANDOVER_RANGE,
    JAMMED_CONTINUE_PAST,
    REPULSION_STEP_RULE,
    ReferenceCheck,
    attribute,
    check_reference,
)
from .report import CellReport, EvaluationReport
from .runner import compare, evaluate, run_episode
from .seeds import episode_seed, splitmix64
from .trajectory import read_trajectory, step_states, write_trajectory

__all__ = [
    # Records
    "EpisodeRecord",
    "RESULT_COLUMNS",
    "FAILURE_PROTOCOL",
    "records_to_frame",
    "write_results",
    "read_results",
    # Metrics
    "AGGREGATE_COLUMNS",
    "MetricsRow",
    "MetricsTable",
    "aggregate",
    "aggregate_frame",
    "lower_median",
    # Reference
    "BASELINE_REFERENCE",
    "BUDGET_FIT_GRID",
    "REPULSION_STEP_RULE",
    "DIRECTIONAL_HANDOVER_RANGE",
    "JAMMED_CONTINUE_PAST",
    "ReferenceCheck",
    "attribute",
    "check_reference",
    # Reports
    "CellReport",
    "EvaluationReport",
    # Runner
    "run_episode",
    "evaluate",
    "compare",
    # Seeds
    "episode_seed",
    "splitmix64",
    # Trajectories
    "write_trajectory",
    "read_trajectory",
    "step_states",
]
