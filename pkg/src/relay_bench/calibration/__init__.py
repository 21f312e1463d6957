"""Budget calibration - dimensioning rollouts, quadratic fit and on-disk tables."""

from .config import CalibrationConfig, DEFAULT_GRID_POINTS
from .budget import (
    BudgetTable,
    DimensioningRun,
    budget_raw,
    dimensioning_rollout,
    dimensioning_state,
    fit_budget,
)
from .store import (
    TABLE_FORMAT,
    is_current,
    load_table,
    read_table,
    save_table,
    table_from_dict,
    table_path,
    table_to_dict,
)
from .report import CalibrationReport, TableReport
from .api import calibrate

__all__ = [
    # Config
    "CalibrationConfig",
    "DEFAULT_GRID_POINTS",
    # Budget
    "BudgetTable",
    "DimensioningRun",
    "budget_raw",
    "dimensioning_rollout",
    "dimensioning_state",
    "fit_budget",
    # Store
    "TABLE_FORMAT",
    "is_current",
    "load_table",
    "read_table",
    "save_table",
    "table_from_dict",
    "table_path",
    "table_to_dict",
    # Report
    "CalibrationReport",
    "TableReport",
    # API
    "calibrate",
]
