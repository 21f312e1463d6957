"""Calibration stage API."""

from __future__ import annotations

import logging
from collections.abc import Iterable
from pathlib import Path

from ..errors import CalibrationError
from ..game import ScenarioParams
from .config import CalibrationConfig
from .budget import fit_budget
from .report import CalibrationReport, TableReport
from .store import is_current, read_table, save_table, table_path

logger = logging.getLogger(__name__)


def calibrate(
    agent_counts: Iterable[int],
    params: ScenarioParams,
    directory: str | Path,
    config: CalibrationConfig | None = None,
) -> CalibrationReport:
    """
    Ensure an up-to-date budget table exists for every agent count.

    Tables whose fingerprint already matches are skipped unless
    ``config.force`` is set. The same tables serve all four scenario cells.

    Raises:
        CalibrationError: If a dimensioning rollout fails to deliver.
    """
    config = config or CalibrationConfig()
    cell = params.calibration_params()
    report = CalibrationReport(
        grid_points=config.grid_points,
        params_hash=cell.budget_fingerprint(config.grid_points),
    )

    for agents in agent_counts:
        item = TableReport(K=agents, path=str(table_path(directory, agents)))
        report.tables.append(item)
        if not config.force and is_current(directory, agents, cell, config.grid_points):
            table = read_table(table_path(directory, agents))
            item.status = "skipped"
            logger.info("Budget table for K=%d is current; skipping", agents)
        else:
            try:
                table = fit_budget(agents, cell, config.grid_points, config.workers)
            except CalibrationError as e:
                item.status = "failed"
                item.error_message = str(e)
                raise
            save_table(table, directory)
            item.status = "written"
        item.max_abs_residual = table.max_abs_residual()
        item.max_relative_error = table.max_relative_error()

    return report
