"""On-disk budget tables, keyed by agent count and parameter fingerprint."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

from ..errors import CalibrationError, CalibrationMissingError, StaleBudgetError
from ..game import ScenarioParams
from .budget import BudgetTable
from .config import DEFAULT_GRID_POINTS

logger = logging.getLogger(__name__)

TABLE_FORMAT = "budget-table@v1"


def table_path(directory: str | Path, agents: int) -> Path:
    return Path(directory) / f"budget_K{agents}.json"


def table_to_dict(table: BudgetTable) -> dict[str, Any]:
    """Serializable form; floats keep their shortest round-trip repr."""
    grid = [r for r, _ in table.samples]
    return {
        "format": TABLE_FORMAT,
        "K": table.K,
        "params_hash": table.params_hash,
        "grid": {"points": len(grid), "r_min": grid[0], "r_max": grid[-1]},
        "coefficients": list(table.coefficients),
        "samples": [[r, b] for r, b in table.samples],
    }


def table_from_dict(data: dict[str, Any], path: str | None = None) -> BudgetTable:
    """
    Rebuild a table from its serialized form.

    Raises:
        CalibrationError: On an unknown format or malformed content.
    """
    if data.get("format") != TABLE_FORMAT:
        raise CalibrationError(
            f"Unsupported budget table format: {data.get('format')} (expected {TABLE_FORMAT})",
            code="CAL_FORMAT",
            path=path,
        )
    try:
        coefficients = tuple(float(q) for q in data["coefficients"])
        samples = tuple((float(r), float(b)) for r, b in data["samples"])
        agents = int(data["K"])
    except (KeyError, TypeError, ValueError) as e:
        raise CalibrationError(f"Malformed budget table: {e}", code="CAL_FORMAT", path=path)
    if len(coefficients) != 3:
        raise CalibrationError("Budget table needs exactly 3 coefficients", code="CAL_FORMAT", path=path)
    return BudgetTable(
        K=agents,
        coefficients=coefficients,  # type: ignore[arg-type]
        samples=samples,
        params_hash=str(data.get("params_hash", "")),
    )


def save_table(table: BudgetTable, directory: str | Path) -> Path:
    """Write a table to ``directory/budget_K{K}.json``."""
    path = table_path(directory, table.K)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(table_to_dict(table), f, indent=2, allow_nan=False)
        f.write("\n")
    logger.info("Wrote budget table %s", path)
    return path


def read_table(path: str | Path) -> BudgetTable:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise CalibrationError(f"Invalid JSON in budget table: {e}", code="CAL_FORMAT", path=str(path))
    return table_from_dict(data, path=str(path))


def load_table(
    directory: str | Path,
    agents: int,
    params: ScenarioParams,
    grid_points: int = DEFAULT_GRID_POINTS,
) -> BudgetTable:
    """
    Load the table for K agents and check it matches the parameters.

    Raises:
        CalibrationMissingError: If no table exists for K.
        StaleBudgetError: If the stored fingerprint differs from the expected one.
    """
    path = table_path(directory, agents)
    if not path.exists():
        raise CalibrationMissingError(agents, str(path))
    table = read_table(path)
    expected = params.budget_fingerprint(grid_points)
    if table.params_hash != expected:
        raise StaleBudgetError(agents, expected, table.params_hash, str(path))
    return table


def is_current(directory: str | Path, agents: int, params: ScenarioParams, grid_points: int) -> bool:
    """True if a table exists for K and its fingerprint matches."""
    try:
        load_table(directory, agents, params, grid_points)
    except CalibrationError:
        return False
    return True
