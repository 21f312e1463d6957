"""Calibration report."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any


@dataclass
class TableReport:
    """Outcome for one agent count."""

    K: int
    status: str = "pending"  # "written", "skipped", "failed"
    path: str | None = None
    max_abs_residual: float | None = None
    max_relative_error: float | None = None
    error_message: str | None = None


@dataclass
class CalibrationReport:
    """Complete calibration report."""

    generated_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    grid_points: int = 0
    params_hash: str = ""
    tables: list[TableReport] = field(default_factory=list)

    @property
    def written(self) -> int:
        return sum(1 for t in self.tables if t.status == "written")

    @property
    def skipped(self) -> int:
        return sum(1 for t in self.tables if t.status == "skipped")

    def to_dict(self) -> dict[str, Any]:
        return {
            "generated_at": self.generated_at,
            "grid_points": self.grid_points,
            "params_hash": self.params_hash,
            "summary": {"written": self.written, "skipped": self.skipped},
            "tables": [
                {
                    "K": t.K,
                    "status": t.status,
                    "path": t.path,
                    "max_abs_residual": t.max_abs_residual,
                    "max_relative_error": t.max_relative_error,
                    "error_message": t.error_message,
                }
                for t in self.tables
            ],
        }
