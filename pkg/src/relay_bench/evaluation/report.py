"""Evaluation report."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any

from .metrics import MetricsRow
from .records import EpisodeRecord
from .reference import ReferenceCheck


@dataclass
class CellReport:
    """Outcome of one (policy, scenario, K) cell."""

    metrics: MetricsRow
    results_path: str | None = None
    clipped: int = 0
    protocol_failures: int = 0
    failure_messages: list[str] = field(default_factory=list)

    @classmethod
    def from_records(cls, metrics: MetricsRow, records: list[EpisodeRecord], results_path: str | None = None) -> CellReport:
        failed = [r for r in records if r.failure is not None]
        return cls(
            metrics=metrics,
            results_path=results_path,
            clipped=sum(r.clipped for r in records),
            protocol_failures=len(failed),
            failure_messages=[f"episode {r.episode_id}: {r.message}" for r in failed[:5]],
        )


@dataclass
class EvaluationReport:
    """Complete evaluation report."""

    generated_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    policy: str = ""
    master_seed: int = 0
    episodes: int = 0
    c_time: float = 0.0
    cells: list[CellReport] = field(default_factory=list)
    reference: list[ReferenceCheck] = field(default_factory=list)

    @property
    def protocol_failures(self) -> int:
        return sum(c.protocol_failures for c in self.cells)

    @property
    def reference_misses(self) -> list[ReferenceCheck]:
        return [c for c in self.reference if not c.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "generated_at": self.generated_at,
            "policy": self.policy,
            "master_seed": self.master_seed,
            "episodes": self.episodes,
            "c_time": self.c_time,
            "summary": {
                "cells": len(self.cells),
                "protocol_failures": self.protocol_failures,
                "clipped": sum(c.clipped for c in self.cells),
                "reference_checks": len(self.reference),
                "reference_misses": len(self.reference_misses),
            },
            "cells": [
                {
                    **c.metrics.to_dict(),
                    "results_path": c.results_path,
                    "clipped": c.clipped,
                    "protocol_failures": c.protocol_failures,
                    "failure_messages": c.failure_messages,
                }
                for c in self.cells
            ],
            "reference": [c.to_dict() for c in self.reference],
        }
