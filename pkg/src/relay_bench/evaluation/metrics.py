"""Success rate and medians over successful episodes."""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from .records import EpisodeRecord, records_to_frame

AGGREGATE_COLUMNS = [
    "policy",
    "scenario",
    "K",
    "episodes",
    "successes",
    "S",
    "V",
    "T_del",
    "D_tot",
]


def lower_median(values: Sequence[float] | np.ndarray) -> float:
    """Median taking the lower middle element for even counts; NaN when empty."""
    ordered = np.sort(np.asarray(values, dtype=float))
    if ordered.size == 0:
        return math.nan
    return float(ordered[(ordered.size - 1) // 2])


@dataclass(frozen=True)
class MetricsRow:
    """Aggregate of one (policy, scenario, K) cell."""

    policy: str
    scenario: str
    K: int
    episodes: int
    successes: int
    S: float
    V: float
    T_del: float
    D_tot: float

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class MetricsTable:
    """Rows of aggregated metrics."""

    rows: list[MetricsRow] = field(default_factory=list)

    def get(self, policy: str, scenario: str, K: int) -> MetricsRow:
        for row in self.rows:
            if (row.policy, row.scenario, row.K) == (policy, scenario, K):
                return row
        raise KeyError(f"No metrics for policy={policy} scenario={scenario} K={K}")

    def extend(self, other: MetricsTable) -> None:
        self.rows.extend(other.rows)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame([r.to_dict() for r in self.rows], columns=AGGREGATE_COLUMNS)
        return frame.sort_values(["policy", "scenario", "K"], kind="stable").reset_index(drop=True)

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, lineterminator="\n")
        return path


def aggregate_frame(frame: pd.DataFrame, policy: str) -> MetricsTable:
    """
    Aggregate a results table per (scenario, K).

    V, T_del and D_tot use successful episodes only.
    """
    table = MetricsTable()
    for (scenario, agents), group in frame.groupby(["scenario", "K"], sort=True):
        ok = group[group["success"].astype(bool)]
        table.rows.append(
            MetricsRow(
                policy=policy,
                scenario=str(scenario),
                K=int(agents),
                episodes=len(group),
                successes=len(ok),
                S=len(ok) / len(group),
                V=lower_median(ok["V"].to_numpy(dtype=float)),
                T_del=lower_median(ok["T_del"].to_numpy(dtype=float, na_value=np.nan)),
                D_tot=lower_median(ok["D_tot"].to_numpy(dtype=float)),
            )
        )
    return table


def aggregate(records: Iterable[EpisodeRecord], policy: str) -> MetricsTable:
    """Aggregate records; the result does not depend on record order."""
    return aggregate_frame(records_to_frame(list(records)), policy)
