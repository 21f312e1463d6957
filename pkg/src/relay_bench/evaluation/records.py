"""Per-episode records and the results file."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import pandas as pd

from ..game import GameState, Transition

RESULT_COLUMNS = ["episode_id", "seed", "K", "scenario", "R", "success", "V", "T_del", "D_tot"]
# Failure code of an episode aborted by the external policy protocol
FAILURE_PROTOCOL = "protocol"


@dataclass
class EpisodeRecord:
    """
    Outcome of one evaluated episode.

    Attributes:
        episode_id: Index within the run.
        seed: Derived episode seed.
        K: Agent count.
        scenario: Scenario cell name.
        R: Base separation.
        success: Delivered within t_max.
        V: Discounted value.
        T_del: Delivery step, or None.
        D_tot: Total travelled distance.
        policy: Policy label.
        clipped: Agent actions clipped in lenient mode.
        failure: Failure code ("protocol") when the episode was aborted.
        message: Diagnostic for a failure.
        plan: Serialized baseline plan, if any.
        trajectory: Stored transitions when recording.
        final_state: Last state reached, kept with the trajectory.
    """

    episode_id: int
    seed: int
    K: int
    scenario: str
    R: float
    success: bool
    V: float
    T_del: int | None
    D_tot: float
    policy: str = ""
    clipped: int = 0
    failure: str | None = None
    message: str | None = None
    plan: dict[str, Any] | None = None
    trajectory: list[Transition] | None = field(default=None, repr=False)
    final_state: GameState | None = field(default=None, repr=False)

    def to_row(self) -> dict[str, Any]:
        return {
            "episode_id": self.episode_id,
            "seed": self.seed,
            "K": self.K,
            "scenario": self.scenario,
            "R": self.R,
            "success": self.success,
            "V": self.V,
            "T_del": self.T_del,
            "D_tot": self.D_tot,
        }

    def same_metrics(self, other: EpisodeRecord) -> bool:
        """Bit-exact equality of the results-file fields."""
        mine, theirs = self.to_row(), other.to_row()
        for key in RESULT_COLUMNS:
            a, b = mine[key], theirs[key]
            if isinstance(a, float) and isinstance(b, float) and math.isnan(a) and math.isnan(b):
                continue
            if a != b:
                return False
        return True


def records_to_frame(records: list[EpisodeRecord]) -> pd.DataFrame:
    """Results table in episode order."""
    rows = [r.to_row() for r in sorted(records, key=lambda r: r.episode_id)]
    frame = pd.DataFrame(rows, columns=RESULT_COLUMNS)
    frame["T_del"] = frame["T_del"].astype("Int64")
    frame["seed"] = frame["seed"].astype("uint64")
    return frame


def write_results(records: list[EpisodeRecord], path: str | Path) -> Path:
    """Write the delimited results file; byte-identical for identical records."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    records_to_frame(records).to_csv(path, index=False, lineterminator="\n")
    return path


def read_results(path: str | Path) -> pd.DataFrame:
    frame = pd.read_csv(path, dtype={"seed": "uint64", "scenario": str, "T_del": "Int64"})
    frame["success"] = frame["success"].astype(bool)
    return frame
