"""Trajectory logs: one JSON record per line."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from ..errors import RelayBenchError
from ..game import GameState
from .records import EpisodeRecord


def _dumps(record: dict[str, Any]) -> str:
    return json.dumps(record, allow_nan=False, separators=(",", ":"))


def write_trajectory(record: EpisodeRecord, path: str | Path) -> Path:
    """
    Write an ``episode`` header followed by one ``step`` record per state.

    Step records carry x_t with the action and reward taken from it; the
    last step record is the final state without an action.
    """
    if record.trajectory is None or record.final_state is None:
        raise RelayBenchError("Episode was not recorded", code="EVAL_NO_TRAJECTORY")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        header = {
            "type": "episode",
            "episode_id": record.episode_id,
            "seed": record.seed,
            "K": record.K,
            "scenario": record.scenario,
            "R": record.R,
            "policy": record.policy,
            "success": record.success,
            "T_del": record.T_del,
            "plan": record.plan,
        }
        f.write(_dumps(header) + "\n")
        for t, transition in enumerate(record.trajectory):
            step = {"type": "step", "t": t, **transition.state.to_dict()}
            step["actions"] = transition.joint.to_dict()
            step["reward"] = transition.reward
            f.write(_dumps(step) + "\n")
        last = {"type": "step", "t": len(record.trajectory), **record.final_state.to_dict()}
        last.update(actions=None, reward=None)
        f.write(_dumps(last) + "\n")
    return path


def read_trajectory(path: str | Path) -> tuple[dict[str, Any], list[dict[str, Any]]]:
    """
    Read a trajectory log.

    Returns:
        Tuple of (episode header, step records in order).
    """
    header: dict[str, Any] | None = None
    steps: list[dict[str, Any]] = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if not line.strip():
                continue
            record = json.loads(line)
            if record.get("type") == "episode":
                header = record
            elif record.get("type") == "step":
                steps.append(record)
    if header is None:
        raise RelayBenchError(f"No episode header in {path}", code="EVAL_TRAJECTORY_FORMAT")
    return header, steps


def step_states(steps: list[dict[str, Any]]) -> list[GameState]:
    """Rebuild the recorded states."""
    return [GameState.from_dict(step) for step in steps]
