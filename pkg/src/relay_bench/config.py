"""Run configuration for the command-line surface."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from .calibration import DEFAULT_GRID_POINTS
from .errors import ConfigError
from .game import SCENARIOS, ScenarioParams
from .policy import PolicySpec

CONFIG_FILENAME = "config.json"


@dataclass(frozen=True)
class RunConfig:
    """
    Effective configuration of one command.

    Attributes:
        scenarios: Scenario cells to run (iso-nojam, iso-jam, dir-nojam, dir-jam).
        agents: Agent counts K.
        episodes: Episodes per (scenario, K) cell.
        seed: Master seed.
        c_time: Horizon multiplier.
        policy: Policy under evaluation.
        out: Output directory.
        calibration_dir: Budget table directory; defaults to ``<out>/calibration``.
        record: Write a trajectory log per episode.
        workers: Worker processes for episodes and calibration.
        grid_points: Calibration grid size.
        overrides: ScenarioParams fields replacing the defaults.
    """

    scenarios: tuple[str, ...] = ("iso-nojam",)
    agents: tuple[int, ...] = (1,)
    episodes: int = 1000
    seed: int = 0
    c_time: float = 1.5
    policy: PolicySpec = field(default_factory=PolicySpec)
    out: str = "runs"
    calibration_dir: str | None = None
    record: bool = False
    workers: int = 1
    grid_points: int = DEFAULT_GRID_POINTS
    overrides: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.scenarios:
            raise ConfigError("At least one scenario is required", code="CFG_SCENARIO", field="scenarios")
        for name in self.scenarios:
            if name not in SCENARIOS:
                raise ConfigError(
                    f"Unknown scenario '{name}'",
                    code="CFG_SCENARIO",
                    field="scenarios",
                    hint=f"Choose from {', '.join(SCENARIOS)}",
                )
        if not self.agents or any(k < 1 for k in self.agents):
            raise ConfigError("Agent counts must be >= 1", code="CFG_AGENTS", field="agents")
        if self.episodes < 1:
            raise ConfigError("episodes must be >= 1", code="CFG_EPISODES", field="episodes")
        if not self.c_time > 0:
            raise ConfigError("c_time must be positive", code="CFG_C_TIME", field="c_time")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1", code="CFG_WORKERS", field="workers")
        if self.grid_points < 3:
            raise ConfigError("grid_points must be >= 3", code="CFG_GRID", field="grid_points")
        unknown = set(self.overrides) - {f.name for f in fields(ScenarioParams)} | (
            set(self.overrides) & {"directional", "jammed"}
        )
        if unknown:
            raise ConfigError(
                f"Unknown or fixed scenario parameter(s): {', '.join(sorted(unknown))}",
                code="CFG_OVERRIDE",
                field="overrides",
                hint="Directional and jammed flags come from the scenario name",
            )

    @property
    def out_dir(self) -> Path:
        return Path(self.out)

    @property
    def budget_dir(self) -> Path:
        return Path(self.calibration_dir) if self.calibration_dir else self.out_dir / "calibration"

    def params_for(self, scenario: str) -> ScenarioParams:
        return ScenarioParams.for_scenario(scenario, **self.overrides)

    def with_overrides(self, **changes: Any) -> RunConfig:
        """Replace the fields given a value other than None."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RunConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(
                f"Unknown config key(s): {', '.join(sorted(unknown))}",
                code="CFG_UNKNOWN_KEY",
                hint=f"Known keys: {', '.join(sorted(known))}",
            )
        values = dict(data)
        if "scenarios" in values:
            scenarios = values["scenarios"]
            values["scenarios"] = (scenarios,) if isinstance(scenarios, str) else tuple(scenarios)
        if "agents" in values:
            agents = values["agents"]
            values["agents"] = (int(agents),) if isinstance(agents, int) else tuple(int(k) for k in agents)
        if "policy" in values:
            policy = values["policy"]
            if isinstance(policy, str):
                values["policy"] = PolicySpec(kind=policy)
            elif isinstance(policy, dict):
                spec = dict(policy)
                spec["command"] = tuple(spec.get("command") or ())
                values["policy"] = PolicySpec(**spec)
        if "overrides" in values:
            values["overrides"] = dict(values["overrides"])
        try:
            return cls(**values)
        except TypeError as e:
            raise ConfigError(f"Malformed config: {e}", code="CFG_FORMAT") from e

    @classmethod
    def load(cls, path: str | Path) -> RunConfig:
        """Read a JSON key-value config file."""
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except FileNotFoundError as e:
            raise ConfigError(f"Config file not found: {path}", code="CFG_FILE", field="config") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"Config file is not valid JSON: {e}", code="CFG_FORMAT", field="config") from e
        if not isinstance(data, dict):
            raise ConfigError("Config file must hold a JSON object", code="CFG_FORMAT", field="config")
        return cls.from_dict(data)

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenarios": list(self.scenarios),
            "agents": list(self.agents),
            "episodes": self.episodes,
            "seed": self.seed,
            "c_time": self.c_time,
            "policy": self.policy.to_dict(),
            "out": self.out,
            "calibration_dir": self.calibration_dir,
            "record": self.record,
            "workers": self.workers,
            "grid_points": self.grid_points,
            "overrides": dict(self.overrides),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def echo(self, directory: str | Path | None = None) -> Path:
        """Write the effective configuration next to the outputs."""
        path = Path(directory or self.out_dir) / CONFIG_FILENAME
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json() + "\n", encoding="utf-8")
        return path
