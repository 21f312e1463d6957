"""Scenario parameters for the relay game."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, replace
from typing import Any, Literal

from ..comms import DIRECTIONAL, ISOTROPIC, JAM_ABSENT, JAM_PRESENT, AntennaModel, directional
from ..errors import ConfigError

ScenarioName = Literal["iso-nojam", "iso-jam", "dir-nojam", "dir-jam"]

SCENARIOS: dict[str, tuple[bool, bool]] = {
    "iso-nojam": (False, False),
    "iso-jam": (False, True),
    "dir-nojam": (True, False),
    "dir-jam": (True, True),
}

# Scene geometry, in units of r_com
CAPSULE_FACTOR = 1.5
SPAWN_BALL_FACTOR = 0.6
R_MAX_EXTRA = 4

# Fields that influence the calibrated budget
_BUDGET_FIELDS = ("r_com", "sinr_threshold", "sigma_p", "gamma")


@dataclass(frozen=True)
class ScenarioParams:
    """
    All constants of one scenario cell.

    Attributes:
        r_com: Isotropic interference-free communication range.
        sinr_threshold: SINR needed for a successful transfer.
        sigma_p: Maximum positional displacement per step.
        sigma_phi: Maximum antenna rotation per step (radians).
        sigma_j: Jammer speed.
        gamma: Discount factor.
        c_pos: Motion cost weight.
        c_phi: Steering cost weight.
        directional: Agents transmit with the directional array.
        jammed: A jammer roams the capsule around the bases.
        antenna_elements: Array elements of the directional antenna.
    """

    r_com: float = 1.0
    sinr_threshold: float = 1.0
    sigma_p: float = 0.2
    sigma_phi: float = math.pi / 8
    sigma_j: float = 0.1
    gamma: float = 0.99
    c_pos: float = 0.5
    c_phi: float = 0.1
    directional: bool = False
    jammed: bool = False
    antenna_elements: int = 2

    def __post_init__(self) -> None:
        if not 0.0 < self.gamma < 1.0:
            raise ConfigError(f"gamma must lie in (0, 1), got {self.gamma}", code="CFG_GAMMA", field="gamma")
        for name in ("c_pos", "c_phi"):
            value = getattr(self, name)
            if not 0.0 <= value < 1.0:
                raise ConfigError(f"{name} must lie in [0, 1), got {value}", code="CFG_COST", field=name)
        for name in ("sigma_p", "sigma_phi", "sigma_j", "r_com", "sinr_threshold"):
            value = getattr(self, name)
            if not value > 0.0:
                raise ConfigError(f"{name} must be positive, got {value}", code="CFG_POSITIVE", field=name)
        if self.antenna_elements < 2:
            raise ConfigError(
                f"antenna_elements must be >= 2, got {self.antenna_elements}",
                code="CFG_ANTENNA",
                field="antenna_elements",
            )

    @classmethod
    def for_scenario(cls, name: str, **overrides: Any) -> ScenarioParams:
        """Build parameters for one of the four named scenario cells."""
        if name not in SCENARIOS:
            raise ConfigError(
                f"Unknown scenario '{name}'",
                code="CFG_SCENARIO",
                field="scenario",
                hint=f"Choose one of {', '.join(SCENARIOS)}",
            )
        is_directional, is_jammed = SCENARIOS[name]
        return cls(directional=is_directional, jammed=is_jammed, **overrides)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ScenarioParams:
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(
                f"Unknown scenario parameter(s): {', '.join(sorted(unknown))}",
                code="CFG_UNKNOWN_KEY",
            )
        return cls(**data)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @property
    def scenario(self) -> str:
        return f"{'dir' if self.directional else 'iso'}-{'jam' if self.jammed else 'nojam'}"

    @property
    def c_dir(self) -> float:
        return 1.0 if self.directional else 0.0

    @property
    def c_jam(self) -> float:
        return JAM_PRESENT if self.jammed else JAM_ABSENT

    @property
    def agent_antenna(self) -> AntennaModel:
        """Transmit antenna of every agent; bases always use ISOTROPIC."""
        if not self.directional:
            return ISOTROPIC
        if self.antenna_elements == 2:
            return DIRECTIONAL
        return directional(self.antenna_elements)

    @property
    def capsule_radius(self) -> float:
        return CAPSULE_FACTOR * self.r_com

    def r_min(self, agents: int) -> float:
        return agents * self.r_com

    def r_max(self, agents: int) -> float:
        return (agents + R_MAX_EXTRA) * self.r_com

    def calibration_params(self) -> ScenarioParams:
        """The isotropic, non-jammed cell used to dimension the budget."""
        return replace(self, directional=False, jammed=False)

    def budget_fingerprint(self, grid_points: int) -> str:
        """
        Hash of everything the calibrated budget depends on.

        Returns:
            Hash string in format "sha256:<hex>".
        """
        payload = {name: getattr(self, name) for name in _BUDGET_FIELDS}
        payload["grid_points"] = grid_points
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return "sha256:" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()
