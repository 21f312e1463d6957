"""Calibration configuration."""

from dataclasses import dataclass

# Grid of base separations the raw budget is sampled on
DEFAULT_GRID_POINTS = 41
# Horizon multiplier for the dimensioning rollout
DIMENSIONING_C_TIME = 4.0
# Agents start at this multiple of R on the base axis
DIMENSIONING_FACTOR = 1.1


@dataclass(frozen=True)
class CalibrationConfig:
    """Configuration for the calibration stage."""

    grid_points: int = DEFAULT_GRID_POINTS
    workers: int = 1
    force: bool = False
