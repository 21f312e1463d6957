"""Perfect-information game state."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Any

import numpy as np

# Termination variable values
W_RUNNING = 0
W_DELIVERED = 1
W_ABSORBED = 2


def _frozen(array: Any, dtype: type, shape: tuple[int, ...] | None = None) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True)
    if shape is not None:
        out = out.reshape(shape)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class GameState:
    """
    Full state x = (p_1..p_K, phi_1..phi_K, b_1..b_K, p_j, dp_j, R, w).

    Arrays are copied and made read-only so a state behaves as a value.
    The bases are implied: sender at (0, 0), receiver at (R, 0).

    Attributes:
        positions: Agent positions, shape (K, 2).
        orientations: Antenna orientations in [0, 2*pi), shape (K,).
        carrying: Carry flags b_k, shape (K,).
        jammer: Jammer position p_j (zero placeholder when not jammed).
        jammer_step: Jammer displacement dp_j (zero when not jammed).
        R: Base separation.
        w: Termination variable in {0, 1, 2}.
    """

    positions: np.ndarray
    orientations: np.ndarray
    carrying: np.ndarray
    jammer: np.ndarray
    jammer_step: np.ndarray
    R: float
    w: int = W_RUNNING

    def __post_init__(self) -> None:
        positions = _frozen(self.positions, float)
        agents = positions.size // 2
        object.__setattr__(self, "positions", _frozen(positions, float, (agents, 2)))
        object.__setattr__(self, "orientations", _frozen(self.orientations, float, (agents,)))
        object.__setattr__(self, "carrying", _frozen(self.carrying, bool, (agents,)))
        object.__setattr__(self, "jammer", _frozen(self.jammer, float, (2,)))
        object.__setattr__(self, "jammer_step", _frozen(self.jammer_step, float, (2,)))
        object.__setattr__(self, "R", float(self.R))
        object.__setattr__(self, "w", int(self.w))
        if self.w not in (W_RUNNING, W_DELIVERED, W_ABSORBED):
            raise ValueError(f"w must be 0, 1 or 2, got {self.w}")

    @property
    def K(self) -> int:
        return self.positions.shape[0]

    @property
    def sender(self) -> np.ndarray:
        return np.zeros(2)

    @property
    def receiver(self) -> np.ndarray:
        return np.array([self.R, 0.0])

    @property
    def midpoint(self) -> np.ndarray:
        return np.array([self.R / 2.0, 0.0])

    @property
    def delivered(self) -> bool:
        return self.w >= W_DELIVERED

    def replace(self, **changes: Any) -> GameState:
        """Return a copy with the given fields replaced."""
        return dataclasses.replace(self, **changes)

    def equals(self, other: GameState) -> bool:
        """Bit-exact equality of every component."""
        return (
            self.R == other.R
            and self.w == other.w
            and np.array_equal(self.positions, other.positions)
            and np.array_equal(self.orientations, other.orientations)
            and np.array_equal(self.carrying, other.carrying)
            and np.array_equal(self.jammer, other.jammer)
            and np.array_equal(self.jammer_step, other.jammer_step)
        )

    def to_dict(self) -> dict[str, Any]:
        """Serialize for trajectory logs."""
        return {
            "positions": self.positions.tolist(),
            "orientations": self.orientations.tolist(),
            "carrying": [bool(b) for b in self.carrying],
            "jammer": self.jammer.tolist(),
            "jammer_step": self.jammer_step.tolist(),
            "R": self.R,
            "w": self.w,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> GameState:
        return cls(
            positions=data["positions"],
            orientations=data["orientations"],
            carrying=data["carrying"],
            jammer=data["jammer"],
            jammer_step=data["jammer_step"],
            R=data["R"],
            w=data["w"],
        )
