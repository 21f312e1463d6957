"""Terminal budget interface used by the reward function."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, runtime_checkable


@runtime_checkable
class Budget(Protocol):
    """Anything that prices delivery for a given base separation R."""

    def terminal(self, R: float) -> float:
        """Budget paid once, in the step taken from the w = 1 state."""
        ...


@dataclass(frozen=True)
class ConstantBudget:
    """A fixed terminal budget, independent of R."""

    value: float = 0.0

    def terminal(self, R: float) -> float:
        return self.value


NO_BUDGET = ConstantBudget(0.0)
