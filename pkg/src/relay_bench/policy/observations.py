"""Per-agent observation encodings for learned policies."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal, TypeVar

import numpy as np

from ..game import GameState

Encoding = Literal["relative-sorted", "shifted"]
ENCODINGS: tuple[str, ...] = ("relative-sorted", "shifted")

T = TypeVar("T")


@dataclass(frozen=True)
class Observation:
    """Flat observation vector of one agent with its layout tag."""

    layout: str
    values: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)


def relative_sorted_length(agents: int) -> int:
    """Delta p_t, Delta p_r, Delta p_j, dp_j, phi_k, b_k, then 4 numbers per other agent."""
    return 10 + 4 * (agents - 1)


def shifted_length(agents: int) -> int:
    return 2 * (agents + 1) + agents


def shift(sequence: Sequence[T], k: int) -> list[T]:
    """Circular k-shift (a_{k+1}, ..., a_M, a_1, ..., a_k)."""
    items = list(sequence)
    if not items:
        return items
    k %= len(items)
    return items[k:] + items[:k]


def _check_agent(state: GameState, k: int) -> None:
    if not 0 <= k < state.K:
        raise IndexError(f"agent index {k} out of range for K={state.K}")


def encode_relative_sorted(state: GameState, k: int) -> Observation:
    """
    Relative layout, other agents sorted by distance.

    [p_t - p_k, p_r - p_k, p_j - p_k, dp_j, phi_k, b_k,
     (p_i - p_k, phi_i, b_i) for every other agent i by ascending |p_i - p_k|]

    Distance ties go to the lower agent index. Args use 0-based k.
    """
    _check_agent(state, k)
    p_k = state.positions[k]
    values: list[float] = []
    values.extend((state.sender - p_k).tolist())
    values.extend((state.receiver - p_k).tolist())
    values.extend((state.jammer - p_k).tolist())
    values.extend(state.jammer_step.tolist())
    values.append(float(state.orientations[k]))
    values.append(float(state.carrying[k]))

    others = [i for i in range(state.K) if i != k]
    offsets = {i: state.positions[i] - p_k for i in others}
    others.sort(key=lambda i: (float(np.hypot(*offsets[i])), i))
    for i in others:
        values.extend(offsets[i].tolist())
        values.append(float(state.orientations[i]))
        values.append(float(state.carrying[i]))

    return Observation("relative-sorted", tuple(values))


def encode_shifted(state: GameState, k: int) -> Observation:
    """
    Shifted layout: relative positions of the other agents and both bases,
    circularly shifted by k, followed by the carry flags shifted by k.

    Orientations and the jammer are not part of this layout. Args use 0-based k.
    """
    _check_agent(state, k)
    p_k = state.positions[k]
    relative = [state.positions[i] - p_k for i in range(state.K) if i != k]
    relative.append(state.sender - p_k)
    relative.append(state.receiver - p_k)

    values: list[float] = []
    for offset in shift(relative, k):
        values.extend(offset.tolist())
    values.extend(float(b) for b in shift(state.carrying.tolist(), k))
    return Observation("shifted", tuple(values))


def encode(state: GameState, k: int, encoding: str) -> Observation:
    """Dispatch on the encoding name."""
    if encoding == "relative-sorted":
        return encode_relative_sorted(state, k)
    if encoding == "shifted":
        return encode_shifted(state, k)
    raise ValueError(f"Unknown encoding '{encoding}' (expected one of {', '.join(ENCODINGS)})")
