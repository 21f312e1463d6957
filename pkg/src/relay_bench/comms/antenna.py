"""Transmit antenna model: steering vectors and array gain."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class AntennaModel:
    """
    Uniform linear transmit array with half-wavelength spacing.

    Attributes:
        c_dir: Directivity coefficient in [0, 1]. 0 is isotropic, 1 is the
            fully directional array.
        elements: Number of array elements L >= 2.
    """

    c_dir: float = 0.0
    elements: int = 2

    def __post_init__(self) -> None:
        if not 0.0 <= self.c_dir <= 1.0:
            raise ValueError(f"c_dir must lie in [0, 1], got {self.c_dir}")
        if self.elements < 2:
            raise ValueError(f"elements must be >= 2, got {self.elements}")

    @property
    def is_isotropic(self) -> bool:
        return self.c_dir == 0.0

    @property
    def max_gain(self) -> float:
        """Gain on boresight."""
        return array_gain(0.0, self)


ISOTROPIC = AntennaModel(c_dir=0.0)
DIRECTIONAL = AntennaModel(c_dir=1.0)


def directional(elements: int) -> AntennaModel:
    """Fully directional preset with ``elements`` array elements."""
    return AntennaModel(c_dir=1.0, elements=elements)


def steering_vector(theta: float, antenna: AntennaModel) -> np.ndarray:
    """
    Steering vector a(theta).

    Element m carries phase 2*pi*m*sin(theta)/L; for L = 2 this is the
    two-element vector [1, c_dir * exp(j*pi*sin(theta))].
    """
    m = np.arange(antenna.elements)
    phases = np.exp(1j * 2.0 * np.pi * m * math.sin(theta) / antenna.elements)
    weights = np.full(antenna.elements, antenna.c_dir, dtype=complex)
    weights[0] = 1.0
    return weights * phases


def array_gain(theta: float, antenna: AntennaModel) -> float:
    """
    |a(0)^H a(theta)| against the unweighted boresight vector a(0) = [1, ..., 1].

    For L = 2 this is |1 + c_dir * exp(j*pi*sin(theta))|, so the boresight
    gain is 1 + c_dir.
    """
    return float(abs(np.sum(steering_vector(theta, antenna))))


def closed_form_gain(theta: float) -> float:
    """Gain of the fully directional two-element array, 2|cos(pi sin(theta) / 2)|."""
    return 2.0 * abs(math.cos(math.pi * math.sin(theta) / 2.0))
