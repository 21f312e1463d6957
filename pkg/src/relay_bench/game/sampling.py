"""Scene sampling: base separation, agent spawn ball and the jammer capsule."""

from __future__ import annotations

import logging
import math

import numpy as np

from ..errors import DomainError
from .config import SPAWN_BALL_FACTOR, ScenarioParams
from .state import GameState

logger = logging.getLogger(__name__)


def capsule_distance(point: np.ndarray, R: float) -> float:
    """Distance from a point to the base segment [(0, 0), (R, 0)]."""
    x = min(max(float(point[0]), 0.0), R)
    return math.hypot(float(point[0]) - x, float(point[1]))


def in_capsule(point: np.ndarray, R: float, radius: float) -> bool:
    """True iff the point lies in Conv(B(p_t, radius) U B(p_r, radius))."""
    return capsule_distance(point, R) <= radius


def sample_capsule_point(rng: np.random.Generator, R: float, radius: float) -> np.ndarray:
    """Uniform point of the capsule by rejection from its bounding box."""
    tries = 0
    while True:
        tries += 1
        candidate = np.array(
            [rng.uniform(-radius, R + radius), rng.uniform(-radius, radius)]
        )
        if in_capsule(candidate, R, radius):
            if tries > 1:
                logger.debug("Capsule sample accepted after %d tries", tries)
            return candidate


def sample_ball(rng: np.random.Generator, center: np.ndarray, radius: float, count: int) -> np.ndarray:
    """``count`` i.i.d. uniform points on the disk B(center, radius)."""
    rho = radius * np.sqrt(rng.random(count))
    angle = rng.uniform(0.0, 2.0 * math.pi, count)
    return center[None, :] + rho[:, None] * np.column_stack((np.cos(angle), np.sin(angle)))


def sample_initial_state(params: ScenarioParams, agents: int, rng: np.random.Generator) -> GameState:
    """
    Draw an initial scene.

    Draw order is fixed (R, positions, orientations, then the jammer) so a
    seed reproduces the same scene across scenario cells that share K.

    Raises:
        DomainError: If agents < 1.
    """
    if agents < 1:
        raise DomainError(f"Need at least one agent, got {agents}", code="GAME_AGENT_COUNT")

    R = float(rng.uniform(params.r_min(agents), params.r_max(agents)))
    center = np.array([R / 2.0, 0.0])
    positions = sample_ball(rng, center, SPAWN_BALL_FACTOR * R, agents)
    orientations = rng.uniform(0.0, 2.0 * math.pi, agents)

    jammer = np.zeros(2)
    jammer_step = np.zeros(2)
    if params.jammed:
        jammer = sample_capsule_point(rng, R, params.capsule_radius)
        toward = center - jammer
        alpha = math.atan2(toward[1], toward[0])
        heading = alpha + rng.uniform(-math.pi / 2.0, math.pi / 2.0)
        jammer_step = params.sigma_j * np.array([math.cos(heading), math.sin(heading)])

    return GameState(
        positions=positions,
        orientations=orientations,
        carrying=np.zeros(agents, dtype=bool),
        jammer=jammer,
        jammer_step=jammer_step,
        R=R,
    )
