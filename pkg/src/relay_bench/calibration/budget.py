"""Raw budget from dimensioning rollouts and its quadratic fit."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import nnls

from ..baseline import BaselineController
from ..errors import CalibrationError
from ..game import (
    NO_BUDGET,
    Budget,
    GameState,
    Rollout,
    ScenarioParams,
    W_DELIVERED,
    play,
    propagate_initial,
    t_max,
)
from .config import DEFAULT_GRID_POINTS, DIMENSIONING_C_TIME, DIMENSIONING_FACTOR

logger = logging.getLogger(__name__)

MIN_BUDGET = 1e-9


def dimensioning_state(R: float, agents: int, params: ScenarioParams) -> GameState:
    """x_#: every agent at (1.1 R, 0), facing +x, nobody carrying."""
    positions = np.tile([DIMENSIONING_FACTOR * R, 0.0], (agents, 1))
    state = GameState(
        positions=positions,
        orientations=np.zeros(agents),
        carrying=np.zeros(agents, dtype=bool),
        jammer=np.zeros(2),
        jammer_step=np.zeros(2),
        R=R,
    )
    return propagate_initial(state, params)


@dataclass(frozen=True)
class DimensioningRun:
    """
    Baseline rollout from x_#.

    Attributes:
        rollout: The played episode.
        delivered_at: T_#.
        motion: sum_{t < T_#} gamma^t sum_k |dp_k,t|^2.
    """

    rollout: Rollout
    delivered_at: int
    motion: float
    gamma: float

    @property
    def raw_budget(self) -> float:
        return self.motion / self.gamma**self.delivered_at


def dimensioning_rollout(
    R: float,
    agents: int,
    params: ScenarioParams,
    budget: Budget = NO_BUDGET,
) -> DimensioningRun:
    """
    Run the baseline from x_# in the isotropic, non-jammed cell.

    Raises:
        CalibrationError: If the baseline does not deliver.
    """
    cell = params.calibration_params()
    initial = dimensioning_state(R, agents, cell)
    controller = BaselineController(cell)
    controller.reset(initial)

    motion = 0.0

    def accumulate(t: int, state: GameState, joint, reward: float, next_state: GameState) -> None:
        nonlocal motion
        if state.w < W_DELIVERED:
            dp = joint.displacements()
            motion += cell.gamma**t * float(np.sum(dp * dp))

    horizon = t_max(agents, cell, DIMENSIONING_C_TIME)
    rollout = play(initial, controller, cell, budget, horizon, on_step=accumulate)
    if rollout.delivered_at is None:
        raise CalibrationError(
            f"Baseline did not deliver from the dimensioning state at R={R:.6g}",
            code="CAL_NO_DELIVERY",
            agents=agents,
        )
    return DimensioningRun(rollout=rollout, delivered_at=rollout.delivered_at, motion=motion, gamma=cell.gamma)


def budget_raw(R: float, agents: int, params: ScenarioParams, participating: int | None = None) -> float:
    """
    gamma^-T_# * sum_{t < T_#} gamma^t sum_k |dp_k,t|^2 from x_#.

    Args:
        R: Base separation.
        agents: K; sets nothing but the default of ``participating``.
        params: Scenario parameters; the isotropic non-jammed cell is used.
        participating: Number of agents that take part (all by default).
            The others are left out of x_#, so the result equals
            ``budget_raw(R, participating, params)``.
    """
    count = agents if participating is None else participating
    if not 1 <= count <= agents:
        raise CalibrationError(
            f"participating must lie in [1, {agents}], got {count}",
            code="CAL_PARTICIPANTS",
            agents=agents,
        )
    run = dimensioning_rollout(R, count, params)
    logger.debug("budget_raw(R=%.4f, K=%d of %d): T=%d raw=%.6f", R, count, agents, run.delivered_at, run.raw_budget)
    return run.raw_budget


@dataclass(frozen=True)
class BudgetTable:
    """
    Quadratic budget(R, 1; K) = q0 + q1 R + q2 R^2 fitted to raw samples.

    Attributes:
        K: Agent count.
        coefficients: (q0, q1, q2).
        samples: (R, raw budget) grid samples the fit was computed from.
        params_hash: Fingerprint of the parameters the samples depend on.
    """

    K: int
    coefficients: tuple[float, float, float]
    samples: tuple[tuple[float, float], ...]
    params_hash: str = ""

    def terminal(self, R: float) -> float:
        q0, q1, q2 = self.coefficients
        return q0 + q1 * R + q2 * R * R

    def __call__(self, R: float, w: int) -> float:
        """budget(R, w; K); zero unless w = 1."""
        return self.terminal(R) if w == W_DELIVERED else 0.0

    @property
    def grid(self) -> np.ndarray:
        return np.array([r for r, _ in self.samples])

    @property
    def raw(self) -> np.ndarray:
        return np.array([b for _, b in self.samples])

    def residuals(self) -> np.ndarray:
        fitted = np.array([self.terminal(r) for r in self.grid])
        return fitted - self.raw

    def max_abs_residual(self) -> float:
        return float(np.max(np.abs(self.residuals())))

    def max_relative_error(self) -> float:
        """Largest |fit - raw| / raw over the samples with a positive raw budget."""
        positive = self.raw > 0.0
        if not np.any(positive):
            return 0.0
        return float(np.max(np.abs(self.residuals()[positive]) / self.raw[positive]))


def _fit_positive(grid: np.ndarray, values: np.ndarray, lower: float) -> np.ndarray:
    """
    Quadratic q0 + q1 R + q2 R^2 with non-negative coefficients in powers of
    (R - lower) and a strictly positive constant, hence positive for R >= lower.
    """
    x = grid - lower
    basis = np.column_stack([np.ones_like(x), x, x * x])
    (a, b, c), _ = nnls(basis, values)
    a = max(a, MIN_BUDGET)
    return np.array([a - b * lower + c * lower * lower, b - 2.0 * c * lower, c])


def fit_budget(
    agents: int,
    params: ScenarioParams,
    grid_points: int = DEFAULT_GRID_POINTS,
    workers: int = 1,
) -> BudgetTable:
    """
    Sample budget_raw on an even grid over [R_min, R_max] and fit a quadratic.

    Samples where the message is delivered at reset carry a zero raw budget;
    they are kept in the table but give no weight to the relative refit. If
    neither least-squares fit stays positive, a fit constrained to be
    positive from R_min on is used.

    Raises:
        CalibrationError: If any dimensioning rollout fails or no positive
            sample exists.
    """
    if grid_points < 3:
        raise CalibrationError(f"Need at least 3 grid points, got {grid_points}", code="CAL_GRID", agents=agents)

    grid = np.linspace(params.r_min(agents), params.r_max(agents), grid_points)
    sample = partial(budget_raw, agents=agents, params=params)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(sample, grid.tolist()))
    else:
        raw = [sample(R) for R in grid.tolist()]

    values = np.array(raw)
    positive = values > 0.0
    if not np.any(positive):
        raise CalibrationError(
            "Every dimensioning rollout delivered at reset; nothing to fit",
            code="CAL_NONPOSITIVE",
            agents=agents,
        )
    zeros = int(np.count_nonzero(~positive))
    if zeros:
        logger.info("K=%d: %d sample(s) delivered at reset with a zero raw budget", agents, zeros)

    dense = np.linspace(grid[0], grid[-1], 10 * grid_points)

    def is_positive(candidate: np.ndarray) -> bool:
        return bool(np.all(P.polyval(dense, candidate) > 0.0))

    coefficients = P.polyfit(grid, values, 2)
    if not is_positive(coefficients) and np.count_nonzero(positive) >= 3:
        logger.info("Unweighted fit for K=%d dips to zero; refitting with relative weights", agents)
        coefficients = P.polyfit(grid[positive], values[positive], 2, w=1.0 / values[positive])
    if not is_positive(coefficients):
        logger.info("Least-squares fits for K=%d dip to zero; using the constrained fit", agents)
        coefficients = _fit_positive(grid, values, grid[0])

    table = BudgetTable(
        K=agents,
        coefficients=(float(coefficients[0]), float(coefficients[1]), float(coefficients[2])),
        samples=tuple(zip(grid.tolist(), raw)),
        params_hash=params.budget_fingerprint(grid_points),
    )
    if not is_positive(coefficients):
        raise CalibrationError(
            "Fitted budget is not positive over [R_min, R_max]",
            code="CAL_NONPOSITIVE",
            agents=agents,
        )
    logger.info(
        "Fitted budget for K=%d: q=(%.6g, %.6g, %.6g), max residual %.3g",
        agents,
        *table.coefficients,
        table.max_abs_residual(),
    )
    return table
