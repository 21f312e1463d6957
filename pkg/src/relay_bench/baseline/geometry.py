"""Retrieval points, motion envelopes and candidate relay points."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from ..errors import DomainError
from ..game import ScenarioParams

logger = logging.getLogger(__name__)

CIRCLE_XATOL = 1e-10
LAMBDA_RESIDUAL_TOL = 1e-9
# Handover range shrink factor for directional links
HANDOVER_MARGIN = 1e-3


def handover_range(params: ScenarioParams) -> float:
    """Range of an agent-transmitted link when the antenna is aimed at the receiver."""
    if not params.directional:
        return params.r_com
    return params.r_com * math.sqrt(params.agent_antenna.max_gain) * (1.0 - HANDOVER_MARGIN)


def _as_point(p: Sequence[float] | np.ndarray) -> np.ndarray:
    return np.asarray(p, dtype=float).reshape(2)


def _circle_point(center: np.ndarray, radius: float, angle: float) -> np.ndarray:
    return center + radius * np.array([math.cos(angle), math.sin(angle)])


def _segment_entry(p_k: np.ndarray, p_r: np.ndarray, center: np.ndarray, radius: float) -> np.ndarray | None:
    """First point of [p_k, p_r] inside the closed ball, or None."""
    direction = p_r - p_k
    offset = p_k - center
    qa = float(direction @ direction)
    if qa == 0.0:
        return None
    qb = 2.0 * float(offset @ direction)
    qc = float(offset @ offset) - radius * radius
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        return None
    s = (-qb - math.sqrt(disc)) / (2.0 * qa)
    if not 0.0 <= s <= 1.0:
        return None
    return p_k + s * direction


def retrieval_point(
    p_k: Sequence[float] | np.ndarray,
    p_t: Sequence[float] | np.ndarray,
    p_r: Sequence[float] | np.ndarray,
    r_com: float,
) -> np.ndarray:
    """
    Best point for agent k to pick up the message in the one-agent game.

    Minimizes |p - p_k| + |p_r - p| over the closed ball B(p_t, r_com).
    Inside the ball the agent is already in range. Otherwise the entry
    point of the straight segment towards p_r is optimal when it exists;
    failing that the minimizer lies on the boundary circle, on the arc
    between the directions towards p_k and p_r.
    """
    p_k, p_t, p_r = _as_point(p_k), _as_point(p_t), _as_point(p_r)
    if float(np.linalg.norm(p_k - p_t)) <= r_com:
        return p_k.copy()

    entry = _segment_entry(p_k, p_r, p_t, r_com)
    if entry is not None:
        return entry

    def objective(angle: float) -> float:
        p = _circle_point(p_t, r_com, angle)
        return float(np.linalg.norm(p - p_k) + np.linalg.norm(p_r - p))

    lo = math.atan2(p_k[1] - p_t[1], p_k[0] - p_t[0])
    toward_r = math.atan2(p_r[1] - p_t[1], p_r[0] - p_t[0])
    span = (toward_r - lo + math.pi) % (2.0 * math.pi) - math.pi
    hi = lo + span
    if hi < lo:
        lo, hi = hi, lo
    if hi - lo <= CIRCLE_XATOL:
        return _circle_point(p_t, r_com, lo)

    mid = 0.5 * (lo + hi)
    candidates = [lo, hi]
    for bounds in ((lo, mid), (mid, hi), (lo, hi)):
        result = minimize_scalar(objective, bounds=bounds, method="bounded", options={"xatol": CIRCLE_XATOL})
        candidates.append(float(result.x))
    best = min(candidates, key=objective)
    return _circle_point(p_t, r_com, best)


def envelope(c: float, d: float, index: int, r_cover: float) -> float:
    """D = c + max(0, d - i * r): distance budget of chain agent i."""
    return c + max(0.0, d - index * r_cover)


def _lambda_residual(lam: float, a: float, c: float, d: float, index: int, r_cover: float) -> float:
    return (a - lam) - envelope(c, math.hypot(d, lam), index, r_cover)


def lambda_solve(a: float, c: float, d: float, index: int, r_cover: float) -> float:
    """
    Offset of a relay point from its projection towards the agent.

    Solves a - lam = c + max(0, sqrt(d^2 + lam^2) - i * r) for lam in (0, a].
    Of the two closed forms, lam = a - c holds when the coverage term
    vanishes and lam = ((a - c + i r)^2 - d^2) / (2 (a - c + i r)) otherwise.
    The branch is picked by its residual, not by comparing
    sqrt(d^2 + (a - c)^2) with i * r; a bracketing root finder covers the rest.

    Args:
        a: Perpendicular distance |p_i - pbar_i|.
        c: Retriever travel |phat_k - p_k|.
        d: Along-line distance |pbar_i - phat_k|.
        index: 1-based chain index (retriever = 1).
        r_cover: Per-hop coverage range.

    Raises:
        DomainError: If the envelope check would have succeeded (no positive root).
    """
    if min(a, c, d) < 0.0 or a <= envelope(c, d, index, r_cover):
        raise DomainError(
            f"No positive root for a={a}, c={c}, d={d}, i={index}",
            code="BASE_LAMBDA_PRECONDITION",
            hint="Use the projection itself when the envelope check passes",
        )

    excess = a - c + index * r_cover
    closed_forms = [a - c]
    if excess > 0.0:
        closed_forms.append((excess * excess - d * d) / (2.0 * excess))

    scale = max(1.0, a)
    for lam in closed_forms:
        if 0.0 < lam <= a and abs(_lambda_residual(lam, a, c, d, index, r_cover)) <= LAMBDA_RESIDUAL_TOL * scale:
            return lam

    if _lambda_residual(a, a, c, d, index, r_cover) == 0.0:
        return a
    logger.debug("lambda closed forms failed for a=%g c=%g d=%g i=%d; bracketing", a, c, d, index)
    return float(
        brentq(_lambda_residual, 0.0, a, args=(a, c, d, index, r_cover), xtol=1e-14, rtol=4 * np.finfo(float).eps)
    )


@dataclass(frozen=True)
class CandidateFrame:
    """
    Per-retriever construction along the line L_k from phat_k to p_r.

    Attributes:
        retriever: Agent index k.
        retrieval: phat_k.
        travel: c = |phat_k - p_k|.
        direction: Unit vector u of L_k.
        order: Frame members sorted along L_k, retriever first.
        chain_index: 1-based chain index of every member.
        coords: Along-line coordinate <p_i - phat_k, u> of every member.
        projections: pbar_i for every non-retriever member.
        relay_points: phat_i for every member (phat_k for the retriever).
        positions: Agent positions the frame was built from.
        receiver: p_r.
        r_cover: Per-hop coverage range used by the envelopes.
    """

    retriever: int
    retrieval: np.ndarray
    travel: float
    direction: np.ndarray
    order: tuple[int, ...]
    chain_index: dict[int, int]
    coords: dict[int, float]
    projections: dict[int, np.ndarray]
    relay_points: dict[int, np.ndarray]
    positions: np.ndarray
    receiver: np.ndarray
    r_cover: float

    @property
    def members(self) -> tuple[int, ...]:
        return self.order

    @property
    def line_length(self) -> float:
        return float(np.linalg.norm(self.receiver - self.retrieval))

    def envelope_of(self, agent: int, point: np.ndarray | None = None) -> float:
        """Distance budget D of a member for a relay point on or off L_k."""
        if agent == self.retriever:
            return self.travel
        point = self.relay_points[agent] if point is None else point
        along = float(np.linalg.norm(point - self.retrieval))
        return envelope(self.travel, along, self.chain_index[agent], self.r_cover)

    def slack(self, agent: int, point: np.ndarray | None = None) -> float:
        """Envelope budget left after reaching the relay point."""
        point = self.relay_points[agent] if point is None else point
        return self.envelope_of(agent, point) - float(np.linalg.norm(point - self.positions[agent]))

    def with_relay_points(self, relay_points: dict[int, np.ndarray]) -> CandidateFrame:
        merged = dict(self.relay_points)
        merged.update(relay_points)
        return CandidateFrame(
            retriever=self.retriever,
            retrieval=self.retrieval,
            travel=self.travel,
            direction=self.direction,
            order=self.order,
            chain_index=self.chain_index,
            coords=self.coords,
            projections=self.projections,
            relay_points=merged,
            positions=self.positions,
            receiver=self.receiver,
            r_cover=self.r_cover,
        )


def candidate_frame(
    positions: np.ndarray,
    retriever: int,
    receiver: Sequence[float] | np.ndarray,
    params: ScenarioParams,
    members: Sequence[int] | None = None,
) -> CandidateFrame:
    """
    Build the retrieval point and candidate relay points for one retriever.

    Args:
        positions: All agent positions, shape (K, 2).
        retriever: Index k of the retrieving agent.
        receiver: Receiver base position p_r.
        params: Scenario parameters.
        members: Agents taking part (all by default); the retriever is always included.
    """
    positions = np.asarray(positions, dtype=float)
    p_r = _as_point(receiver)
    r_cover = handover_range(params)
    members = list(range(positions.shape[0])) if members is None else list(members)
    if retriever not in members:
        members.append(retriever)

    p_k = positions[retriever]
    retrieval = retrieval_point(p_k, (0.0, 0.0), p_r, params.r_com)
    travel = float(np.linalg.norm(retrieval - p_k))
    line = p_r - retrieval
    length = float(np.linalg.norm(line))
    u = line / length if length > 0.0 else np.array([1.0, 0.0])

    others = [i for i in members if i != retriever]
    coords = {i: float((positions[i] - retrieval) @ u) for i in others}
    others.sort(key=lambda i: (coords[i], i))
    coords[retriever] = 0.0
    order = (retriever, *others)
    chain_index = {agent: n + 1 for n, agent in enumerate(order)}

    projections: dict[int, np.ndarray] = {}
    relay_points: dict[int, np.ndarray] = {retriever: retrieval}
    for agent in others:
        p_bar = retrieval + coords[agent] * u
        projections[agent] = p_bar
        perpendicular = positions[agent] - p_bar
        a = float(np.linalg.norm(perpendicular))
        d = abs(coords[agent])
        budget = envelope(travel, d, chain_index[agent], r_cover)
        if a <= budget:
            relay_points[agent] = p_bar
        else:
            lam = lambda_solve(a, travel, d, chain_index[agent], r_cover)
            relay_points[agent] = p_bar + lam * (perpendicular / a)

    return CandidateFrame(
        retriever=retriever,
        retrieval=retrieval,
        travel=travel,
        direction=u,
        order=order,
        chain_index=chain_index,
        coords=coords,
        projections=projections,
        relay_points=relay_points,
        positions=positions,
        receiver=p_r,
        r_cover=r_cover,
    )
