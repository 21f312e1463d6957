"""Link-level SINR model and the communication predicate."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError
from .antenna import ISOTROPIC, AntennaModel, array_gain

logger = logging.getLogger(__name__)

JAM_PRESENT = 3.0
JAM_ABSENT = 0.0

# Relative slack on the threshold; absorbs rounding in accumulated positions.
SINR_RTOL = 1e-12

Position = tuple[float, float]


@dataclass(frozen=True)
class Link:
    """
    One transmitter, one receiver and an optional jammer.

    Attributes:
        p_t: Transmitter position.
        p_r: Receiver position.
        phi: Transmitter antenna orientation in radians.
        p_j: Jammer position, or None when no jammer is present.
        c_jam: Jamming coefficient (0 without jammer, 3 with).
        antenna: Transmit antenna model.
    """

    p_t: Position
    p_r: Position
    phi: float = 0.0
    p_j: Position | None = None
    c_jam: float = JAM_ABSENT
    antenna: AntennaModel = field(default=ISOTROPIC)

    def __post_init__(self) -> None:
        if _coincident(self.p_t, self.p_r):
            raise DomainError(
                "Transmitter and receiver coincide",
                code="COMMS_COINCIDENT",
            )
        if self.c_jam not in (JAM_ABSENT, JAM_PRESENT):
            raise DomainError(
                f"c_jam must be {JAM_ABSENT} or {JAM_PRESENT}, got {self.c_jam}",
                code="COMMS_JAM_COEFFICIENT",
            )


@dataclass(frozen=True)
class LinkEvaluation:
    """SINR of a link, with a flag for a receiver sitting on the jammer."""

    sinr: float
    jammer_coincident: bool = False


def _coincident(a: Position, b: Position) -> bool:
    return a[0] == b[0] and a[1] == b[1]


def bearing_offset(p_t: Position, p_r: Position, phi: float) -> float:
    """
    Angle between the transmitter boresight and the line to the receiver.

    Returns:
        theta in [-pi, pi).

    Raises:
        DomainError: If the positions coincide or phi is not finite.
    """
    if _coincident(p_t, p_r):
        raise DomainError("Bearing undefined for coincident positions", code="COMMS_COINCIDENT")
    if not math.isfinite(phi):
        raise DomainError(f"Orientation must be finite, got {phi}", code="COMMS_ORIENTATION")
    bearing = math.atan2(p_r[1] - p_t[1], p_r[0] - p_t[0])
    return (bearing - phi + math.pi) % (2.0 * math.pi) - math.pi


def evaluate_link(link: Link) -> LinkEvaluation:
    """Compute the SINR of a link and flag receiver-jammer coincidence."""
    theta = bearing_offset(link.p_t, link.p_r, link.phi)
    if abs(theta * link.antenna.c_dir) > math.pi / 2.0:
        return LinkEvaluation(0.0)

    interference = 1.0
    if link.p_j is not None and link.c_jam != JAM_ABSENT:
        dj2 = (link.p_r[0] - link.p_j[0]) ** 2 + (link.p_r[1] - link.p_j[1]) ** 2
        if dj2 == 0.0:
            logger.debug("Receiver at %s coincides with jammer", link.p_r)
            return LinkEvaluation(0.0, jammer_coincident=True)
        interference = 1.0 + link.c_jam / dj2

    d2 = (link.p_r[0] - link.p_t[0]) ** 2 + (link.p_r[1] - link.p_t[1]) ** 2
    return LinkEvaluation(array_gain(theta, link.antenna) / (d2 * interference))


def sinr(link: Link) -> float:
    """Signal-to-interference-and-noise ratio of a link (0 outside the transmit lobe)."""
    return evaluate_link(link).sinr


def meets_threshold(value: float | np.ndarray, threshold: float) -> bool | np.ndarray:
    """Inclusive threshold comparison shared by scalar and vectorized paths."""
    return value >= threshold * (1.0 - SINR_RTOL)


def can_communicate(link: Link, sinr_threshold: float) -> bool:
    """
    True iff the link SINR reaches the threshold (inclusive).

    Raises:
        DomainError: If the threshold is not positive.
    """
    if sinr_threshold <= 0:
        raise DomainError(
            f"SINR threshold must be positive, got {sinr_threshold}",
            code="COMMS_THRESHOLD",
        )
    return bool(meets_threshold(sinr(link), sinr_threshold))


def _gain_matrix(theta: np.ndarray, antennas: list[AntennaModel]) -> np.ndarray:
    """Array gains for a (transmitters, receivers) grid of bearing offsets."""
    gains = np.ones_like(theta)
    for row, antenna in enumerate(antennas):
        if antenna.is_isotropic:
            continue
        m = np.arange(antenna.elements)
        weights = np.full(antenna.elements, antenna.c_dir)
        weights[0] = 1.0
        phases = np.exp(
            1j * 2.0 * np.pi * np.sin(theta[row])[:, None] * m[None, :] / antenna.elements
        )
        gains[row] = np.abs(phases @ weights)
    return gains


def link_sinr_matrix(
    tx_positions: np.ndarray,
    tx_orientations: np.ndarray,
    tx_antennas: list[AntennaModel],
    rx_positions: np.ndarray,
    jammer: np.ndarray | None = None,
    c_jam: float = JAM_ABSENT,
) -> tuple[np.ndarray, int]:
    """
    SINR of every transmitter/receiver pair in a scene.

    Coincident transmitter and receiver count as contact (SINR = inf) unless
    the receiver sits on the jammer, in which case the SINR is 0.

    Returns:
        Tuple of (matrix of shape (n_tx, n_rx), number of jammer-coincident receivers).
    """
    delta = rx_positions[None, :, :] - tx_positions[:, None, :]
    d2 = np.einsum("ijk,ijk->ij", delta, delta)
    bearing = np.arctan2(delta[..., 1], delta[..., 0])
    theta = np.mod(bearing - tx_orientations[:, None] + np.pi, 2.0 * np.pi) - np.pi

    c_dir = np.array([a.c_dir for a in tx_antennas])
    in_lobe = np.abs(theta * c_dir[:, None]) <= np.pi / 2.0
    gains = _gain_matrix(theta, tx_antennas)

    interference = np.ones(rx_positions.shape[0])
    jam_hits = np.zeros(rx_positions.shape[0], dtype=bool)
    if jammer is not None and c_jam != JAM_ABSENT:
        dj = rx_positions - jammer[None, :]
        dj2 = np.einsum("ij,ij->i", dj, dj)
        jam_hits = dj2 == 0.0
        with np.errstate(divide="ignore"):
            interference = 1.0 + c_jam / np.where(jam_hits, 1.0, dj2)

    with np.errstate(divide="ignore", invalid="ignore"):
        values = gains / (d2 * interference[None, :])
    values = np.where(d2 == 0.0, np.inf, np.where(in_lobe, values, 0.0))
    values[:, jam_hits] = 0.0

    n_jammed = int(jam_hits.sum())
    if n_jammed:
        logger.debug("%d receiver(s) coincide with the jammer", n_jammed)
    return values, n_jammed
