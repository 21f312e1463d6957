"""Discrete action set: eight compass moves plus standing still, three steering choices."""

from __future__ import annotations

import math

from ..errors import ProtocolError
from ..game import AgentAction, ScenarioParams

MOTION_CHOICES = 9
STEER_CHOICES = 3
STILL = 8

_SNAP = 1e-15


def _snap(value: float) -> float:
    return 0.0 if abs(value) < _SNAP else value


def decode_discrete_action(motion: int, steer: int, params: ScenarioParams) -> AgentAction:
    """
    Map (motion, steer) indices to an action.

    motion l < 8 moves sigma_p along angle 2*pi*l/8, l = 8 stands still;
    steer 0, 1, 2 rotates by -sigma_phi, 0, +sigma_phi.

    Raises:
        ProtocolError: If an index is out of range.
    """
    if isinstance(motion, bool) or not isinstance(motion, int) or not 0 <= motion < MOTION_CHOICES:
        raise ProtocolError(f"motion index must be an integer in [0, 8], got {motion!r}", code="PROTO_ACTION_INDEX")
    if isinstance(steer, bool) or not isinstance(steer, int) or not 0 <= steer < STEER_CHOICES:
        raise ProtocolError(f"steer index must be an integer in [0, 2], got {steer!r}", code="PROTO_ACTION_INDEX")

    if motion == STILL:
        dp = (0.0, 0.0)
    else:
        angle = 2.0 * math.pi * motion / 8.0
        dp = (_snap(params.sigma_p * math.cos(angle)), _snap(params.sigma_p * math.sin(angle)))
    dphi = (steer - 1) * params.sigma_phi
    return AgentAction(dp, dphi)
