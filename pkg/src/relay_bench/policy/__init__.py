"""Policy I/O - observation encodings, discrete actions, the external wire protocol and policy handles."""

from .observations import (
    ENCODINGS,
    Encoding,
    Observation,
    encode,
    encode_relative_sorted,
    encode_shifted,
    relative_sorted_length,
    shift,
    shifted_length,
)
from .actions import MOTION_CHOICES, STEER_CHOICES, decode_discrete_action
from .protocol import (
    ACTION_MODES,
    PROTOCOL_VERSION,
    ActionMode,
    PolicyProcess,
    dumps,
    handshake_message,
    loads,
    parse_action,
    request_message,
)
from .handles import (
    POLICY_KINDS,
    BaselinePolicy,
    ExternalPolicy,
    Policy,
    PolicySpec,
    ZeroPolicy,
)

__all__ = [
    # Observations
    "ENCODINGS",
    "Encoding",
    "Observation",
    "encode",
    "encode_relative_sorted",
    "encode_shifted",
    "relative_sorted_length",
    "shift",
    "shifted_length",
    # Actions
    "MOTION_CHOICES",
    "STEER_CHOICES",
    "decode_discrete_action",
    # Protocol
    "ACTION_MODES",
    "PROTOCOL_VERSION",
    "ActionMode",
    "PolicyProcess",
    "dumps",
    "handshake_message",
    "loads",
    "parse_action",
    "request_message",
    # Handles
    "POLICY_KINDS",
    "BaselinePolicy",
    "ExternalPolicy",
    "Policy",
    "PolicySpec",
    "ZeroPolicy",
]
