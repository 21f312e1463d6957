"""
Line-delimited JSON protocol for externally trained policies.

The child process reads requests on stdin and answers each on one stdout line:

    -> {"protocol": 1, "K": 3, "scenario": {"directional": false, "jammed": true},
        "encoding": "relative-sorted", "action_mode": "discrete"}
    <- {"protocol": 1}
    -> {"t": 0, "agent": 0, "obs": [...]}
    <- {"motion": 3, "steer": 1}            (discrete)
    <- {"dp": [0.1, -0.05], "dphi": 0.0}    (continuous)

Agents are 0-based. Numbers use the shortest round-trip decimal form.
"""

from __future__ import annotations

import json
import logging
import math
import subprocess
from collections.abc import Sequence
from typing import Any, Literal

from ..errors import ProtocolError
from ..game import AgentAction, ScenarioParams
from .actions import decode_discrete_action

logger = logging.getLogger(__name__)

PROTOCOL_VERSION = 1

ActionMode = Literal["discrete", "continuous"]
ACTION_MODES: tuple[str, ...] = ("discrete", "continuous")


def _reject_constant(name: str) -> float:
    raise ValueError(f"non-finite number {name} is not allowed")


def dumps(message: dict[str, Any]) -> str:
    """Serialize one message as a single line."""
    return json.dumps(message, allow_nan=False, separators=(",", ":"))


def loads(line: str) -> dict[str, Any]:
    """
    Parse one message line.

    Raises:
        ProtocolError: If the line is not a JSON object of finite numbers.
    """
    try:
        message = json.loads(line, parse_constant=_reject_constant)
    except ValueError as e:
        raise ProtocolError(f"Invalid JSON from policy: {e}", code="PROTO_JSON", line=line)
    if not isinstance(message, dict):
        raise ProtocolError("Policy message must be a JSON object", code="PROTO_JSON", line=line)
    return message


def handshake_message(agents: int, params: ScenarioParams, encoding: str, action_mode: str) -> dict[str, Any]:
    return {
        "protocol": PROTOCOL_VERSION,
        "K": agents,
        "scenario": {"directional": params.directional, "jammed": params.jammed},
        "encoding": encoding,
        "action_mode": action_mode,
    }


def request_message(t: int, agent: int, obs: Sequence[float]) -> dict[str, Any]:
    return {"t": t, "agent": agent, "obs": [float(x) for x in obs]}


def _number(value: Any, field: str, line: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ProtocolError(f"Field '{field}' must be a finite number", code="PROTO_FIELDS", line=line)
    return float(value)


def parse_action(message: dict[str, Any], action_mode: str, params: ScenarioParams, line: str = "") -> AgentAction:
    """
    Turn a response message into an action.

    Continuous actions are returned as sent; bounds are enforced by the caller.

    Raises:
        ProtocolError: On missing or malformed fields, or out-of-range indices.
    """
    if action_mode == "discrete":
        if "motion" not in message or "steer" not in message:
            raise ProtocolError("Discrete response needs 'motion' and 'steer'", code="PROTO_FIELDS", line=line)
        return decode_discrete_action(message["motion"], message["steer"], params)

    dp = message.get("dp")
    if not isinstance(dp, list) or len(dp) != 2:
        raise ProtocolError("Continuous response needs 'dp' as [x, y]", code="PROTO_FIELDS", line=line)
    if "dphi" not in message:
        raise ProtocolError("Continuous response needs 'dphi'", code="PROTO_FIELDS", line=line)
    return AgentAction(
        (_number(dp[0], "dp", line), _number(dp[1], "dp", line)),
        _number(message["dphi"], "dphi", line),
    )


class PolicyProcess:
    """
    A long-running policy child process speaking the line protocol.

    One process serves any number of episodes; the handshake is sent once
    after spawning.
    """

    def __init__(self, command: Sequence[str]):
        if not command:
            raise ProtocolError("Empty policy command", code="PROTO_SPAWN")
        self.command = list(command)
        self._process: subprocess.Popen[str] | None = None

    @property
    def running(self) -> bool:
        return self._process is not None and self._process.poll() is None

    def start(self, agents: int, params: ScenarioParams, encoding: str, action_mode: str) -> None:
        """
        Spawn the process and perform the handshake.

        Raises:
            ProtocolError: If the process cannot be started or rejects the handshake.
        """
        self.close()
        try:
            self._process = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as e:
            raise ProtocolError(f"Cannot start policy process: {e}", code="PROTO_SPAWN")
        logger.info("Started policy process %s (pid %d)", self.command[0], self._process.pid)

        reply = self.exchange(handshake_message(agents, params, encoding, action_mode))
        if reply.get("protocol") != PROTOCOL_VERSION:
            self.close()
            raise ProtocolError(
                f"Policy did not acknowledge protocol {PROTOCOL_VERSION}",
                code="PROTO_HANDSHAKE",
                line=dumps(reply),
            )

    def exchange(self, message: dict[str, Any]) -> dict[str, Any]:
        """Send one message and read one reply line."""
        process = self._process
        if process is None or process.stdin is None or process.stdout is None:
            raise ProtocolError("Policy process is not running", code="PROTO_EOF")
        try:
            process.stdin.write(dumps(message) + "\n")
            process.stdin.flush()
            line = process.stdout.readline()
        except (BrokenPipeError, OSError) as e:
            raise ProtocolError(f"Policy process pipe closed: {e}", code="PROTO_EOF")
        if not line:
            raise ProtocolError(
                f"Policy process closed its output (exit code {process.poll()})",
                code="PROTO_EOF",
            )
        return loads(line.rstrip("\n"))

    def close(self) -> None:
        process = self._process
        self._process = None
        if process is None:
            return
        for stream in (process.stdin, process.stdout):
            if stream is not None:
                try:
                    stream.close()
                except OSError:
                    pass
        try:
            process.wait(timeout=5)
        except subprocess.TimeoutExpired:
            process.kill()
            process.wait()

    def __enter__(self) -> PolicyProcess:
        return self

    def __exit__(self, *exc: object) -> None:
        self.close()
