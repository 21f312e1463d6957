"""Policy handles: the builtin baseline, the still-standing policy and external processes."""

from __future__ import annotations

import logging
import shlex
from dataclasses import dataclass, field
from typing import Any, Literal, Protocol

from ..baseline import BaselineController, RelayPlan
from ..errors import ConfigError, ProtocolError
from ..game import GameState, JointAction, ScenarioParams, ValidationMode
from .observations import ENCODINGS, encode
from .protocol import ACTION_MODES, PolicyProcess, dumps, parse_action, request_message

logger = logging.getLogger(__name__)

PolicyKind = Literal["baseline", "zero", "external"]
POLICY_KINDS: tuple[str, ...] = ("baseline", "zero", "external")


class Policy(Protocol):
    """What the evaluation harness needs from a policy."""

    name: str
    mode: ValidationMode

    def start(self, initial: GameState) -> None:
        """Prepare for a new episode starting at ``initial``."""
        ...

    def act(self, state: GameState, t: int) -> JointAction:
        ...

    def close(self) -> None:
        ...


class BaselinePolicy:
    """Plans on the first state of every episode and follows the plan."""

    mode: ValidationMode = "strict"

    def __init__(self, params: ScenarioParams, name: str = "baseline"):
        self.name = name
        self._controller = BaselineController(params)

    @property
    def plan(self) -> RelayPlan | None:
        return self._controller.plan

    def start(self, initial: GameState) -> None:
        self._controller.reset(initial)

    def act(self, state: GameState, t: int) -> JointAction:
        return self._controller(state, t)

    def close(self) -> None:
        pass


class ZeroPolicy:
    """Every agent stands still."""

    mode: ValidationMode = "strict"

    def __init__(self, name: str = "zero"):
        self.name = name

    def start(self, initial: GameState) -> None:
        pass

    def act(self, state: GameState, t: int) -> JointAction:
        return JointAction.zeros(state.K)

    def close(self) -> None:
        pass


class ExternalPolicy:
    """
    Decentralized policy served by a child process.

    Each agent's action is requested with that agent's observation only.
    The process is spawned lazily and respawned after a protocol failure.
    """

    mode: ValidationMode = "lenient"

    def __init__(
        self,
        command: list[str],
        agents: int,
        params: ScenarioParams,
        encoding: str = "relative-sorted",
        action_mode: str = "discrete",
        name: str = "external",
    ):
        self.name = name
        self.agents = agents
        self.params = params
        self.encoding = encoding
        self.action_mode = action_mode
        self._process = PolicyProcess(command)
        self._broken = False

    def start(self, initial: GameState) -> None:
        if self._broken or not self._process.running:
            self._process.start(self.agents, self.params, self.encoding, self.action_mode)
            self._broken = False

    def act(self, state: GameState, t: int) -> JointAction:
        actions = []
        try:
            for k in range(state.K):
                obs = encode(state, k, self.encoding)
                reply = self._process.exchange(request_message(t, k, obs.values))
                actions.append(parse_action(reply, self.action_mode, self.params, line=dumps(reply)))
        except ProtocolError:
            self._broken = True
            raise
        return JointAction(actions)

    def close(self) -> None:
        self._process.close()


@dataclass(frozen=True)
class PolicySpec:
    """
    Picklable description of a policy, built into a handle inside each worker.

    Attributes:
        kind: "baseline", "zero" or "external".
        command: Command line of an external policy.
        encoding: Observation encoding sent to an external policy.
        action_mode: "discrete" or "continuous" responses.
        label: Name used in results; defaults to the kind.
    """

    kind: str = "baseline"
    command: tuple[str, ...] = field(default_factory=tuple)
    encoding: str = "relative-sorted"
    action_mode: str = "discrete"
    label: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in POLICY_KINDS:
            raise ConfigError(
                f"Unknown policy '{self.kind}'",
                code="CFG_POLICY",
                field="policy",
                hint=f"Choose one of {', '.join(POLICY_KINDS)}",
            )
        if self.kind == "external" and not self.command:
            raise ConfigError("External policy needs a command", code="CFG_POLICY_CMD", field="policy_cmd")
        if self.encoding not in ENCODINGS:
            raise ConfigError(f"Unknown encoding '{self.encoding}'", code="CFG_ENCODING", field="encoding")
        if self.action_mode not in ACTION_MODES:
            raise ConfigError(f"Unknown action mode '{self.action_mode}'", code="CFG_ACTION_MODE", field="action_mode")

    @classmethod
    def from_command_line(cls, kind: str, command: str | None = None, **kwargs: Any) -> PolicySpec:
        return cls(kind=kind, command=tuple(shlex.split(command)) if command else (), **kwargs)

    @property
    def name(self) -> str:
        return self.label or self.kind

    def build(self, agents: int, params: ScenarioParams) -> Policy:
        if self.kind == "baseline":
            return BaselinePolicy(params, name=self.name)
        if self.kind == "zero":
            return ZeroPolicy(name=self.name)
        return ExternalPolicy(
            list(self.command),
            agents,
            params,
            encoding=self.encoding,
            action_mode=self.action_mode,
            name=self.name,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "command": list(self.command),
            "encoding": self.encoding,
            "action_mode": self.action_mode,
            "label": self.label,
        }
