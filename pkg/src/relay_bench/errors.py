"""Exception hierarchy for the relay game engine and its harness."""

from __future__ import annotations


class RelayBenchError(Exception):
    """Base exception for all relay-bench errors."""

    exit_code: int = 1

    def __init__(
        self,
        message: str,
        *,
        code: str | None = None,
        hint: str | None = None,
    ):
        super().__init__(message)
        self.code = code
        self.hint = hint

    def _context(self) -> list[str]:
        """Extra bracketed context rendered after the message."""
        return []

    def __str__(self) -> str:
        parts = [super().__str__()]
        if self.code:
            parts.insert(0, f"[{self.code}]")
        parts.extend(self._context())
        if self.hint:
            parts.append(f"Hint: {self.hint}")
        return " ".join(parts)


class DomainError(RelayBenchError, ValueError):
    """An operation was called outside its mathematical domain."""

    pass


class ActionBoundsError(DomainError):
    """An agent action leaves the action space B(0, sigma_p) x [-sigma_phi, sigma_phi]."""

    def __init__(self, message: str, *, agent: int, code: str = "GAME_ACTION_BOUNDS"):
        super().__init__(
            message,
            code=code,
            hint="Clip actions with lenient mode or clip_joint_action()",
        )
        self.agent = agent

    def _context(self) -> list[str]:
        return [f"[agent={self.agent}]"]


class ConfigError(RelayBenchError):
    """Invalid scenario parameters or run configuration."""

    exit_code = 2

    def __init__(
        self,
        message: str,
        *,
        code: str | None = None,
        field: str | None = None,
        hint: str | None = None,
    ):
        super().__init__(message, code=code, hint=hint)
        self.field = field

    def _context(self) -> list[str]:
        return [f"[field={self.field}]"] if self.field else []


class PlanError(RelayBenchError):
    """The baseline controller was used without a valid plan."""

    pass


class CalibrationError(RelayBenchError):
    """Budget calibration failed."""

    exit_code = 3

    def __init__(
        self,
        message: str,
        *,
        code: str | None = None,
        agents: int | None = None,
        path: str | None = None,
        hint: str | None = None,
    ):
        super().__init__(message, code=code, hint=hint)
        self.agents = agents
        self.path = path

    def _context(self) -> list[str]:
        parts = []
        if self.agents is not None:
            parts.append(f"[K={self.agents}]")
        if self.path:
            parts.append(f"[path={self.path}]")
        return parts


class CalibrationMissingError(CalibrationError):
    """No budget table exists for the requested agent count."""

    def __init__(self, agents: int, path: str):
        super().__init__(
            f"No budget table for K={agents}",
            code="CAL_MISSING",
            agents=agents,
            path=path,
            hint="Run 'relay-bench calibrate' for this agent count first",
        )


class StaleBudgetError(CalibrationError):
    """A stored budget table was computed with different parameters."""

    def __init__(self, agents: int, expected: str, actual: str, path: str):
        super().__init__(
            f"Stale budget table: expected {expected}, found {actual}",
            code="CAL_STALE_HASH",
            agents=agents,
            path=path,
            hint="Re-run 'relay-bench calibrate --force'",
        )
        self.expected = expected
        self.actual = actual


class ProtocolError(RelayBenchError):
    """An external policy process violated the wire protocol."""

    exit_code = 4
    failure_code = "protocol"

    def __init__(
        self,
        message: str,
        *,
        code: str | None = None,
        line: str | None = None,
        hint: str | None = None,
    ):
        super().__init__(message, code=code, hint=hint)
        self.line = line

    def _context(self) -> list[str]:
        if self.line is None:
            return []
        preview = self.line if len(self.line) <= 80 else self.line[:77] + "..."
        return [f"[line={preview!r}]"]


class ComparisonError(RelayBenchError):
    """Two evaluation runs cannot be paired episode by episode."""

    exit_code = 2
