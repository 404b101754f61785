"""Shared backend surface: the phase model for connect attempts, backend
errors, and the protocol every wireless implementation satisfies."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import AsyncIterator, Optional, Protocol

from awci.model import AccessPoint, Psk, Ssid


class BackendError(Exception):
    """Base class for wireless backend failures."""


class InterfaceDown(BackendError):
    """The wireless interface is not usable for scanning."""


class BackendUnavailable(BackendError):
    """The backing tool is missing or exited abnormally."""


class Phase(Enum):
    AUTHENTICATING = "authenticating"
    CONNECTING = "connecting"
    CONNECTED = "connected"
    FAILED = "failed"


FAILURE_REASONS = frozenset({"auth_failed", "timeout", "not_found", "backend_error"})


@dataclass(frozen=True)
class ConnectionPhase:
    """One step of a connect attempt; failure_reason present iff failed."""

    phase: Phase
    failure_reason: Optional[str] = None

    def __post_init__(self) -> None:
        if self.phase is Phase.FAILED:
            if self.failure_reason not in FAILURE_REASONS:
                raise ValueError(f"bad failure reason: {self.failure_reason!r}")
        elif self.failure_reason is not None:
            raise ValueError("failure_reason only valid on failed phases")

    @classmethod
    def authenticating(cls) -> "ConnectionPhase":
        return cls(Phase.AUTHENTICATING)

    @classmethod
    def connecting(cls) -> "ConnectionPhase":
        return cls(Phase.CONNECTING)

    @classmethod
    def connected(cls) -> "ConnectionPhase":
        return cls(Phase.CONNECTED)

    @classmethod
    def failed(cls, reason: str) -> "ConnectionPhase":
        return cls(Phase.FAILED, reason)

    @property
    def terminal(self) -> bool:
        return self.phase in (Phase.CONNECTED, Phase.FAILED)


class WirelessBackend(Protocol):
    """Pluggable wireless layer: deterministic simulator or real system."""

    async def scan(self, interface: str) -> list[AccessPoint]: ...

    def begin_connect(
        self, interface: str, ssid: Ssid, psk: Optional[Psk]
    ) -> AsyncIterator[ConnectionPhase]: ...

    async def begin_disconnect(self, interface: str) -> None: ...
