"""Connection lifecycle control: one state machine per interface.

ConnectionMachine is pure (no I/O, no clocks) so request/phase interleavings
can be property-tested exhaustively; ConnectionManager is the asyncio shell
that owns the backend tasks, the attempt timeout, and cancellation.
"""

from __future__ import annotations

import asyncio
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Union

from awci.backends.base import (
    BackendError,
    ConnectionPhase,
    Phase,
    WirelessBackend,
)
from awci.model import (
    NetworkSnapshot,
    Psk,
    Ssid,
    ValidationError,
    validate_psk,
)

log = logging.getLogger(__name__)


class ConnState(Enum):
    DISCONNECTED = "disconnected"
    AUTHENTICATING = "authenticating"
    CONNECTING = "connecting"
    CONNECTED = "connected"
    DISCONNECTING = "disconnecting"


LEGAL_TRANSITIONS: frozenset[tuple[ConnState, ConnState]] = frozenset(
    {
        (ConnState.DISCONNECTED, ConnState.AUTHENTICATING),
        (ConnState.DISCONNECTED, ConnState.CONNECTING),
        (ConnState.AUTHENTICATING, ConnState.CONNECTING),
        (ConnState.AUTHENTICATING, ConnState.DISCONNECTED),
        (ConnState.CONNECTING, ConnState.CONNECTED),
        (ConnState.CONNECTING, ConnState.DISCONNECTED),
        (ConnState.CONNECTED, ConnState.DISCONNECTING),
        (ConnState.DISCONNECTING, ConnState.DISCONNECTED),
    }
)

FAILURE_MESSAGES = {
    "auth_failed": "Password Incorrect",
    "timeout": "Connection attempt timed out",
    "not_found": "Network not found",
    "backend_error": "Wireless backend error",
}

_PHASE_TO_STATE = {
    Phase.AUTHENTICATING: ConnState.AUTHENTICATING,
    Phase.CONNECTING: ConnState.CONNECTING,
    Phase.CONNECTED: ConnState.CONNECTED,
    Phase.FAILED: ConnState.DISCONNECTED,
}


@dataclass(frozen=True)
class Failure:
    reason: str
    ssid: Ssid


@dataclass(frozen=True)
class ConnectionState:
    """Externally visible machine state; failure survives into disconnected
    so late-joining clients can still render the last outcome."""

    state: ConnState = ConnState.DISCONNECTED
    ssid: Optional[Ssid] = None
    failure: Optional[Failure] = None

    def __post_init__(self) -> None:
        if (self.ssid is None) != (self.state is ConnState.DISCONNECTED):
            raise ValueError(f"ssid must be present iff not disconnected: {self}")
        if self.failure is not None and self.state is not ConnState.DISCONNECTED:
            raise ValueError("failure only retained while disconnected")


@dataclass(frozen=True)
class ConnectRequest:
    ssid: Ssid
    psk: Optional[Psk]
    request_id: str


@dataclass(frozen=True)
class Accepted:
    token: int


@dataclass(frozen=True)
class Rejected:
    reason: str
    message: str


Decision = Union[Accepted, Rejected]


@dataclass(frozen=True)
class StateChanged:
    state: ConnState
    ssid: Optional[Ssid]


@dataclass(frozen=True)
class ErrorEvent:
    code: str
    message: str


Event = Union[StateChanged, ErrorEvent]


class DisconnectAction(Enum):
    NONE = "none"
    CANCEL_ATTEMPT = "cancel_attempt"
    STOP_BACKEND = "stop_backend"


class ConnectionMachine:
    """Pure request/phase arbiter. Every emitted StateChanged corresponds to
    exactly one legal transition; illegal or stale inputs are dropped."""

    def __init__(self) -> None:
        self._status = ConnectionState()
        self._next_token = 0
        self._active_token: Optional[int] = None

    @property
    def status(self) -> ConnectionState:
        return self._status

    def request_connect(
        self, req: ConnectRequest, snapshot: NetworkSnapshot
    ) -> tuple[Decision, list[Event]]:
        if self._status.state is not ConnState.DISCONNECTED:
            return Rejected("busy", "another connection operation is in progress"), []
        view = snapshot.find(req.ssid)
        if view is None:
            return (
                Rejected("unknown_ssid", f"network {req.ssid.display!r} is not in the latest scan"),
                [],
            )
        if view.secure and req.psk is None:
            return Rejected("psk_required", "this network requires a password"), []
        if req.psk is not None:
            try:
                validate_psk(req.psk.secret)
            except ValidationError as exc:
                return Rejected("psk_invalid", str(exc)), []

        self._next_token += 1
        self._active_token = self._next_token
        target = ConnState.AUTHENTICATING if view.secure else ConnState.CONNECTING
        events = self._move(target, ssid=req.ssid, failure=None)
        return Accepted(self._active_token), events

    def request_disconnect(self) -> tuple[Decision, list[Event], DisconnectAction]:
        state = self._status.state
        if state is ConnState.DISCONNECTED:
            return Rejected("not_connected", "not connected to any network"), [], DisconnectAction.NONE
        if state is ConnState.DISCONNECTING:
            # Already on the way down; join the in-flight operation.
            return Accepted(self._active_token or 0), [], DisconnectAction.NONE
        if state is ConnState.CONNECTED:
            self._next_token += 1
            self._active_token = self._next_token
            events = self._move(ConnState.DISCONNECTING, ssid=self._status.ssid, failure=None)
            return Accepted(self._active_token), events, DisconnectAction.STOP_BACKEND
        # Mid-attempt: cancel. This is a deliberate abort, not a failure.
        self._active_token = None
        events = self._move(ConnState.DISCONNECTED, ssid=None, failure=None)
        return Accepted(0), events, DisconnectAction.CANCEL_ATTEMPT

    def on_phase(self, token: int, phase: ConnectionPhase) -> list[Event]:
        if self._active_token is None or token != self._active_token:
            log.debug("dropping stale phase %s (no matching attempt)", phase.phase.value)
            return []
        current = self._status.state
        if phase.phase is Phase.FAILED:
            reason = phase.failure_reason or "backend_error"
            failure = Failure(reason=reason, ssid=self._status.ssid)  # type: ignore[arg-type]
            self._active_token = None
            events = self._move(ConnState.DISCONNECTED, ssid=None, failure=failure)
            events.append(ErrorEvent(code=reason, message=FAILURE_MESSAGES[reason]))
            return events
        target = _PHASE_TO_STATE[phase.phase]
        if target is current:
            return []
        if (current, target) not in LEGAL_TRANSITIONS:
            log.warning(
                "dropping out-of-order phase %s in state %s", phase.phase.value, current.value
            )
            return []
        if target is ConnState.CONNECTED:
            self._active_token = None
        return self._move(target, ssid=self._status.ssid, failure=None)

    def on_disconnect_complete(self, token: int) -> list[Event]:
        if self._active_token is None or token != self._active_token:
            return []
        if self._status.state is not ConnState.DISCONNECTING:
            return []
        self._active_token = None
        return self._move(ConnState.DISCONNECTED, ssid=None, failure=None)

    def _move(
        self, target: ConnState, ssid: Optional[Ssid], failure: Optional[Failure]
    ) -> list[Event]:
        current = self._status.state
        assert (current, target) in LEGAL_TRANSITIONS, f"illegal move {current} -> {target}"
        self._status = ConnectionState(state=target, ssid=ssid, failure=failure)
        return [StateChanged(state=target, ssid=ssid)]


class ConnectionManager:
    """Asyncio shell around ConnectionMachine.

    Requests and backend phases are serialized by the event loop; request
    methods are synchronous so callers can never be blocked by the backend.
    At most one backend operation is in flight at any time.
    """

    def __init__(
        self,
        backend: WirelessBackend,
        interface: str,
        publish: Callable[[Event], None],
        snapshot_provider: Callable[[], NetworkSnapshot],
        connect_timeout_ms: int = 15_000,
    ) -> None:
        self._backend = backend
        self._interface = interface
        self._publish = publish
        self._snapshot_provider = snapshot_provider
        self._connect_timeout_ms = connect_timeout_ms
        self._machine = ConnectionMachine()
        self._task: Optional[asyncio.Task] = None

    @property
    def status(self) -> ConnectionState:
        return self._machine.status

    def request_connect(self, req: ConnectRequest) -> Decision:
        decision, events = self._machine.request_connect(req, self._snapshot_provider())
        self._emit(events)
        if isinstance(decision, Accepted):
            log.info(
                "connect attempt %d accepted for %r (request %s)",
                decision.token,
                req.ssid.display,
                req.request_id,
            )
            self._task = asyncio.create_task(
                self._run_attempt(decision.token, req.ssid, req.psk)
            )
        return decision

    def request_disconnect(self) -> Decision:
        decision, events, action = self._machine.request_disconnect()
        if action is DisconnectAction.CANCEL_ATTEMPT and self._task is not None:
            self._task.cancel()
            self._task = None
        self._emit(events)
        if action is DisconnectAction.STOP_BACKEND and isinstance(decision, Accepted):
            self._task = asyncio.create_task(self._run_disconnect(decision.token))
        return decision

    async def shutdown(self) -> None:
        if self._task is not None:
            self._task.cancel()
            try:
                await self._task
            except (asyncio.CancelledError, Exception):
                pass
            self._task = None

    async def _run_attempt(self, token: int, ssid: Ssid, psk: Optional[Psk]) -> None:
        try:
            await asyncio.wait_for(
                self._consume_phases(token, ssid, psk),
                timeout=self._connect_timeout_ms / 1000,
            )
        except asyncio.TimeoutError:
            log.warning("connect attempt %d timed out", token)
            self._emit(self._machine.on_phase(token, ConnectionPhase.failed("timeout")))
        except asyncio.CancelledError:
            raise
        except BackendError as exc:
            log.error("connect attempt %d backend failure: %s", token, exc)
            self._emit(self._machine.on_phase(token, ConnectionPhase.failed("backend_error")))
        except Exception:
            # A buggy backend must never wedge the state machine mid-attempt.
            log.exception("connect attempt %d crashed", token)
            self._emit(self._machine.on_phase(token, ConnectionPhase.failed("backend_error")))

    async def _consume_phases(self, token: int, ssid: Ssid, psk: Optional[Psk]) -> None:
        async for phase in self._backend.begin_connect(self._interface, ssid, psk):
            self._emit(self._machine.on_phase(token, phase))
            if phase.terminal:
                return
        # Stream ended without a terminal phase: treat as a backend defect.
        self._emit(self._machine.on_phase(token, ConnectionPhase.failed("backend_error")))

    async def _run_disconnect(self, token: int) -> None:
        try:
            await self._backend.begin_disconnect(self._interface)
        except asyncio.CancelledError:
            raise
        except BackendError as exc:
            log.error("disconnect failed, forcing disconnected state: %s", exc)
            self._emit(self._machine.on_disconnect_complete(token))
            self._emit([ErrorEvent(code="backend_error", message=FAILURE_MESSAGES["backend_error"])])
            return
        self._emit(self._machine.on_disconnect_complete(token))

    def _emit(self, events: list[Event] | tuple[Event, ...]) -> None:
        for event in events:
            self._publish(event)
