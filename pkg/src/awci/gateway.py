"""Real-time protocol endpoint.

Each WebSocket session gets a hello with the full snapshot, then every
event, broadcast or unicast, in strict per-session seq order. Event fan-out
never awaits between the snapshot cache update and the per-session enqueue,
so a joining session can never observe a torn snapshot/diff boundary.
"""

from __future__ import annotations

import asyncio
import contextlib
import logging
import uuid
from pathlib import Path
from typing import Any, Awaitable, Callable, Optional, Protocol

from aiohttp import WSCloseCode, WSMsgType, web

from awci.connection import (
    ConnectionState,
    ConnectRequest,
    Decision,
    ErrorEvent,
    Event,
    Rejected,
    StateChanged,
)
from awci.model import EMPTY_SNAPSHOT, NetworkDiff, NetworkSnapshot
from awci.protocol import (
    ConnectCommand,
    DisconnectCommand,
    ProtocolError,
    ScanCommand,
    decode_client,
    encode_server,
    error_payload,
    hello_payload,
    networks_payload,
    state_payload,
)

log = logging.getLogger(__name__)

_FALLBACK_INDEX = (
    "<!doctype html><title>wireless control</title>"
    "<p>No UI bundle configured; connect a protocol client to <code>/ws</code>.</p>"
)


class ConnectionControl(Protocol):
    """What the gateway needs from the connection manager."""

    @property
    def status(self) -> ConnectionState: ...

    def request_connect(self, req: ConnectRequest) -> Decision: ...

    def request_disconnect(self) -> Decision: ...


class ScanControl(Protocol):
    def nudge(self) -> None: ...


class Session:
    """One live client: an ordered, bounded outbound queue plus seq counter."""

    def __init__(self, send: Callable[[str], Awaitable[None]], queue_size: int) -> None:
        self.id = uuid.uuid4().hex[:12]
        self.send = send
        self.queue: asyncio.Queue[str] = asyncio.Queue(maxsize=queue_size)
        self.seq = 0
        self.ws: Optional[web.WebSocketResponse] = None

    def enqueue(self, msg_type: str, payload: dict[str, Any]) -> bool:
        """Queue one message; returns False when the client is too slow."""
        text = encode_server(msg_type, self.seq, payload)
        try:
            self.queue.put_nowait(text)
        except asyncio.QueueFull:
            return False
        self.seq += 1
        return True


class Gateway:
    def __init__(
        self,
        ui_dir: Optional[Path] = None,
        send_queue_size: int = 256,
    ) -> None:
        self._ui_dir = ui_dir
        self._send_queue_size = send_queue_size
        self._sessions: dict[str, Session] = {}
        self._snapshot: NetworkSnapshot = EMPTY_SNAPSHOT
        self._manager: Optional[ConnectionControl] = None
        self._scanner: Optional[ScanControl] = None
        self._writers: dict[str, asyncio.Task] = {}

    def attach(self, manager: ConnectionControl, scanner: ScanControl) -> None:
        self._manager = manager
        self._scanner = scanner

    @property
    def session_count(self) -> int:
        return len(self._sessions)

    @property
    def sessions(self) -> dict[str, Session]:
        return self._sessions

    # -- event publication (synchronous: fan-out is atomic per event) ------

    def publish_scan(self, snapshot: NetworkSnapshot, diff: NetworkDiff) -> None:
        self._snapshot = snapshot
        self._broadcast("networks", networks_payload(diff))

    def publish_event(self, event: Event) -> None:
        if isinstance(event, StateChanged):
            self._broadcast("state", state_payload(event.state.value, event.ssid))
        elif isinstance(event, ErrorEvent):
            self._broadcast("error", error_payload(event.code, event.message))
        else:
            raise TypeError(f"unknown event: {event!r}")

    def _broadcast(self, msg_type: str, payload: dict[str, Any]) -> None:
        for session in list(self._sessions.values()):
            if not session.enqueue(msg_type, payload):
                log.warning("session %s cannot keep up, dropping it", session.id)
                self._reap(session)

    # -- session plumbing ---------------------------------------------------

    def _reap(self, session: Session) -> None:
        self._sessions.pop(session.id, None)
        writer = self._writers.pop(session.id, None)
        if writer is not None:
            writer.cancel()

    async def _writer_loop(self, session: Session, ws: web.WebSocketResponse) -> None:
        try:
            while True:
                text = await session.queue.get()
                await session.send(text)
        except asyncio.CancelledError:
            raise
        except Exception as exc:
            log.info("session %s send failed (%s), dropping it", session.id, exc)
            self._reap(session)
            with contextlib.suppress(Exception):
                await ws.close()

    async def handle_ws(self, request: web.Request) -> web.WebSocketResponse:
        if self._manager is None or self._scanner is None:
            raise web.HTTPServiceUnavailable(text="gateway not wired up")
        ws = web.WebSocketResponse()
        await ws.prepare(request)

        session = Session(send=ws.send_str, queue_size=self._send_queue_size)
        session.ws = ws
        # Compose hello and register in one synchronous step so no diff can
        # slip between the snapshot read and the session becoming live.
        session.enqueue("hello", hello_payload(self._snapshot, self._manager.status))
        self._sessions[session.id] = session
        self._writers[session.id] = asyncio.create_task(self._writer_loop(session, ws))
        log.info("session %s opened (%d live)", session.id, len(self._sessions))

        try:
            async for msg in ws:
                if msg.type == WSMsgType.TEXT:
                    self._handle_client_text(session, msg.data)
                elif msg.type == WSMsgType.ERROR:
                    break
        finally:
            self._reap(session)
            log.info("session %s closed (%d live)", session.id, len(self._sessions))
        return ws

    def _handle_client_text(self, session: Session, text: str) -> None:
        try:
            cmd = decode_client(text)
        except ProtocolError as exc:
            log.debug("session %s sent a bad message: %s", session.id, exc)
            session.enqueue("error", error_payload("bad_request", "malformed message"))
            return

        assert self._manager is not None and self._scanner is not None
        if isinstance(cmd, ConnectCommand):
            decision = self._manager.request_connect(
                ConnectRequest(ssid=cmd.ssid, psk=cmd.psk, request_id=session.id)
            )
            if isinstance(decision, Rejected):
                session.enqueue("error", error_payload(decision.reason, decision.message))
        elif isinstance(cmd, DisconnectCommand):
            decision = self._manager.request_disconnect()
            if isinstance(decision, Rejected):
                session.enqueue("error", error_payload(decision.reason, decision.message))
        elif isinstance(cmd, ScanCommand):
            self._scanner.nudge()

    async def shutdown(self) -> None:
        """Flush queued events briefly, then close every session."""
        sessions = list(self._sessions.values())
        loop = asyncio.get_running_loop()
        deadline = loop.time() + 1.0
        for session in sessions:
            while not session.queue.empty() and loop.time() < deadline:
                await asyncio.sleep(0.01)
        for session in sessions:
            self._reap(session)
            if session.ws is not None:
                with contextlib.suppress(Exception):
                    await session.ws.close(
                        code=WSCloseCode.GOING_AWAY, message=b"server shutting down"
                    )

    # -- HTTP surface ---------------------------------------------------------

    async def _index(self, request: web.Request) -> web.StreamResponse:
        if self._ui_dir is not None:
            index = self._ui_dir / "index.html"
            if index.is_file():
                return web.FileResponse(index)
        return web.Response(text=_FALLBACK_INDEX, content_type="text/html")

    def make_app(self) -> web.Application:
        app = web.Application()
        app.router.add_get("/ws", self.handle_ws)
        app.router.add_get("/", self._index)
        if self._ui_dir is not None and self._ui_dir.is_dir():
            app.router.add_static("/", self._ui_dir)
        return app
