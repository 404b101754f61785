"""Wires backend, scan loop, connection manager, and gateway into one
running service with a clean shutdown path."""

from __future__ import annotations

import asyncio
import logging
from typing import Optional

from aiohttp import web

from awci.backends.base import WirelessBackend
from awci.backends.sim import SimulatedBackend, load_environment
from awci.backends.system import SystemBackend
from awci.clock import Clock, MonotonicClock
from awci.config import BackendKind, DaemonConfig
from awci.connection import ConnectionManager
from awci.gateway import Gateway
from awci.scanner import ScanConfig, ScanLoop

log = logging.getLogger(__name__)


def build_backend(config: DaemonConfig, clock: Clock) -> WirelessBackend:
    if config.backend is BackendKind.SIMULATED:
        assert config.env_file is not None  # enforced by config parsing
        env = load_environment(config.env_file)
        return SimulatedBackend(env, clock=clock)
    return SystemBackend()


class Daemon:
    """Owns every component plus the HTTP runner; start() binds the socket."""

    def __init__(self, config: DaemonConfig, clock: Optional[Clock] = None) -> None:
        self.config = config
        self.clock: Clock = clock if clock is not None else MonotonicClock()
        self.backend = build_backend(config, self.clock)
        self.gateway = Gateway(ui_dir=config.ui_dir)
        self.scan_loop = ScanLoop(
            self.backend,
            config.interface,
            ScanConfig(
                interval_ms=config.scan_interval_ms,
                removal_grace_scans=config.removal_grace_scans,
            ),
            publish=self.gateway.publish_scan,
            clock=self.clock,
        )
        self.manager = ConnectionManager(
            self.backend,
            config.interface,
            publish=self.gateway.publish_event,
            snapshot_provider=lambda: self.scan_loop.snapshot,
            connect_timeout_ms=config.connect_timeout_ms,
        )
        self.gateway.attach(self.manager, self.scan_loop)
        self._runner: Optional[web.AppRunner] = None
        self._scan_task: Optional[asyncio.Task] = None
        self._port: Optional[int] = None

    @property
    def port(self) -> int:
        """The bound port (resolves an ephemeral :0 request)."""
        assert self._port is not None, "daemon not started"
        return self._port

    async def start(self) -> None:
        """Bind and start serving; raises OSError when the bind fails."""
        self._runner = web.AppRunner(self.gateway.make_app())
        await self._runner.setup()
        host, port = self.config.listen
        site = web.TCPSite(self._runner, host, port)
        await site.start()
        self._port = self._runner.addresses[0][1]
        self._scan_task = asyncio.create_task(self.scan_loop.run())
        log.info("serving on %s:%d (backend %s)", host, self.port, self.config.backend.value)

    async def stop(self) -> None:
        log.info("shutting down")
        self.scan_loop.stop()
        if self._scan_task is not None:
            try:
                await asyncio.wait_for(self._scan_task, timeout=1.5)
            except (asyncio.TimeoutError, asyncio.CancelledError):
                self._scan_task.cancel()
        await self.manager.shutdown()
        await self.gateway.shutdown()
        if self._runner is not None:
            await self._runner.cleanup()
        log.info("shutdown complete")
