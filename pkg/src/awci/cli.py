"""Daemon entry point: parse config, wire everything up, run until told to
stop, and shut down cleanly."""

from __future__ import annotations

import asyncio
import logging
import os
import signal
import sys
from typing import Mapping, Optional, Sequence

from awci.backends.sim import InvariantViolation, ParseError
from awci.config import DaemonConfig, UsageError, parse_config
from awci.daemon import Daemon

log = logging.getLogger("awci")

_LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


def setup_logging(env: Mapping[str, str]) -> None:
    level_name = env.get("AWCI_LOG", "info").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.INFO
    logging.basicConfig(level=level, format=_LOG_FORMAT, stream=sys.stderr)


async def _serve(config: DaemonConfig) -> int:
    try:
        daemon = Daemon(config)
    except (ParseError, InvariantViolation) as exc:
        log.error("cannot load simulator environment: %s", exc)
        return 1

    try:
        await daemon.start()
    except OSError as exc:
        host, port = config.listen
        log.error("cannot bind %s:%d: %s", host, port, exc)
        return 1

    stop = asyncio.Event()
    loop = asyncio.get_running_loop()
    for sig in (signal.SIGINT, signal.SIGTERM):
        try:
            loop.add_signal_handler(sig, stop.set)
        except NotImplementedError:
            pass
    await stop.wait()
    try:
        await asyncio.wait_for(daemon.stop(), timeout=2.5)
    except asyncio.TimeoutError:
        log.warning("shutdown timed out, exiting anyway")
    return 0


def run(config: DaemonConfig) -> int:
    return asyncio.run(_serve(config))


def main(argv: Optional[Sequence[str]] = None) -> int:
    setup_logging(os.environ)
    try:
        config = parse_config(
            argv if argv is not None else sys.argv[1:], os.environ
        )
    except UsageError as exc:
        print(f"awci: {exc}", file=sys.stderr)
        return 2
    return run(config)


if __name__ == "__main__":
    raise SystemExit(main())
