#!/usr/bin/env python3
"""Tail a running daemon's event stream from the terminal.

Usage:
    python scripts/watch_networks.py [--url ws://127.0.0.1:8472/ws]

Prints the hello snapshot, then every diff/state/error event as it arrives.
Ctrl-C to quit.
"""

import argparse
import asyncio
import sys

import aiohttp

sys.path.insert(0, "src")

from awci.protocol import (  # noqa: E402
    ErrorMessage,
    HelloMessage,
    NetworksMessage,
    StateMessage,
    decode_server,
)


def fmt_network(view) -> str:
    lock = "locked" if view.secure else "open"
    return f"  {view.ssid.display:<32} {view.signal_percent:>3}%  {lock} ({view.bssid_count} bssid)"


async def watch(url: str) -> None:
    async with aiohttp.ClientSession() as session:
        async with session.ws_connect(url) as ws:
            async for msg in ws:
                if msg.type != aiohttp.WSMsgType.TEXT:
                    break
                event = decode_server(msg.data)
                if isinstance(event, HelloMessage):
                    print(f"[{event.seq}] hello (state={event.state})")
                    for view in event.networks:
                        print(fmt_network(view))
                elif isinstance(event, NetworksMessage):
                    for view in event.added:
                        print(f"[{event.seq}] + {fmt_network(view).strip()}")
                    for ssid in event.removed:
                        print(f"[{event.seq}] - {ssid.display}")
                    for view in event.changed:
                        print(f"[{event.seq}] ~ {fmt_network(view).strip()}")
                elif isinstance(event, StateMessage):
                    ssid = f" {event.ssid.display}" if event.ssid else ""
                    print(f"[{event.seq}] state: {event.state}{ssid}")
                elif isinstance(event, ErrorMessage):
                    print(f"[{event.seq}] error: {event.code}: {event.message}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--url", default="ws://127.0.0.1:8472/ws")
    args = parser.parse_args()
    try:
        asyncio.run(watch(args.url))
    except KeyboardInterrupt:
        pass
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
