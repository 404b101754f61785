"""Daemon configuration: flags beat AWCI_* environment variables beat
built-in defaults, resolved field by field."""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Mapping, Optional, Sequence


class UsageError(Exception):
    """Bad flags, bad values, or an inconsistent combination."""


class BackendKind(Enum):
    SIMULATED = "sim"
    SYSTEM = "system"


DEFAULT_LISTEN = ("127.0.0.1", 8472)


@dataclass(frozen=True)
class DaemonConfig:
    backend: BackendKind = BackendKind.SYSTEM
    interface: str = "wlan0"
    listen: tuple[str, int] = DEFAULT_LISTEN
    scan_interval_ms: int = 3000
    removal_grace_scans: int = 2
    connect_timeout_ms: int = 15_000
    env_file: Optional[Path] = None
    ui_dir: Optional[Path] = None


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="awci",
        description="Wireless network control daemon with a live JSON event protocol.",
    )
    parser.add_argument("--backend", choices=["sim", "system"], help="wireless backend")
    parser.add_argument("--interface", help="wireless interface name (default wlan0)")
    parser.add_argument("--listen", help="host:port to serve on (default 127.0.0.1:8472)")
    parser.add_argument("--scan-interval-ms", type=int, help="scan period, start to start")
    parser.add_argument(
        "--removal-grace", type=int, help="consecutive missing scans before removal"
    )
    parser.add_argument("--connect-timeout-ms", type=int, help="connect attempt deadline")
    parser.add_argument("--env-file", help="simulator environment JSON (required for sim)")
    parser.add_argument("--ui-dir", help="directory with the static UI bundle")
    return parser


def parse_listen(text: str) -> tuple[str, int]:
    host, sep, port_text = text.rpartition(":")
    if not sep or not host:
        raise UsageError(f"listen address must be host:port, got {text!r}")
    try:
        port = int(port_text)
    except ValueError:
        raise UsageError(f"listen port must be an integer, got {port_text!r}") from None
    if not 0 <= port <= 65535:
        raise UsageError(f"listen port out of range: {port}")
    return host, port


def _int_from_env(env: Mapping[str, str], key: str) -> Optional[int]:
    raw = env.get(key)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{key} must be an integer, got {raw!r}") from None


def parse_config(argv: Sequence[str], env: Mapping[str, str]) -> DaemonConfig:
    args = _build_parser().parse_args(argv)

    backend_text = args.backend or env.get("AWCI_BACKEND") or "system"
    try:
        backend = BackendKind(backend_text)
    except ValueError:
        raise UsageError(f"backend must be 'sim' or 'system', got {backend_text!r}") from None

    listen_text = args.listen or env.get("AWCI_LISTEN")
    listen = parse_listen(listen_text) if listen_text else DEFAULT_LISTEN

    scan_interval = (
        args.scan_interval_ms
        if args.scan_interval_ms is not None
        else _int_from_env(env, "AWCI_SCAN_INTERVAL_MS")
    )
    removal_grace = (
        args.removal_grace
        if args.removal_grace is not None
        else _int_from_env(env, "AWCI_REMOVAL_GRACE")
    )
    connect_timeout = (
        args.connect_timeout_ms
        if args.connect_timeout_ms is not None
        else _int_from_env(env, "AWCI_CONNECT_TIMEOUT_MS")
    )

    env_file_text = args.env_file or env.get("AWCI_ENV_FILE")
    ui_dir_text = args.ui_dir or env.get("AWCI_UI_DIR")

    config = DaemonConfig(
        backend=backend,
        interface=args.interface or env.get("AWCI_INTERFACE") or "wlan0",
        listen=listen,
        scan_interval_ms=scan_interval if scan_interval is not None else 3000,
        removal_grace_scans=removal_grace if removal_grace is not None else 2,
        connect_timeout_ms=connect_timeout if connect_timeout is not None else 15_000,
        env_file=Path(env_file_text) if env_file_text else None,
        ui_dir=Path(ui_dir_text) if ui_dir_text else None,
    )

    if config.backend is BackendKind.SIMULATED and config.env_file is None:
        raise UsageError("--env-file is required when --backend is sim")
    if config.scan_interval_ms < 250:
        raise UsageError(f"scan interval must be >= 250 ms, got {config.scan_interval_ms}")
    if config.removal_grace_scans < 1:
        raise UsageError(f"removal grace must be >= 1, got {config.removal_grace_scans}")
    if config.connect_timeout_ms < 1:
        raise UsageError(f"connect timeout must be positive, got {config.connect_timeout_ms}")
    return config
