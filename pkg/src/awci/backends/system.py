"""System wireless backend: scans by running an iwlist-compatible command
and connects/disconnects through configurable subprocess templates, so any
supplicant-control toolchain (and test stubs) can be dropped in."""

from __future__ import annotations

import asyncio
import logging
import re
import shlex
from dataclasses import dataclass
from typing import AsyncIterator, Optional

from awci.backends.base import BackendUnavailable, ConnectionPhase, InterfaceDown
from awci.model import AccessPoint, Psk, Security, Ssid, ValidationError, validate_ssid

log = logging.getLogger(__name__)

_CELL_RE = re.compile(r"^\s*Cell\s+\d+\s+-\s+Address:\s*(\S+)")
_MAC_RE = re.compile(r"^[0-9A-Fa-f]{2}(:[0-9A-Fa-f]{2}){5}$")
_ESSID_RE = re.compile(r'ESSID:"(.*)"')
_SIGNAL_RE = re.compile(r"Signal level[=:]\s*(-?\d+)\s*dBm")
_QUALITY_RE = re.compile(r"Quality[=:]\s*(\d+)/70")
_CHANNEL_RE = re.compile(r"Channel[:=]\s*(\d+)")
_CHANNEL_FREQ_RE = re.compile(r"\(Channel\s+(\d+)\)")
_ENCRYPTION_RE = re.compile(r"Encryption key:\s*(on|off)")


class _Cell:
    def __init__(self, bssid: str) -> None:
        self.bssid = bssid
        self.essid: Optional[str] = None
        self.signal_dbm: Optional[int] = None
        self.channel: Optional[int] = None
        self.encrypted = False


def _finish_cell(cell: _Cell) -> Optional[AccessPoint]:
    if cell.essid is None or cell.essid == "":
        return None  # hidden or nameless networks are out of scope
    if cell.signal_dbm is None or cell.channel is None or cell.channel < 1:
        return None
    try:
        ssid = validate_ssid(cell.essid)
    except ValidationError:
        return None  # oversized names are dropped, not fatal
    dbm = max(-100, min(-10, cell.signal_dbm))
    try:
        return AccessPoint(
            ssid=ssid,
            bssid=cell.bssid,
            signal_dbm=dbm,
            security=Security.PSK if cell.encrypted else Security.OPEN,
            channel=cell.channel,
        )
    except ValueError:
        return None


def parse_scan_output(text: str) -> list[AccessPoint]:
    """Parse iwlist-style scan output into access points.

    Cells open with ``Cell NN - Address: <MAC>``; recognized child lines are
    ESSID, Signal level (dBm) or Quality=x/70 (dbm = x - 110), Encryption
    key, and Channel. Unknown lines are ignored; a cell whose address is not
    a MAC is skipped and counted, never fatal.
    """
    aps: list[AccessPoint] = []
    malformed = 0
    cell: Optional[_Cell] = None

    def flush() -> None:
        nonlocal cell
        if cell is not None:
            ap = _finish_cell(cell)
            if ap is not None:
                aps.append(ap)
        cell = None

    for line in text.splitlines():
        header = _CELL_RE.match(line)
        if header:
            flush()
            mac = header.group(1)
            if _MAC_RE.match(mac):
                cell = _Cell(mac.lower())
            else:
                malformed += 1
            continue
        if cell is None:
            continue
        essid = _ESSID_RE.search(line)
        if essid:
            cell.essid = essid.group(1)
        signal = _SIGNAL_RE.search(line)
        if signal:
            cell.signal_dbm = int(signal.group(1))
        elif cell.signal_dbm is None:
            quality = _QUALITY_RE.search(line)
            if quality:
                cell.signal_dbm = int(quality.group(1)) - 110
        enc = _ENCRYPTION_RE.search(line)
        if enc:
            cell.encrypted = enc.group(1) == "on"
        if cell.channel is None:
            chan = _CHANNEL_RE.search(line) or _CHANNEL_FREQ_RE.search(line)
            if chan:
                cell.channel = int(chan.group(1))
    flush()

    if malformed:
        log.warning("scan output contained %d malformed cell(s), skipped", malformed)
    return aps


@dataclass(frozen=True)
class CommandTemplates:
    """Subprocess command lines; {interface}, {ssid} and {psk} are filled in.

    Defaults assume a stock Linux box (iwlist for scanning, nmcli driving
    wpa_supplicant for association); deployments with a different supplicant
    toolchain override these.
    """

    scan: str = "iwlist {interface} scan"
    connect_psk: str = "nmcli device wifi connect {ssid} password {psk} ifname {interface}"
    connect_open: str = "nmcli device wifi connect {ssid} ifname {interface}"
    disconnect: str = "nmcli device disconnect {interface}"


def render_command(template: str, interface: str, ssid: Optional[Ssid] = None,
                   psk: Optional[Psk] = None) -> list[str]:
    """Split a template and substitute placeholders token-by-token, so SSIDs
    and keys containing spaces stay single arguments."""
    argv = []
    for token in shlex.split(template):
        token = token.replace("{interface}", interface)
        if ssid is not None:
            token = token.replace("{ssid}", ssid.display)
        if psk is not None:
            token = token.replace("{psk}", psk.secret)
        argv.append(token)
    return argv


async def _run(argv: list[str]) -> tuple[int, str, str]:
    try:
        proc = await asyncio.create_subprocess_exec(
            *argv,
            stdout=asyncio.subprocess.PIPE,
            stderr=asyncio.subprocess.PIPE,
        )
    except (FileNotFoundError, PermissionError) as exc:
        raise BackendUnavailable(f"cannot run {argv[0]!r}: {exc}") from exc
    out, err = await proc.communicate()
    return proc.returncode or 0, out.decode(errors="replace"), err.decode(errors="replace")


class SystemBackend:
    """Wireless backend that shells out to the configured system tools."""

    def __init__(self, commands: Optional[CommandTemplates] = None) -> None:
        self.commands = commands or CommandTemplates()

    async def scan(self, interface: str) -> list[AccessPoint]:
        argv = render_command(self.commands.scan, interface)
        code, out, err = await _run(argv)
        if code != 0:
            if "network is down" in err.lower() or "network is down" in out.lower():
                raise InterfaceDown(f"{interface}: {err.strip() or out.strip()}")
            raise BackendUnavailable(
                f"scan command exited {code}: {err.strip() or out.strip()}"
            )
        return parse_scan_output(out)

    async def begin_connect(
        self, interface: str, ssid: Ssid, psk: Optional[Psk]
    ) -> AsyncIterator[ConnectionPhase]:
        if psk is not None:
            yield ConnectionPhase.authenticating()
            template = self.commands.connect_psk
        else:
            template = self.commands.connect_open
        yield ConnectionPhase.connecting()
        try:
            code, _, err = await _run(render_command(template, interface, ssid, psk))
        except BackendUnavailable as exc:
            log.error("connect command unavailable: %s", exc)
            yield ConnectionPhase.failed("backend_error")
            return
        if code == 0:
            yield ConnectionPhase.connected()
        else:
            log.warning("connect command exited %d: %s", code, err.strip())
            yield ConnectionPhase.failed("backend_error")

    async def begin_disconnect(self, interface: str) -> None:
        argv = render_command(self.commands.disconnect, interface)
        code, _, err = await _run(argv)
        if code != 0:
            raise BackendUnavailable(
                f"disconnect command exited {code}: {err.strip()}"
            )
