"""Pure domain model: network identifiers, signal mapping, snapshot
deduplication/ranking, and snapshot diffing.

Everything in this module is immutable and free of I/O, so values can be
shared across tasks without locking.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

SSID_MAX_BYTES = 32
PSK_MIN_CHARS = 8
PSK_MAX_CHARS = 63
PSK_RAW_KEY_CHARS = 64

_BSSID_RE = re.compile(r"^[0-9a-f]{2}(:[0-9a-f]{2}){5}$")
_HEX64_RE = re.compile(r"^[0-9a-fA-F]{64}$")


class ValidationError(ValueError):
    """Input rejected by a domain rule; ``code`` names the failed rule."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class Ssid:
    """A wireless network name: 1-32 raw octets, compared byte-exact."""

    raw: bytes

    def __post_init__(self) -> None:
        if not isinstance(self.raw, bytes):
            raise TypeError("Ssid.raw must be bytes")
        if len(self.raw) == 0:
            raise ValidationError("empty", "SSID must not be empty")
        if len(self.raw) > SSID_MAX_BYTES:
            raise ValidationError(
                "too_long", f"SSID exceeds {SSID_MAX_BYTES} bytes ({len(self.raw)})"
            )

    @property
    def display(self) -> str:
        """UTF-8 text form; invalid sequences become replacement characters."""
        return self.raw.decode("utf-8", errors="replace")

    def __str__(self) -> str:
        return self.display


def validate_ssid(raw: bytes | str) -> Ssid:
    """Validate a raw SSID (text is taken as UTF-8) into an Ssid."""
    data = raw.encode("utf-8") if isinstance(raw, str) else bytes(raw)
    return Ssid(data)


@dataclass(frozen=True, repr=False)
class Psk:
    """Pre-shared key carrier. Redacts itself everywhere it might be printed."""

    secret: str

    def __repr__(self) -> str:
        return "Psk(<redacted>)"

    def __str__(self) -> str:
        return "<redacted>"


def validate_psk(raw: str) -> Psk:
    """Validate a candidate key: 8-63 printable ASCII chars, or 64 hex digits."""
    n = len(raw)
    if n == PSK_RAW_KEY_CHARS:
        if not _HEX64_RE.match(raw):
            raise ValidationError(
                "non_hex_raw_key", "64-character keys must be hexadecimal"
            )
        return Psk(raw)
    if n < PSK_MIN_CHARS:
        raise ValidationError("too_short", f"passphrase shorter than {PSK_MIN_CHARS} characters")
    if n > PSK_MAX_CHARS:
        raise ValidationError("too_long", f"passphrase longer than {PSK_MAX_CHARS} characters")
    if any(not (0x20 <= ord(c) <= 0x7E) for c in raw):
        raise ValidationError("non_printable", "passphrase must be printable ASCII")
    return Psk(raw)


class Security(Enum):
    OPEN = "open"
    PSK = "psk"


@dataclass(frozen=True)
class AccessPoint:
    """One observed BSS, the raw unit a scan produces."""

    ssid: Ssid
    bssid: str
    signal_dbm: int
    security: Security
    channel: int

    def __post_init__(self) -> None:
        if not _BSSID_RE.match(self.bssid):
            raise ValueError(f"BSSID not in canonical form: {self.bssid!r}")
        if not -100 <= self.signal_dbm <= -10:
            raise ValueError(f"signal_dbm out of range [-100, -10]: {self.signal_dbm}")
        if self.channel < 1:
            raise ValueError(f"channel must be positive: {self.channel}")

    @property
    def secure(self) -> bool:
        return self.security is Security.PSK


def signal_percent(dbm: int) -> int:
    """Map dBm to a 0-100 display percentage: clamp(2*(dbm+100), 0, 100)."""
    return max(0, min(100, 2 * (dbm + 100)))


@dataclass(frozen=True)
class NetworkView:
    """Client-facing entry for one SSID, folded over all its BSSes."""

    ssid: Ssid
    signal_percent: int
    secure: bool
    bssid_count: int


def rank_key(view: NetworkView) -> tuple[int, bytes]:
    """Snapshot ordering: strongest first, ties by ascending SSID bytes."""
    return (-view.signal_percent, view.ssid.raw)


@dataclass(frozen=True)
class NetworkSnapshot:
    """Ranked, per-SSID-unique list of networks at one instant."""

    networks: tuple[NetworkView, ...]
    taken_at_ms: int

    def find(self, ssid: Ssid) -> Optional[NetworkView]:
        for view in self.networks:
            if view.ssid == ssid:
                return view
        return None


EMPTY_SNAPSHOT = NetworkSnapshot(networks=(), taken_at_ms=0)


@dataclass(frozen=True)
class NetworkDiff:
    """Change set between two consecutive snapshots; SSIDs are disjoint."""

    added: tuple[NetworkView, ...]
    removed: tuple[Ssid, ...]
    changed: tuple[NetworkView, ...]

    def is_empty(self) -> bool:
        return not (self.added or self.removed or self.changed)


def dedupe_and_rank(aps: Iterable[AccessPoint], taken_at_ms: int = 0) -> NetworkSnapshot:
    """Group BSSes by SSID (strongest BSS wins) and rank the result."""
    groups: dict[bytes, list[AccessPoint]] = {}
    for ap in aps:
        groups.setdefault(ap.ssid.raw, []).append(ap)

    views = []
    for members in groups.values():
        best = min(members, key=lambda ap: (-ap.signal_dbm, ap.bssid))
        views.append(
            NetworkView(
                ssid=best.ssid,
                signal_percent=signal_percent(best.signal_dbm),
                secure=best.secure,
                bssid_count=len(members),
            )
        )
    views.sort(key=rank_key)
    return NetworkSnapshot(networks=tuple(views), taken_at_ms=taken_at_ms)


def diff_snapshots(prev: NetworkSnapshot, next: NetworkSnapshot) -> NetworkDiff:
    """Compute added/removed/changed between two snapshots.

    A network is "changed" when its signal_percent, secure flag, or
    bssid_count differs. Added and changed keep next's ranking order,
    removed keeps prev's order.
    """
    prev_by_ssid = {v.ssid: v for v in prev.networks}
    next_by_ssid = {v.ssid: v for v in next.networks}

    added = tuple(v for v in next.networks if v.ssid not in prev_by_ssid)
    removed = tuple(v.ssid for v in prev.networks if v.ssid not in next_by_ssid)
    changed = tuple(
        v
        for v in next.networks
        if v.ssid in prev_by_ssid and prev_by_ssid[v.ssid] != v
    )
    return NetworkDiff(added=added, removed=removed, changed=changed)
