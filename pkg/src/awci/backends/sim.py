"""Deterministic wireless simulator.

Scan results are a pure function of (environment, virtual time), so every
lifecycle scenario is reproducible on any machine with no radio hardware.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import AsyncIterator, Optional

from awci.backends.base import ConnectionPhase, InterfaceDown
from awci.clock import Clock, MonotonicClock
from awci.model import AccessPoint, Psk, Security, Ssid, ValidationError, validate_ssid

DBM_FLOOR = -100
DBM_CEIL = -10


class ParseError(ValueError):
    """Environment file is not valid JSON or misses required fields."""


class InvariantViolation(ValueError):
    """Environment file parsed but violates a simulator invariant."""


@dataclass(frozen=True)
class SignalDrift:
    """Sinusoidal signal wobble: deterministic in virtual time."""

    period_ms: int
    amplitude_db: int

    def __post_init__(self) -> None:
        if self.period_ms <= 0:
            raise InvariantViolation("signal_drift.period_ms must be positive")


@dataclass(frozen=True)
class SimAccessPoint:
    """One simulated BSS with a visibility window and optional drift."""

    ssid: Ssid
    bssid: str
    signal_dbm: int
    secure: bool
    channel: int
    appear_at_ms: int = 0
    disappear_at_ms: Optional[int] = None
    signal_drift: Optional[SignalDrift] = None

    def __post_init__(self) -> None:
        if self.appear_at_ms < 0:
            raise InvariantViolation(f"appear_at_ms must be >= 0: {self.appear_at_ms}")
        if self.disappear_at_ms is not None and self.disappear_at_ms <= self.appear_at_ms:
            raise InvariantViolation(
                f"disappear_at_ms ({self.disappear_at_ms}) must be greater than "
                f"appear_at_ms ({self.appear_at_ms})"
            )
        if not DBM_FLOOR <= self.signal_dbm <= DBM_CEIL:
            raise InvariantViolation(f"signal_dbm out of range: {self.signal_dbm}")

    def visible_at(self, t_ms: int) -> bool:
        if t_ms < self.appear_at_ms:
            return False
        return self.disappear_at_ms is None or t_ms < self.disappear_at_ms

    def effective_dbm(self, t_ms: int) -> int:
        dbm = self.signal_dbm
        if self.signal_drift is not None:
            drift = self.signal_drift
            dbm += round(drift.amplitude_db * math.sin(2 * math.pi * t_ms / drift.period_ms))
        return max(DBM_FLOOR, min(DBM_CEIL, dbm))

    def as_access_point(self, t_ms: int) -> AccessPoint:
        return AccessPoint(
            ssid=self.ssid,
            bssid=self.bssid,
            signal_dbm=self.effective_dbm(t_ms),
            security=Security.PSK if self.secure else Security.OPEN,
            channel=self.channel,
        )


@dataclass(frozen=True)
class SimEnvironment:
    """The whole simulated radio neighborhood plus timing knobs."""

    interface_name: str
    aps: tuple[SimAccessPoint, ...]
    auth: dict[Ssid, Psk] = field(default_factory=dict)
    auth_delay_ms: int = 0
    connect_delay_ms: int = 0
    disconnect_delay_ms: int = 0

    def __post_init__(self) -> None:
        for delay in (self.auth_delay_ms, self.connect_delay_ms, self.disconnect_delay_ms):
            if delay < 0:
                raise InvariantViolation("delays must be non-negative")
        for ap in self.aps:
            if ap.secure and ap.ssid not in self.auth:
                raise InvariantViolation(
                    f"protected network {ap.ssid.display!r} has no auth entry"
                )


def _require(obj: dict, key: str, kind: type, where: str):
    if key not in obj:
        raise ParseError(f"{where}: missing required field {key!r}")
    value = obj[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise ParseError(f"{where}: field {key!r} must be {kind.__name__}")
    return value


def _optional_int(obj: dict, key: str, where: str, default: Optional[int]) -> Optional[int]:
    if key not in obj:
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: field {key!r} must be an integer")
    return value


def parse_environment(data: dict) -> SimEnvironment:
    """Build a SimEnvironment from already-decoded JSON."""
    if not isinstance(data, dict):
        raise ParseError("environment root must be a JSON object")
    interface = _require(data, "interface", str, "environment")
    raw_aps = _require(data, "aps", list, "environment")

    auth: dict[Ssid, Psk] = {}
    for name, secret in data.get("auth", {}).items():
        if not isinstance(secret, str):
            raise ParseError(f"auth[{name!r}]: psk must be a string")
        try:
            auth[validate_ssid(name)] = Psk(secret)
        except ValidationError as exc:
            raise ParseError(f"auth[{name!r}]: {exc}") from exc

    aps = []
    for i, raw in enumerate(raw_aps):
        where = f"aps[{i}]"
        if not isinstance(raw, dict):
            raise ParseError(f"{where}: must be an object")
        try:
            ssid = validate_ssid(_require(raw, "ssid", str, where))
        except ValidationError as exc:
            raise ParseError(f"{where}: bad ssid: {exc}") from exc
        drift = None
        if "signal_drift" in raw:
            draw = raw["signal_drift"]
            if not isinstance(draw, dict):
                raise ParseError(f"{where}: signal_drift must be an object")
            drift = SignalDrift(
                period_ms=_require(draw, "period_ms", int, f"{where}.signal_drift"),
                amplitude_db=_require(draw, "amplitude_db", int, f"{where}.signal_drift"),
            )
        try:
            ap = SimAccessPoint(
                ssid=ssid,
                bssid=_require(raw, "bssid", str, where),
                signal_dbm=_require(raw, "signal_dbm", int, where),
                secure=_require(raw, "secure", bool, where),
                channel=_require(raw, "channel", int, where),
                appear_at_ms=_optional_int(raw, "appear_at_ms", where, 0) or 0,
                disappear_at_ms=_optional_int(raw, "disappear_at_ms", where, None),
                signal_drift=drift,
            )
        except ValueError as exc:
            if isinstance(exc, InvariantViolation):
                raise
            raise ParseError(f"{where}: {exc}") from exc
        aps.append(ap)

    return SimEnvironment(
        interface_name=interface,
        aps=tuple(aps),
        auth=auth,
        auth_delay_ms=_optional_int(data, "auth_delay_ms", "environment", 0) or 0,
        connect_delay_ms=_optional_int(data, "connect_delay_ms", "environment", 0) or 0,
        disconnect_delay_ms=_optional_int(data, "disconnect_delay_ms", "environment", 0) or 0,
    )


def load_environment(path: str | Path) -> SimEnvironment:
    """Load and validate a simulator environment JSON file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read environment file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"environment file {path} is not valid JSON: {exc}") from exc
    return parse_environment(data)


class SimulatedBackend:
    """Wireless backend that answers from a SimEnvironment."""

    def __init__(self, env: SimEnvironment, clock: Optional[Clock] = None) -> None:
        self.env = env
        self.clock: Clock = clock if clock is not None else MonotonicClock()
        self._connected_ssid: Optional[Ssid] = None

    @property
    def connected_ssid(self) -> Optional[Ssid]:
        return self._connected_ssid

    async def scan(self, interface: str) -> list[AccessPoint]:
        if interface != self.env.interface_name:
            raise InterfaceDown(f"no such interface: {interface}")
        t = self.clock.now_ms()
        return [ap.as_access_point(t) for ap in self.env.aps if ap.visible_at(t)]

    async def begin_connect(
        self, interface: str, ssid: Ssid, psk: Optional[Psk]
    ) -> AsyncIterator[ConnectionPhase]:
        if interface != self.env.interface_name:
            yield ConnectionPhase.failed("backend_error")
            return
        target = self._find_visible(ssid)
        if target is None:
            yield ConnectionPhase.failed("not_found")
            return

        if target.secure:
            yield ConnectionPhase.authenticating()
            await self.clock.sleep_ms(self.env.auth_delay_ms)
            expected = self.env.auth.get(ssid)
            if psk is None or expected is None or psk.secret != expected.secret:
                yield ConnectionPhase.failed("auth_failed")
                return

        yield ConnectionPhase.connecting()
        await self.clock.sleep_ms(self.env.connect_delay_ms)
        self._connected_ssid = ssid
        yield ConnectionPhase.connected()

    async def begin_disconnect(self, interface: str) -> None:
        if self._connected_ssid is None:
            return
        await self.clock.sleep_ms(self.env.disconnect_delay_ms)
        self._connected_ssid = None

    def _find_visible(self, ssid: Ssid) -> Optional[SimAccessPoint]:
        t = self.clock.now_ms()
        for ap in self.env.aps:
            if ap.ssid == ssid and ap.visible_at(t):
                return ap
        return None
