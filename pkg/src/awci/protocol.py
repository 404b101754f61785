"""JSON wire protocol shared by the gateway, test clients, and tooling.

Server to client (every message carries a per-session seq):
  hello     full snapshot + connection state on join, version "1"
  networks  added/removed/changed network diff
  state     connection state change (ssid omitted when disconnected)
  error     rejection or failure, with a user-facing message

Client to server (no seq): connect, disconnect, scan.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional, Union

from awci.connection import FAILURE_MESSAGES, ConnectionState
from awci.model import (
    NetworkDiff,
    NetworkSnapshot,
    NetworkView,
    Psk,
    Ssid,
    ValidationError,
    validate_ssid,
)

PROTOCOL_VERSION = "1"

SERVER_MESSAGE_TYPES = ("hello", "networks", "state", "error")
CLIENT_MESSAGE_TYPES = ("connect", "disconnect", "scan")


class ProtocolError(ValueError):
    """Message violates the wire schema."""


# ---------------------------------------------------------------------------
# Encoding (payload builders; the gateway injects per-session seq)
# ---------------------------------------------------------------------------


def network_to_wire(view: NetworkView) -> dict[str, Any]:
    return {
        "ssid": view.ssid.display,
        "signal": view.signal_percent,
        "secure": view.secure,
        "bssids": view.bssid_count,
    }


def _state_fields(status: ConnectionState) -> dict[str, Any]:
    fields: dict[str, Any] = {"state": status.state.value}
    if status.ssid is not None:
        fields["ssid"] = status.ssid.display
    if status.failure is not None:
        fields["failure"] = {
            "code": status.failure.reason,
            "message": FAILURE_MESSAGES.get(status.failure.reason, status.failure.reason),
            "ssid": status.failure.ssid.display,
        }
    return fields


def hello_payload(snapshot: NetworkSnapshot, status: ConnectionState) -> dict[str, Any]:
    return {
        "version": PROTOCOL_VERSION,
        "networks": [network_to_wire(v) for v in snapshot.networks],
        "state": _state_fields(status),
    }


def networks_payload(diff: NetworkDiff) -> dict[str, Any]:
    return {
        "added": [network_to_wire(v) for v in diff.added],
        "removed": [s.display for s in diff.removed],
        "changed": [network_to_wire(v) for v in diff.changed],
    }


def state_payload(state_value: str, ssid: Optional[Ssid]) -> dict[str, Any]:
    payload: dict[str, Any] = {"state": state_value}
    if ssid is not None:
        payload["ssid"] = ssid.display
    return payload


def error_payload(code: str, message: str) -> dict[str, Any]:
    return {"code": code, "message": message}


def encode_server(msg_type: str, seq: int, payload: dict[str, Any]) -> str:
    return json.dumps({"type": msg_type, "seq": seq, **payload}, ensure_ascii=False)


# ---------------------------------------------------------------------------
# Decoded message shapes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WireFailure:
    code: str
    message: str
    ssid: str


@dataclass(frozen=True)
class HelloMessage:
    seq: int
    version: str
    networks: tuple[NetworkView, ...]
    state: str
    ssid: Optional[Ssid]
    failure: Optional[WireFailure]


@dataclass(frozen=True)
class NetworksMessage:
    seq: int
    added: tuple[NetworkView, ...]
    removed: tuple[Ssid, ...]
    changed: tuple[NetworkView, ...]


@dataclass(frozen=True)
class StateMessage:
    seq: int
    state: str
    ssid: Optional[Ssid]


@dataclass(frozen=True)
class ErrorMessage:
    seq: int
    code: str
    message: str


ServerMessage = Union[HelloMessage, NetworksMessage, StateMessage, ErrorMessage]


@dataclass(frozen=True)
class ConnectCommand:
    ssid: Ssid
    psk: Optional[Psk]


@dataclass(frozen=True)
class DisconnectCommand:
    pass


@dataclass(frozen=True)
class ScanCommand:
    pass


ClientCommand = Union[ConnectCommand, DisconnectCommand, ScanCommand]


def encode_client(cmd: ClientCommand) -> str:
    if isinstance(cmd, ConnectCommand):
        payload: dict[str, Any] = {"type": "connect", "ssid": cmd.ssid.display}
        if cmd.psk is not None:
            payload["psk"] = cmd.psk.secret
        return json.dumps(payload, ensure_ascii=False)
    if isinstance(cmd, DisconnectCommand):
        return json.dumps({"type": "disconnect"})
    if isinstance(cmd, ScanCommand):
        return json.dumps({"type": "scan"})
    raise TypeError(f"not a client command: {cmd!r}")


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------


def _parse_json_object(text: str) -> dict[str, Any]:
    try:
        data = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ProtocolError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ProtocolError("message must be a JSON object")
    return data


def _field(data: dict, key: str, kind: type, *, where: str = "message"):
    if key not in data:
        raise ProtocolError(f"{where}: missing field {key!r}")
    value = data[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise ProtocolError(f"{where}: field {key!r} must be {kind.__name__}")
    return value


def _decode_ssid(text: str, where: str) -> Ssid:
    try:
        return validate_ssid(text)
    except ValidationError as exc:
        raise ProtocolError(f"{where}: bad ssid: {exc}") from exc


def _decode_network(obj: Any, where: str) -> NetworkView:
    if not isinstance(obj, dict):
        raise ProtocolError(f"{where}: network entry must be an object")
    signal = _field(obj, "signal", int, where=where)
    if not 0 <= signal <= 100:
        raise ProtocolError(f"{where}: signal must be 0-100")
    bssids = _field(obj, "bssids", int, where=where)
    if bssids < 1:
        raise ProtocolError(f"{where}: bssids must be positive")
    return NetworkView(
        ssid=_decode_ssid(_field(obj, "ssid", str, where=where), where),
        signal_percent=signal,
        secure=_field(obj, "secure", bool, where=where),
        bssid_count=bssids,
    )


def _decode_network_list(data: dict, key: str, where: str) -> tuple[NetworkView, ...]:
    raw = _field(data, key, list, where=where)
    return tuple(_decode_network(item, f"{where}.{key}[{i}]") for i, item in enumerate(raw))


def decode_server(text: str) -> ServerMessage:
    data = _parse_json_object(text)
    msg_type = _field(data, "type", str)
    seq = _field(data, "seq", int)
    if seq < 0:
        raise ProtocolError("seq must be non-negative")

    if msg_type == "hello":
        state_obj = _field(data, "state", dict, where="hello")
        ssid_text = state_obj.get("ssid")
        if ssid_text is not None:
            _ensure_str(ssid_text, "hello.state.ssid")
        failure = None
        if "failure" in state_obj:
            fobj = state_obj["failure"]
            if not isinstance(fobj, dict):
                raise ProtocolError("hello.state.failure must be an object")
            failure = WireFailure(
                code=_field(fobj, "code", str, where="hello.state.failure"),
                message=_field(fobj, "message", str, where="hello.state.failure"),
                ssid=_field(fobj, "ssid", str, where="hello.state.failure"),
            )
        return HelloMessage(
            seq=seq,
            version=_field(data, "version", str, where="hello"),
            networks=_decode_network_list(data, "networks", "hello"),
            state=_field(state_obj, "state", str, where="hello.state"),
            ssid=_decode_ssid(ssid_text, "hello.state") if ssid_text is not None else None,
            failure=failure,
        )
    if msg_type == "networks":
        removed_raw = _field(data, "removed", list, where="networks")
        removed = tuple(
            _decode_ssid(_ensure_str(item, f"networks.removed[{i}]"), f"networks.removed[{i}]")
            for i, item in enumerate(removed_raw)
        )
        return NetworksMessage(
            seq=seq,
            added=_decode_network_list(data, "added", "networks"),
            removed=removed,
            changed=_decode_network_list(data, "changed", "networks"),
        )
    if msg_type == "state":
        ssid_text = data.get("ssid")
        if ssid_text is not None:
            _ensure_str(ssid_text, "state.ssid")
        return StateMessage(
            seq=seq,
            state=_field(data, "state", str, where="state"),
            ssid=_decode_ssid(ssid_text, "state") if ssid_text is not None else None,
        )
    if msg_type == "error":
        return ErrorMessage(
            seq=seq,
            code=_field(data, "code", str, where="error"),
            message=_field(data, "message", str, where="error"),
        )
    raise ProtocolError(f"unknown server message type {msg_type!r}")


def _ensure_str(value: Any, where: str) -> str:
    if not isinstance(value, str):
        raise ProtocolError(f"{where}: must be a string")
    return value


def decode_client(text: str) -> ClientCommand:
    data = _parse_json_object(text)
    msg_type = _field(data, "type", str)
    if msg_type == "connect":
        ssid = _decode_ssid(_field(data, "ssid", str, where="connect"), "connect")
        psk: Optional[Psk] = None
        if "psk" in data:
            psk = Psk(_ensure_str(data["psk"], "connect.psk"))
        return ConnectCommand(ssid=ssid, psk=psk)
    if msg_type == "disconnect":
        return DisconnectCommand()
    if msg_type == "scan":
        return ScanCommand()
    raise ProtocolError(f"unknown client message type {msg_type!r}")
