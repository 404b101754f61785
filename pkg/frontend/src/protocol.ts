/** Wire types for the daemon's JSON event protocol, plus decode/encode. */

export interface WireNetwork {
  ssid: string;
  signal: number;
  secure: boolean;
  bssids: number;
}

export type ConnStateName =
  | "disconnected"
  | "authenticating"
  | "connecting"
  | "connected"
  | "disconnecting";

export interface WireFailure {
  code: string;
  message: string;
  ssid: string;
}

export interface WireConnection {
  state: ConnStateName;
  ssid?: string;
  failure?: WireFailure;
}

export interface HelloMessage {
  type: "hello";
  seq: number;
  version: string;
  networks: WireNetwork[];
  state: WireConnection;
}

export interface NetworksMessage {
  type: "networks";
  seq: number;
  added: WireNetwork[];
  removed: string[];
  changed: WireNetwork[];
}

export interface StateMessage {
  type: "state";
  seq: number;
  state: ConnStateName;
  ssid?: string;
}

export interface ErrorMessage {
  type: "error";
  seq: number;
  code: string;
  message: string;
}

export type ServerMessage = HelloMessage | NetworksMessage | StateMessage | ErrorMessage;

const CONN_STATES = new Set([
  "disconnected",
  "authenticating",
  "connecting",
  "connected",
  "disconnecting",
]);

function isNetwork(value: unknown): value is WireNetwork {
  if (typeof value !== "object" || value === null) return false;
  const v = value as Record<string, unknown>;
  return (
    typeof v.ssid === "string" &&
    v.ssid.length > 0 &&
    typeof v.signal === "number" &&
    v.signal >= 0 &&
    v.signal <= 100 &&
    typeof v.secure === "boolean" &&
    typeof v.bssids === "number"
  );
}

function isNetworkList(value: unknown): value is WireNetwork[] {
  return Array.isArray(value) && value.every(isNetwork);
}

/** Parse one server frame; returns null (never throws) on anything invalid. */
export function decodeServer(text: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const msg = data as Record<string, unknown>;
  if (typeof msg.seq !== "number" || msg.seq < 0) return null;

  switch (msg.type) {
    case "hello": {
      const state = msg.state as Record<string, unknown> | undefined;
      if (
        typeof msg.version !== "string" ||
        !isNetworkList(msg.networks) ||
        typeof state !== "object" ||
        state === null ||
        !CONN_STATES.has(String(state.state))
      ) {
        return null;
      }
      return data as HelloMessage;
    }
    case "networks": {
      if (
        !isNetworkList(msg.added) ||
        !isNetworkList(msg.changed) ||
        !Array.isArray(msg.removed) ||
        !msg.removed.every((s) => typeof s === "string")
      ) {
        return null;
      }
      return data as NetworksMessage;
    }
    case "state": {
      if (!CONN_STATES.has(String(msg.state))) return null;
      if (msg.ssid !== undefined && typeof msg.ssid !== "string") return null;
      return data as StateMessage;
    }
    case "error": {
      if (typeof msg.code !== "string" || typeof msg.message !== "string") return null;
      return data as ErrorMessage;
    }
    default:
      return null;
  }
}

export function encodeConnect(ssid: string, psk?: string): string {
  const payload: Record<string, string> = { type: "connect", ssid };
  if (psk !== undefined) payload.psk = psk;
  return JSON.stringify(payload);
}

export function encodeDisconnect(): string {
  return JSON.stringify({ type: "disconnect" });
}

export function encodeScan(): string {
  return JSON.stringify({ type: "scan" });
}
