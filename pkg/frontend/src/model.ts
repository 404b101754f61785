/** Pure UI state: every change flows through applyServerMessage so the
 * whole client is replayable from a transcript. */

import type {
  ConnStateName,
  ServerMessage,
  WireConnection,
  WireNetwork,
} from "./protocol.js";

export type LinkState = "connecting" | "live" | "lost";

export interface UiError {
  code: string;
  message: string;
}

export interface UiModel {
  /** Ranked network list, same order the server would publish. */
  networks: WireNetwork[];
  connection: WireConnection;
  /** SSID whose password modal is open, if any. */
  pendingSsid: string | null;
  lastError: UiError | null;
  link: LinkState;
  /** Last seq seen on this socket; -1 before the hello. */
  lastSeq: number;
}

export function initialModel(): UiModel {
  return {
    networks: [],
    connection: { state: "disconnected" },
    pendingSsid: null,
    lastError: null,
    link: "connecting",
    lastSeq: -1,
  };
}

const encoder = new TextEncoder();

/** Server ordering: strongest first, ties by ascending SSID bytes (UTF-8). */
export function compareNetworks(a: WireNetwork, b: WireNetwork): number {
  if (a.signal !== b.signal) return b.signal - a.signal;
  const ab = encoder.encode(a.ssid);
  const bb = encoder.encode(b.ssid);
  const n = Math.min(ab.length, bb.length);
  for (let i = 0; i < n; i++) {
    if (ab[i] !== bb[i]) return ab[i] - bb[i];
  }
  return ab.length - bb.length;
}

export function rankNetworks(networks: WireNetwork[]): WireNetwork[] {
  return [...networks].sort(compareNetworks);
}

/** Paper-style 4-bar rendering of a 0-100 signal percentage. */
export function signalBars(percent: number): 1 | 2 | 3 | 4 {
  if (percent >= 75) return 4;
  if (percent >= 50) return 3;
  if (percent >= 25) return 2;
  return 1;
}

function applyDiff(
  networks: WireNetwork[],
  added: WireNetwork[],
  removed: string[],
  changed: WireNetwork[],
): WireNetwork[] {
  const bySsid = new Map(networks.map((n) => [n.ssid, n]));
  for (const ssid of removed) bySsid.delete(ssid);
  for (const view of added) bySsid.set(view.ssid, view);
  for (const view of changed) bySsid.set(view.ssid, view);
  return rankNetworks([...bySsid.values()]);
}

function isTerminalSuccess(state: ConnStateName): boolean {
  return state === "connected";
}

/**
 * Fold one server message into the model. Invalid input never throws; a
 * seq gap flips link to "lost" so the socket layer reconnects and replays
 * from a fresh hello.
 */
export function applyServerMessage(model: UiModel, msg: ServerMessage): UiModel {
  if (msg.type === "hello") {
    // A hello replaces the whole model (fresh session or resync).
    const failure = msg.state.failure;
    return {
      networks: rankNetworks(msg.networks),
      connection: { state: msg.state.state, ssid: msg.state.ssid },
      pendingSsid: null,
      lastError: failure ? { code: failure.code, message: failure.message } : null,
      link: "live",
      lastSeq: msg.seq,
    };
  }

  if (model.lastSeq < 0 || msg.seq !== model.lastSeq + 1) {
    // Either we never completed a hello or the stream has a hole.
    return { ...model, link: "lost" };
  }

  switch (msg.type) {
    case "networks":
      return {
        ...model,
        networks: applyDiff(model.networks, msg.added, msg.removed, msg.changed),
        lastSeq: msg.seq,
      };
    case "state": {
      const next: UiModel = {
        ...model,
        connection: { state: msg.state, ssid: msg.ssid },
        lastSeq: msg.seq,
      };
      if (isTerminalSuccess(msg.state)) {
        // Success closes the password modal; failures keep it open so the
        // user can fix the password and retry.
        next.pendingSsid = null;
        next.lastError = null;
      }
      return next;
    }
    case "error":
      return { ...model, lastError: { code: msg.code, message: msg.message }, lastSeq: msg.seq };
  }
}

// -- local (user-intent) transitions ---------------------------------------

export function openModal(model: UiModel, ssid: string): UiModel {
  return { ...model, pendingSsid: ssid, lastError: null };
}

export function closeModal(model: UiModel): UiModel {
  return { ...model, pendingSsid: null, lastError: null };
}

export function markLink(model: UiModel, link: LinkState): UiModel {
  return { ...model, link };
}
