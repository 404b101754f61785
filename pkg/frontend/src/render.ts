/** DOM rendering. The whole view is rebuilt from the model on every change;
 * the password field is the single exception, its value lives only in the
 * input element and is carried across rebuilds by hand. */

import { signalBars, type UiModel } from "./model.js";
import type { WireNetwork } from "./protocol.js";

export interface Intents {
  tapNetwork(ssid: string): void;
  submitPassword(ssid: string, psk: string): void;
  cancelModal(): void;
  disconnect(): void;
  rescan(): void;
}

const BUSY_LABELS: Record<string, string> = {
  authenticating: "Authenticating…",
  connecting: "Connecting…",
  disconnecting: "Disconnecting…",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderBars(percent: number): HTMLElement {
  const bars = el("span", "bars");
  bars.setAttribute("aria-label", `signal ${percent}%`);
  const lit = signalBars(percent);
  for (let i = 1; i <= 4; i++) {
    bars.appendChild(el("i", i <= lit ? "bar on" : "bar"));
  }
  return bars;
}

function renderRow(model: UiModel, network: WireNetwork, intents: Intents): HTMLElement {
  const live = model.link === "live";
  const conn = model.connection;
  const isThisRow = conn.ssid === network.ssid;
  const connectedHere = isThisRow && conn.state === "connected";
  const busyHere = isThisRow && conn.state in BUSY_LABELS;

  const row = el("li", "row");
  row.dataset.ssid = network.ssid;

  const main = el("button", "row-main");
  main.type = "button";
  main.disabled = !live || connectedHere;
  main.appendChild(renderBars(network.signal));
  const label = el("span", "ssid", network.ssid);
  main.appendChild(label);
  if (network.secure) {
    const lock = el("span", "lock", "\u{1F512}");
    lock.setAttribute("aria-label", "password protected");
    main.appendChild(lock);
  }
  if (connectedHere) {
    main.appendChild(el("span", "badge", "Connected"));
  } else if (busyHere) {
    main.appendChild(el("span", "busy", BUSY_LABELS[conn.state]));
  }
  main.addEventListener("click", () => intents.tapNetwork(network.ssid));
  row.appendChild(main);

  if (connectedHere) {
    const btn = el("button", "disconnect", "Disconnect");
    btn.type = "button";
    btn.disabled = !live;
    btn.addEventListener("click", () => intents.disconnect());
    row.appendChild(btn);
  }
  return row;
}

function renderModal(model: UiModel, intents: Intents, savedPsk: string): HTMLElement {
  const ssid = model.pendingSsid as string;
  const conn = model.connection;
  const attemptBusy =
    conn.ssid === ssid && (conn.state === "authenticating" || conn.state === "connecting");

  const backdrop = el("div", "modal-backdrop");
  const modal = el("div", "modal");
  modal.setAttribute("role", "dialog");

  const title = el("h2", "modal-title");
  title.appendChild(el("span", undefined, "Connect to "));
  title.appendChild(el("span", "modal-ssid", ssid));
  modal.appendChild(title);

  if (model.lastError) {
    modal.appendChild(el("p", "modal-error", model.lastError.message));
  }

  const input = el("input", "psk-input");
  input.id = "psk-input";
  input.type = "password";
  input.placeholder = "Password";
  input.autocomplete = "off";
  input.value = savedPsk;
  input.disabled = attemptBusy;
  modal.appendChild(input);

  const actions = el("div", "modal-actions");
  const cancel = el("button", "modal-cancel", "Cancel");
  cancel.type = "button";
  cancel.addEventListener("click", () => intents.cancelModal());
  actions.appendChild(cancel);

  const submit = el(
    "button",
    "modal-connect",
    attemptBusy ? BUSY_LABELS[conn.state] : "Connect",
  );
  submit.type = "button";
  submit.disabled = attemptBusy || model.link !== "live";
  const doSubmit = () => {
    if (input.value.length > 0) intents.submitPassword(ssid, input.value);
  };
  submit.addEventListener("click", doSubmit);
  input.addEventListener("keydown", (ev) => {
    if ((ev as KeyboardEvent).key === "Enter") doSubmit();
  });
  actions.appendChild(submit);
  modal.appendChild(actions);
  backdrop.appendChild(modal);
  return backdrop;
}

export function render(root: HTMLElement, model: UiModel, intents: Intents): void {
  // Keep the typed password across rebuilds; it never touches the DOM tree.
  const oldInput = root.querySelector<HTMLInputElement>("#psk-input");
  const savedPsk = oldInput?.value ?? "";
  const hadFocus = oldInput !== null && document.activeElement === oldInput;

  root.textContent = "";

  const topbar = el("header", "topbar");
  topbar.appendChild(el("h1", "title", "Wi‑Fi"));
  topbar.appendChild(el("span", `link-pill ${model.link}`, model.link));
  const refresh = el("button", "refresh", "⟳");
  refresh.type = "button";
  refresh.setAttribute("aria-label", "Rescan");
  refresh.disabled = model.link !== "live";
  refresh.addEventListener("click", () => intents.rescan());
  topbar.appendChild(refresh);
  root.appendChild(topbar);

  const list = el("ul", "network-list");
  for (const network of model.networks) {
    list.appendChild(renderRow(model, network, intents));
  }
  if (model.networks.length === 0) {
    list.appendChild(el("li", "empty", "No networks yet"));
  }
  root.appendChild(list);

  if (model.lastError && model.pendingSsid === null) {
    root.appendChild(el("p", "error-banner", model.lastError.message));
  }

  if (model.pendingSsid !== null) {
    root.appendChild(renderModal(model, intents, savedPsk));
    if (hadFocus) {
      root.querySelector<HTMLInputElement>("#psk-input")?.focus();
    }
  }
}
