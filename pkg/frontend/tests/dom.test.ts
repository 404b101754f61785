// @vitest-environment jsdom
import { afterEach, beforeEach, describe, expect, test, vi } from "vitest";

import { App } from "../src/app.js";
import type { ServerMessage } from "../src/protocol.js";

class FakeWs {
  static instances: FakeWs[] = [];
  sent: string[] = [];
  readyState = 0;
  onopen: ((ev: unknown) => void) | null = null;
  onclose: ((ev: unknown) => void) | null = null;
  onerror: ((ev: unknown) => void) | null = null;
  onmessage: ((ev: { data: unknown }) => void) | null = null;

  constructor(public url: string) {
    FakeWs.instances.push(this);
  }

  open(): void {
    this.readyState = 1;
    this.onopen?.({});
  }

  fromServer(msg: ServerMessage): void {
    this.onmessage?.({ data: JSON.stringify(msg) });
  }

  dropFromServer(): void {
    this.readyState = 3;
    this.onclose?.({});
  }

  send(text: string): void {
    this.sent.push(text);
  }

  close(): void {
    this.readyState = 3;
  }
}

const NETWORKS = [
  { ssid: "REDMI", signal: 90, secure: true, bssids: 2 },
  { ssid: "CoffeeShop", signal: 60, secure: false, bssids: 1 },
  { ssid: "Attic", signal: 22, secure: true, bssids: 1 },
];

let root: HTMLElement;
let app: App;
let seq: number;

function ws(): FakeWs {
  return FakeWs.instances[FakeWs.instances.length - 1];
}

function serverHello(): void {
  seq = 0;
  ws().fromServer({
    type: "hello",
    seq: seq++,
    version: "1",
    networks: NETWORKS,
    state: { state: "disconnected" },
  });
}

function serverState(state: string, ssid?: string): void {
  ws().fromServer({ type: "state", seq: seq++, state: state as never, ssid });
}

function serverError(code: string, message: string): void {
  ws().fromServer({ type: "error", seq: seq++, code, message });
}

function row(ssid: string): HTMLElement {
  const node = root.querySelector(`li.row[data-ssid="${ssid}"]`);
  if (!node) throw new Error(`no row for ${ssid}`);
  return node as HTMLElement;
}

function tapRow(ssid: string): void {
  (row(ssid).querySelector(".row-main") as HTMLButtonElement).click();
}

function pskInput(): HTMLInputElement {
  return root.querySelector("#psk-input") as HTMLInputElement;
}

beforeEach(() => {
  FakeWs.instances = [];
  document.body.innerHTML = '<div id="app"></div>';
  root = document.getElementById("app") as HTMLElement;
  app = new App({ root, url: "ws://test/ws", wsFactory: (url) => new FakeWs(url) });
  app.start();
  ws().open();
  serverHello();
});

afterEach(() => {
  app.stop();
  vi.useRealTimers();
});

describe("network list rendering", () => {
  test("three rows with correct bar counts and lock icons", () => {
    const rows = root.querySelectorAll("li.row");
    expect(rows).toHaveLength(3);
    expect([...rows].map((r) => (r as HTMLElement).dataset.ssid)).toEqual([
      "REDMI",
      "CoffeeShop",
      "Attic",
    ]);
    expect(row("REDMI").querySelectorAll(".bar.on")).toHaveLength(4);
    expect(row("CoffeeShop").querySelectorAll(".bar.on")).toHaveLength(3);
    expect(row("Attic").querySelectorAll(".bar.on")).toHaveLength(1);
    expect(row("REDMI").querySelector(".lock")).not.toBeNull();
    expect(row("Attic").querySelector(".lock")).not.toBeNull();
    expect(row("CoffeeShop").querySelector(".lock")).toBeNull();
  });

  test("touch targets are at least 48px per the stylesheet", async () => {
    const { readFileSync } = await import("node:fs");
    const { resolve } = await import("node:path");
    const css = readFileSync(resolve(process.cwd(), "styles.css"), "utf-8");
    expect(css).toMatch(/button\s*{[^}]*min-height:\s*48px/s);
    expect(css).toMatch(/\.psk-input\s*{[^}]*min-height:\s*48px/s);
  });
});

describe("user intents", () => {
  test("tapping an open network sends connect without psk and no modal", () => {
    tapRow("CoffeeShop");
    expect(ws().sent).toEqual(['{"type":"connect","ssid":"CoffeeShop"}']);
    expect(root.querySelector(".modal")).toBeNull();
  });

  test("tapping a secure network opens the modal without sending", () => {
    tapRow("REDMI");
    expect(ws().sent).toEqual([]);
    expect(root.querySelector(".modal-ssid")?.textContent).toBe("REDMI");
    expect(pskInput().type).toBe("password");
  });

  test("modal submit sends connect with psk; psk never lands in the DOM", () => {
    tapRow("REDMI");
    pskInput().value = "pass1234";
    (root.querySelector(".modal-connect") as HTMLButtonElement).click();
    expect(ws().sent).toEqual(['{"type":"connect","ssid":"REDMI","psk":"pass1234"}']);
    serverState("authenticating", "REDMI");
    expect(document.body.innerHTML).not.toContain("pass1234");
    expect(pskInput().value).toBe("pass1234"); // retained for retry
  });

  test("wrong password shows Password Incorrect in the modal and keeps input", () => {
    tapRow("REDMI");
    pskInput().value = "wrong-one";
    (root.querySelector(".modal-connect") as HTMLButtonElement).click();
    serverState("authenticating", "REDMI");
    serverState("disconnected");
    serverError("auth_failed", "Password Incorrect");
    expect(root.querySelector(".modal-error")?.textContent).toBe("Password Incorrect");
    expect(pskInput().value).toBe("wrong-one");
  });

  test("connected closes the modal and shows badge plus Disconnect", () => {
    tapRow("REDMI");
    pskInput().value = "pass1234";
    (root.querySelector(".modal-connect") as HTMLButtonElement).click();
    serverState("authenticating", "REDMI");
    serverState("connecting", "REDMI");
    serverState("connected", "REDMI");
    expect(root.querySelector(".modal")).toBeNull();
    expect(row("REDMI").querySelector(".badge")?.textContent).toBe("Connected");
    expect(row("REDMI").querySelector("button.disconnect")).not.toBeNull();
  });

  test("disconnect fires exactly once until the next state event", () => {
    serverState("connected", "CoffeeShop");
    const btn = row("CoffeeShop").querySelector("button.disconnect") as HTMLButtonElement;
    btn.click();
    btn.click();
    btn.click();
    expect(ws().sent).toEqual(['{"type":"disconnect"}']);
    serverState("disconnecting", "CoffeeShop");
    serverState("disconnected");
    serverState("connected", "CoffeeShop");
    (row("CoffeeShop").querySelector("button.disconnect") as HTMLButtonElement).click();
    expect(ws().sent).toHaveLength(2);
  });

  test("refresh button sends a scan nudge", () => {
    (root.querySelector("button.refresh") as HTMLButtonElement).click();
    expect(ws().sent).toEqual(['{"type":"scan"}']);
  });
});

describe("link loss and resync", () => {
  test("lost link disables controls and reconnect replays from hello", () => {
    vi.useFakeTimers();
    ws().dropFromServer();
    expect(root.querySelector(".link-pill.lost")).not.toBeNull();
    expect((row("REDMI").querySelector(".row-main") as HTMLButtonElement).disabled).toBe(true);

    vi.advanceTimersByTime(600); // first backoff step is 500 ms
    expect(FakeWs.instances).toHaveLength(2);
    ws().open();
    serverHello();
    expect(root.querySelector(".link-pill.live")).not.toBeNull();
    expect(root.querySelectorAll("li.row")).toHaveLength(3);
  });

  test("a seq gap forces a reconnect", () => {
    vi.useFakeTimers();
    ws().fromServer({ type: "state", seq: 7, state: "connecting", ssid: "REDMI" });
    expect(root.querySelector(".link-pill.lost")).not.toBeNull();
    vi.advanceTimersByTime(600);
    expect(FakeWs.instances).toHaveLength(2);
  });

  test("invalid frames are dropped with a console diagnostic", () => {
    const warn = vi.spyOn(console, "warn").mockImplementation(() => {});
    const before = app.model;
    ws().onmessage?.({ data: "certainly not json" });
    expect(app.model).toBe(before);
    expect(warn).toHaveBeenCalled();
    warn.mockRestore();
  });
});
