import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { describe, expect, test } from "vitest";

import {
  applyServerMessage,
  compareNetworks,
  initialModel,
  openModal,
  rankNetworks,
  signalBars,
  type UiModel,
} from "../src/model.js";
import { decodeServer, type ServerMessage, type WireNetwork } from "../src/protocol.js";

const FIXTURE = fileURLToPath(
  new URL("../../tests/fixtures/ranking_cases.json", import.meta.url),
);

interface RankCase {
  input: WireNetwork[];
  ranked: string[];
}

const cases: RankCase[] = JSON.parse(readFileSync(FIXTURE, "utf-8"));

function hello(networks: WireNetwork[], seq = 0, state = "disconnected"): ServerMessage {
  return {
    type: "hello",
    seq,
    version: "1",
    networks,
    state: { state: state as never },
  };
}

function net(ssid: string, signal = 50, secure = false): WireNetwork {
  return { ssid, signal, secure, bssids: 1 };
}

describe("ranking matches the server comparator (shared fixtures)", () => {
  test("fixture file is non-trivial", () => {
    expect(cases.length).toBeGreaterThanOrEqual(20);
  });

  test("rankNetworks reproduces every fixture ordering", () => {
    for (const c of cases) {
      expect(rankNetworks(c.input).map((n) => n.ssid)).toEqual(c.ranked);
    }
  });

  test("diff application re-ranks to the fixture ordering", () => {
    for (const c of cases) {
      if (c.input.length < 2) continue;
      const half = Math.floor(c.input.length / 2);
      let model = applyServerMessage(initialModel(), hello(c.input.slice(0, half)));
      model = applyServerMessage(model, {
        type: "networks",
        seq: 1,
        added: c.input.slice(half),
        removed: [],
        changed: [],
      });
      expect(model.networks.map((n) => n.ssid)).toEqual(c.ranked);
    }
  });

  test("multi-byte names order by UTF-8 bytes", () => {
    expect(compareNetworks(net("zz"), net("éa"))).toBeLessThan(0);
  });
});

describe("signal bars", () => {
  test.each([
    [0, 1],
    [24, 1],
    [25, 2],
    [49, 2],
    [50, 3],
    [74, 3],
    [75, 4],
    [100, 4],
  ])("%i%% -> %i bars", (percent, bars) => {
    expect(signalBars(percent)).toBe(bars);
  });
});

describe("applyServerMessage", () => {
  test("hello replaces the whole model", () => {
    let model: UiModel = {
      networks: [net("stale")],
      connection: { state: "connected", ssid: "stale" },
      pendingSsid: "stale",
      lastError: { code: "busy", message: "busy" },
      link: "lost",
      lastSeq: 41,
    };
    model = applyServerMessage(model, hello([net("fresh")], 0, "disconnected"));
    expect(model.networks.map((n) => n.ssid)).toEqual(["fresh"]);
    expect(model.connection.state).toBe("disconnected");
    expect(model.pendingSsid).toBeNull();
    expect(model.lastError).toBeNull();
    expect(model.link).toBe("live");
    expect(model.lastSeq).toBe(0);
  });

  test("hello surfaces a retained failure", () => {
    const model = applyServerMessage(initialModel(), {
      type: "hello",
      seq: 0,
      version: "1",
      networks: [],
      state: {
        state: "disconnected",
        failure: { code: "auth_failed", message: "Password Incorrect", ssid: "REDMI" },
      },
    });
    expect(model.lastError).toEqual({ code: "auth_failed", message: "Password Incorrect" });
  });

  test("networks diff applies adds, removes, changes", () => {
    let model = applyServerMessage(
      initialModel(),
      hello([net("a", 80), net("b", 60), net("c", 40)]),
    );
    model = applyServerMessage(model, {
      type: "networks",
      seq: 1,
      added: [net("d", 90)],
      removed: ["b"],
      changed: [net("c", 100)],
    });
    expect(model.networks.map((n) => n.ssid)).toEqual(["c", "d", "a"]);
  });

  test("seq gap flips link to lost without corrupting state", () => {
    let model = applyServerMessage(initialModel(), hello([net("a")]));
    model = applyServerMessage(model, { type: "state", seq: 5, state: "connecting", ssid: "a" });
    expect(model.link).toBe("lost");
    expect(model.connection.state).toBe("disconnected");
    expect(model.networks.map((n) => n.ssid)).toEqual(["a"]);
  });

  test("messages before any hello only mark the link lost", () => {
    const model = applyServerMessage(initialModel(), {
      type: "state",
      seq: 0,
      state: "connected",
      ssid: "x",
    });
    expect(model.link).toBe("lost");
    expect(model.connection.state).toBe("disconnected");
  });

  test("connected closes the modal and clears errors", () => {
    let model = applyServerMessage(initialModel(), hello([net("a", 50, true)]));
    model = openModal(model, "a");
    model = applyServerMessage(model, {
      type: "state",
      seq: 1,
      state: "authenticating",
      ssid: "a",
    });
    expect(model.pendingSsid).toBe("a");
    model = applyServerMessage(model, { type: "state", seq: 2, state: "connecting", ssid: "a" });
    model = applyServerMessage(model, { type: "state", seq: 3, state: "connected", ssid: "a" });
    expect(model.pendingSsid).toBeNull();
    expect(model.lastError).toBeNull();
    expect(model.connection).toEqual({ state: "connected", ssid: "a" });
  });

  test("auth failure keeps the modal open with the message for retry", () => {
    let model = applyServerMessage(initialModel(), hello([net("a", 50, true)]));
    model = openModal(model, "a");
    model = applyServerMessage(model, {
      type: "state",
      seq: 1,
      state: "authenticating",
      ssid: "a",
    });
    model = applyServerMessage(model, { type: "state", seq: 2, state: "disconnected" });
    model = applyServerMessage(model, {
      type: "error",
      seq: 3,
      code: "auth_failed",
      message: "Password Incorrect",
    });
    expect(model.pendingSsid).toBe("a");
    expect(model.lastError?.message).toBe("Password Incorrect");
  });
});

describe("decodeServer", () => {
  test.each([
    "not json",
    "[1,2]",
    '{"type":"hello","seq":0}',
    '{"type":"state","seq":-1,"state":"connected"}',
    '{"type":"state","seq":0,"state":"floating"}',
    '{"type":"networks","seq":0,"added":[{"ssid":"x"}],"removed":[],"changed":[]}',
    '{"type":"surprise","seq":0}',
  ])("rejects %s", (text) => {
    expect(decodeServer(text)).toBeNull();
  });

  test("accepts every well-formed shape", () => {
    expect(decodeServer('{"type":"state","seq":4,"state":"connected","ssid":"x"}')).toEqual({
      type: "state",
      seq: 4,
      state: "connected",
      ssid: "x",
    });
    expect(
      decodeServer('{"type":"error","seq":1,"code":"busy","message":"Busy"}'),
    ).toMatchObject({ code: "busy" });
  });
});

describe("replay correctness", () => {
  test("any transcript prefix ending in a fresh hello equals hello alone", () => {
    // Seeded pseudo-random message soup; the trailing hello must wipe it all.
    let seed = 1234567;
    const rand = () => {
      seed = (seed * 1103515245 + 12345) % 2147483648;
      return seed / 2147483648;
    };
    for (let round = 0; round < 50; round++) {
      const prefixLen = Math.floor(rand() * 20);
      let model = initialModel();
      let seq = 0;
      model = applyServerMessage(model, hello([net("start", 70)], seq++));
      for (let i = 0; i < prefixLen; i++) {
        const kind = rand();
        let msg: ServerMessage;
        if (kind < 0.4) {
          msg = {
            type: "networks",
            seq: seq++,
            added: [net(`n${Math.floor(rand() * 6)}`, Math.floor(rand() * 101))],
            removed: rand() < 0.3 ? ["start"] : [],
            changed: [],
          };
        } else if (kind < 0.7) {
          msg = { type: "state", seq: seq++, state: "connecting", ssid: "start" };
        } else {
          msg = { type: "error", seq: seq++, code: "busy", message: "Busy" };
        }
        model = applyServerMessage(model, msg);
      }
      const freshHello = hello([net("final", 42, true)], 0, "disconnected");
      const replayed = applyServerMessage(model, freshHello);
      const direct = applyServerMessage(initialModel(), freshHello);
      expect(replayed).toEqual(direct);
    }
  });
});
