/** Wires socket, model, and renderer together. All state changes flow
 * through update(); user intents only ever send protocol messages or open
 * and close the modal locally. */

import {
  applyServerMessage,
  closeModal,
  initialModel,
  markLink,
  openModal,
  type LinkState,
  type UiModel,
} from "./model.js";
import {
  decodeServer,
  encodeConnect,
  encodeDisconnect,
  encodeScan,
} from "./protocol.js";
import { ReconnectingSocket, type WsFactory } from "./socket.js";
import { render, type Intents } from "./render.js";

export interface AppOptions {
  root: HTMLElement;
  url: string;
  wsFactory?: WsFactory;
}

export class App {
  model: UiModel = initialModel();
  readonly socket: ReconnectingSocket;
  private readonly root: HTMLElement;
  private disconnectInFlight = false;

  constructor(options: AppOptions) {
    this.root = options.root;
    this.socket = new ReconnectingSocket(
      options.url,
      {
        onMessage: (text) => this.onServerText(text),
        onLink: (link) => this.onLink(link),
      },
      options.wsFactory,
    );
  }

  start(): void {
    this.update(this.model);
    this.socket.start();
  }

  stop(): void {
    this.socket.stop();
  }

  private update(model: UiModel): void {
    this.model = model;
    render(this.root, model, this.intents);
  }

  private onServerText(text: string): void {
    const msg = decodeServer(text);
    if (msg === null) {
      console.warn("dropping invalid server message", text.slice(0, 120));
      return;
    }
    if (msg.type === "state") this.disconnectInFlight = false;
    const next = applyServerMessage(this.model, msg);
    this.update(next);
    if (next.link === "lost") {
      // Seq gap: resync from a fresh hello.
      this.socket.forceReconnect();
    }
  }

  private onLink(link: LinkState): void {
    this.update(markLink(this.model, link));
  }

  private readonly intents: Intents = {
    tapNetwork: (ssid) => {
      if (this.model.link !== "live") return;
      const network = this.model.networks.find((n) => n.ssid === ssid);
      if (network === undefined) return;
      if (network.secure) {
        this.update(openModal(this.model, ssid));
      } else {
        this.socket.send(encodeConnect(ssid));
      }
    },
    submitPassword: (ssid, psk) => {
      if (this.model.link !== "live") return;
      this.socket.send(encodeConnect(ssid, psk));
    },
    cancelModal: () => {
      this.update(closeModal(this.model));
    },
    disconnect: () => {
      // Single-fire: further taps are ignored until the next state event.
      if (this.disconnectInFlight || this.model.link !== "live") return;
      this.disconnectInFlight = true;
      this.socket.send(encodeDisconnect());
    },
    rescan: () => {
      if (this.model.link !== "live") return;
      this.socket.send(encodeScan());
    },
  };
}
