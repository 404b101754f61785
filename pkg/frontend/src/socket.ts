/** Raw WebSocket wrapper with exponential-backoff reconnect (0.5 s -> 8 s).
 * Every reconnect yields a fresh hello, which resets the whole model. */

export interface SocketHandlers {
  onMessage(text: string): void;
  onLink(link: "connecting" | "live" | "lost"): void;
}

type WsLike = Pick<WebSocket, "send" | "close"> & {
  onopen: ((ev: unknown) => void) | null;
  onclose: ((ev: unknown) => void) | null;
  onerror: ((ev: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  readyState: number;
};

export type WsFactory = (url: string) => WsLike;

const BASE_DELAY_MS = 500;
const MAX_DELAY_MS = 8000;

export class ReconnectingSocket {
  private ws: WsLike | null = null;
  private delay = BASE_DELAY_MS;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private closed = false;
  /** Sockets opened over this object's lifetime (observable in tests). */
  opens = 0;

  constructor(
    private readonly url: string,
    private readonly handlers: SocketHandlers,
    private readonly factory: WsFactory = (url) => new WebSocket(url) as unknown as WsLike,
  ) {}

  start(): void {
    this.connect();
  }

  private connect(): void {
    if (this.closed) return;
    this.handlers.onLink("connecting");
    const ws = this.factory(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.opens += 1;
      this.delay = BASE_DELAY_MS;
      this.handlers.onLink("live");
    };
    ws.onmessage = (ev) => {
      if (typeof ev.data === "string") this.handlers.onMessage(ev.data);
    };
    ws.onerror = () => {
      /* onclose follows and owns the retry */
    };
    ws.onclose = () => {
      if (this.ws !== ws) return;
      this.ws = null;
      if (this.closed) return;
      this.handlers.onLink("lost");
      this.scheduleReconnect();
    };
  }

  private scheduleReconnect(): void {
    if (this.timer !== null) return;
    const wait = this.delay;
    this.delay = Math.min(this.delay * 2, MAX_DELAY_MS);
    this.timer = setTimeout(() => {
      this.timer = null;
      this.connect();
    }, wait);
  }

  /** Drop the current socket and reconnect (used on seq gaps). */
  forceReconnect(): void {
    const ws = this.ws;
    this.ws = null;
    if (ws) {
      try {
        ws.onclose = null;
        ws.close();
      } catch {
        /* already dead */
      }
    }
    this.handlers.onLink("lost");
    this.scheduleReconnect();
  }

  /** Send one frame; false when the link is not open. */
  send(text: string): boolean {
    if (this.ws === null || this.ws.readyState !== 1) return false;
    try {
      this.ws.send(text);
      return true;
    } catch {
      return false;
    }
  }

  stop(): void {
    this.closed = true;
    if (this.timer !== null) clearTimeout(this.timer);
    if (this.ws) {
      try {
        this.ws.close();
      } catch {
        /* ignore */
      }
    }
  }
}
