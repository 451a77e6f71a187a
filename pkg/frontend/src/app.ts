// Wires the canvas, the pointer loop and the WebSocket together. All
// recognition happens server-side; this file only forwards pointer
// positions and draws whatever the last update said.

import { ClientMessage, SessionUpdate, parseServerMessage } from "./protocol.js";
import {
  Draw2D,
  PanelRefs,
  ViewState,
  renderPanels,
  renderScene,
} from "./view.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: (() => void) | null;
  onerror: (() => void) | null;
}

export interface AppOptions {
  url: string;
  width?: number;
  height?: number;
  // Send every Nth pointermove; pointerdown always sends. Shown in the UI.
  decimation?: number;
  config?: Record<string, number>;
  reconnectDelayMs?: number;
  socketFactory?: (url: string) => SocketLike;
  contextFor?: (canvas: HTMLCanvasElement) => Draw2D;
}

export const DEFAULT_DECIMATION = 3;

const TEMPLATE = `
  <div class="sim">
    <div class="toolbar">
      <span class="badge" data-ref="status"></span>
      <span class="badge" data-ref="phase"></span>
      <span class="stat">frame <b data-ref="frame">0</b></span>
      <span class="stat">path <b data-ref="pathLength">0</b> pts</span>
      <span class="stat">sampling <b data-ref="sampling"></b></span>
      <button type="button" data-ref="reset">reset</button>
    </div>
    <canvas data-ref="canvas"></canvas>
    <div class="panel">
      <div class="reading">
        <span class="letter" data-ref="letter"></span>
        <span class="scores" data-ref="scores"></span>
      </div>
      <div class="reading">
        <span class="led off" data-ref="led"></span>
        <span data-ref="ledLabel"></span>
      </div>
      <div class="message" data-ref="error"></div>
    </div>
  </div>
`;

function grab(root: HTMLElement, name: string): HTMLElement {
  const el = root.querySelector<HTMLElement>(`[data-ref="${name}"]`);
  if (!el) throw new Error(`template is missing [data-ref="${name}"]`);
  return el;
}

export class WandApp {
  readonly canvas: HTMLCanvasElement;
  readonly state: ViewState;
  readonly stats = { movesSeen: 0, pointerSent: 0 };

  private readonly url: string;
  private readonly config?: Record<string, number>;
  private readonly decimation: number;
  private readonly reconnectDelayMs: number;
  private readonly makeSocket: (url: string) => SocketLike;
  private readonly ctx: Draw2D;
  private readonly refs: PanelRefs;

  private socket: SocketLike | null = null;
  private retryTimer: ReturnType<typeof setTimeout> | null = null;
  private attempts = 0;
  private dragging = false;
  private disposed = false;

  constructor(root: HTMLElement, options: AppOptions) {
    this.url = options.url;
    this.config = options.config;
    this.decimation = options.decimation ?? DEFAULT_DECIMATION;
    this.reconnectDelayMs = options.reconnectDelayMs ?? 1000;
    this.makeSocket = options.socketFactory
      ?? ((url) => new WebSocket(url) as unknown as SocketLike);

    root.innerHTML = TEMPLATE;
    this.canvas = grab(root, "canvas") as HTMLCanvasElement;
    this.canvas.width = options.width ?? 320;
    this.canvas.height = options.height ?? 240;
    const contextFor = options.contextFor
      ?? ((canvas: HTMLCanvasElement) => {
        const ctx = canvas.getContext("2d");
        if (!ctx) throw new Error("canvas has no 2d context");
        return ctx as Draw2D;
      });
    this.ctx = contextFor(this.canvas);

    this.refs = {
      status: grab(root, "status"),
      phase: grab(root, "phase"),
      frame: grab(root, "frame"),
      pathLength: grab(root, "pathLength"),
      sampling: grab(root, "sampling"),
      letter: grab(root, "letter"),
      scores: grab(root, "scores"),
      led: grab(root, "led"),
      ledLabel: grab(root, "ledLabel"),
      error: grab(root, "error"),
    };
    this.state = {
      connection: "connecting",
      update: null,
      prediction: null,
      pins: null,
      lastError: null,
      decimation: this.decimation,
    };

    grab(root, "reset").addEventListener("click", () => {
      this.send({ type: "reset" });
    });
    this.canvas.addEventListener("pointerdown", (ev) => this.onDown(ev));
    this.canvas.addEventListener("pointermove", (ev) => this.onMove(ev));
    this.canvas.addEventListener("pointerup", () => this.onUp());
    this.canvas.addEventListener("pointerleave", () => this.onUp());
    this.canvas.addEventListener("pointercancel", () => this.onUp());

    this.render();
    this.connect();
  }

  private connect() {
    this.retryTimer = null;
    const socket = this.makeSocket(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.attempts = 0;
      this.state.connection = "connected";
      const hello: ClientMessage = {
        type: "session_start",
        width: this.canvas.width,
        height: this.canvas.height,
      };
      if (this.config) hello.config = this.config;
      this.sendRaw(hello);
      this.render();
    };
    socket.onmessage = (ev) => {
      const text = typeof ev.data === "string" ? ev.data : String(ev.data);
      this.receive(text);
    };
    socket.onerror = () => {
      // onclose follows; the reconnect path owns the state change.
    };
    socket.onclose = () => {
      if (this.socket !== socket) return;
      this.socket = null;
      this.dragging = false;
      if (this.disposed) {
        this.state.connection = "closed";
      } else {
        this.state.connection = "reconnecting";
        const delay = Math.min(this.reconnectDelayMs * 2 ** this.attempts, 10_000);
        this.attempts += 1;
        this.retryTimer = setTimeout(() => this.connect(), delay);
      }
      this.render();
    };
  }

  private receive(text: string) {
    let msg;
    try {
      msg = parseServerMessage(text);
    } catch (err) {
      this.state.lastError = String(err instanceof Error ? err.message : err);
      this.render();
      return;
    }
    if (msg.type === "error") {
      this.state.lastError = `${msg.code}: ${msg.message}`;
    } else {
      this.apply(msg);
    }
    this.render();
  }

  private apply(update: SessionUpdate) {
    this.state.update = update;
    // prediction/pins arrive once per gesture; keep the latest seen.
    if (update.prediction) this.state.prediction = update.prediction;
    if (update.pins) this.state.pins = update.pins;
  }

  private render() {
    if (this.state.update) renderScene(this.ctx, this.state.update);
    renderPanels(this.refs, this.state);
  }

  private sendRaw(msg: ClientMessage) {
    this.socket?.send(JSON.stringify(msg));
  }

  private send(msg: ClientMessage) {
    if (this.state.connection !== "connected" || !this.socket) return;
    if (msg.type === "pointer") this.stats.pointerSent += 1;
    this.sendRaw(msg);
  }

  private canvasPoint(ev: { clientX: number; clientY: number }) {
    const rect = this.canvas.getBoundingClientRect();
    const sx = rect.width > 0 ? this.canvas.width / rect.width : 1;
    const sy = rect.height > 0 ? this.canvas.height / rect.height : 1;
    const x = (ev.clientX - rect.left) * sx;
    const y = (ev.clientY - rect.top) * sy;
    return {
      x: Math.min(Math.max(x, 0), this.canvas.width - 1),
      y: Math.min(Math.max(y, 0), this.canvas.height - 1),
    };
  }

  private onDown(ev: { clientX: number; clientY: number }) {
    if (this.state.connection !== "connected") return;
    this.dragging = true;
    this.stats.movesSeen = 0;
    const { x, y } = this.canvasPoint(ev);
    this.send({ type: "pointer", x, y });
  }

  private onMove(ev: { clientX: number; clientY: number }) {
    if (!this.dragging) return;
    this.stats.movesSeen += 1;
    if (this.stats.movesSeen % this.decimation !== 0) return;
    const { x, y } = this.canvasPoint(ev);
    this.send({ type: "pointer", x, y });
  }

  private onUp() {
    if (!this.dragging) return;
    this.dragging = false;
    this.send({ type: "pointer_absent" });
  }

  dispose() {
    this.disposed = true;
    if (this.retryTimer !== null) clearTimeout(this.retryTimer);
    this.socket?.close();
    this.state.connection = "closed";
    this.render();
  }
}

export function createApp(root: HTMLElement, options: AppOptions): WandApp {
  return new WandApp(root, options);
}
