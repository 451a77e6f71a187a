// Shared fakes: a 2D context that records draw calls and a socket the tests
// drive by hand.

import { SocketLike } from "../src/app.js";
import { Draw2D } from "../src/view.js";

export interface Op {
  kind: string;
  args: number[];
  strokeStyle: string;
  fillStyle: string;
  lineWidth: number;
}

export class RecordingContext implements Draw2D {
  lineWidth = 1;
  strokeStyle: string | CanvasGradient | CanvasPattern = "";
  fillStyle: string | CanvasGradient | CanvasPattern = "";
  ops: Op[] = [];

  private log(kind: string, ...args: number[]) {
    this.ops.push({
      kind,
      args,
      strokeStyle: String(this.strokeStyle),
      fillStyle: String(this.fillStyle),
      lineWidth: this.lineWidth,
    });
  }

  clearRect(x: number, y: number, w: number, h: number) { this.log("clearRect", x, y, w, h); }
  fillRect(x: number, y: number, w: number, h: number) { this.log("fillRect", x, y, w, h); }
  beginPath() { this.log("beginPath"); }
  arc(x: number, y: number, r: number, a0: number, a1: number) { this.log("arc", x, y, r, a0, a1); }
  moveTo(x: number, y: number) { this.log("moveTo", x, y); }
  lineTo(x: number, y: number) { this.log("lineTo", x, y); }
  stroke() { this.log("stroke"); }
  fill() { this.log("fill"); }

  // Ops from the latest clearRect onward, i.e. the most recent frame.
  lastFrame(): Op[] {
    let start = 0;
    for (let i = 0; i < this.ops.length; i++) {
      if (this.ops[i].kind === "clearRect") start = i;
    }
    return this.ops.slice(start);
  }
}

// The moveTo/lineTo points of the stroked polyline drawn in the given style
// during the most recent frame. Returns null when no such stroke happened.
export function lastPolyline(ctx: RecordingContext, style: string): [number, number][] | null {
  const frame = ctx.lastFrame();
  let points: [number, number][] | null = null;
  let current: [number, number][] = [];
  for (const op of frame) {
    if (op.kind === "beginPath") current = [];
    else if (op.kind === "moveTo" || op.kind === "lineTo") {
      current.push([op.args[0], op.args[1]]);
    } else if (op.kind === "stroke" && op.strokeStyle === style && current.length > 0) {
      points = current;
    }
  }
  return points;
}

export function filledRects(ctx: RecordingContext, style: string): number[][] {
  return ctx.lastFrame()
    .filter((op) => op.kind === "fillRect" && op.fillStyle === style)
    .map((op) => op.args);
}

export function strokedArcs(ctx: RecordingContext, style: string): number[][] {
  const frame = ctx.lastFrame();
  const arcs: number[][] = [];
  let pending: number[] | null = null;
  for (const op of frame) {
    if (op.kind === "arc") pending = op.args;
    else if (op.kind === "stroke" && op.strokeStyle === style && pending) {
      arcs.push(pending);
      pending = null;
    } else if (op.kind === "beginPath") pending = null;
  }
  return arcs;
}

export class FakeSocket implements SocketLike {
  sent: string[] = [];
  closed = false;
  onopen: (() => void) | null = null;
  onmessage: ((ev: { data: unknown }) => void) | null = null;
  onclose: (() => void) | null = null;
  onerror: (() => void) | null = null;

  send(data: string) { this.sent.push(data); }
  close() {
    this.closed = true;
    this.onclose?.();
  }

  open() { this.onopen?.(); }
  receive(msg: unknown) { this.onmessage?.({ data: JSON.stringify(msg) }); }
  dropFromServer() { this.onclose?.(); }

  sentMessages(): any[] {
    return this.sent.map((s) => JSON.parse(s));
  }
}

export function waitFor(check: () => boolean, timeoutMs = 5000, what = "condition"):
    Promise<void> {
  const started = Date.now();
  return new Promise((resolve, reject) => {
    const poll = () => {
      if (check()) return resolve();
      if (Date.now() - started > timeoutMs) {
        return reject(new Error(`timed out waiting for ${what}`));
      }
      setTimeout(poll, 10);
    };
    poll();
  });
}

export function pointerEvent(type: string, x: number, y: number): Event {
  // happy-dom accepts MouseEvent for pointer listeners; clientX/Y carry the
  // canvas coordinates directly because the test canvas has a zero rect.
  return new MouseEvent(type, { clientX: x, clientY: y, bubbles: true });
}

// Minimal update factory for renderer and panel tests.
export function makeUpdate(partial: Partial<import("../src/protocol.js").SessionUpdate> = {}):
    import("../src/protocol.js").SessionUpdate {
  const width = 32;
  const height = 24;
  return {
    type: "update",
    frame_index: 0,
    phase: "idle",
    centroid: null,
    path: [],
    zones: {
      start: { cx: 4.8, cy: 12, r: 1.9, role: "start" },
      end: { cx: 27.2, cy: 12, r: 1.9, role: "end" },
    },
    accumulator: { width, height, rows: Array.from({ length: height }, () => [width]) },
    prediction: null,
    pins: null,
    ...partial,
  };
}
