// Message shapes for the /session WebSocket. The server is the single
// source of truth; everything here is parsing and validation, no
// recognition logic.

export type ClientMessage =
  | { type: "session_start"; width: number; height: number; config?: Record<string, number> }
  | { type: "pointer"; x: number; y: number }
  | { type: "pointer_absent" }
  | { type: "reset" };

export type Phase = "idle" | "tracing" | "complete";

export interface ZoneView {
  cx: number;
  cy: number;
  r: number;
  role: "start" | "end";
}

export interface Prediction {
  label: number;
  letter: string;
  scores: Record<string, number>;
}

export interface SessionUpdate {
  type: "update";
  frame_index: number;
  phase: Phase;
  centroid: [number, number] | null;
  path: [number, number][];
  zones: { start: ZoneView; end: ZoneView };
  accumulator: { width: number; height: number; rows: number[][] };
  prediction: Prediction | null;
  pins: Record<string, string> | null;
}

export interface ServerFailure {
  type: "error";
  code: "protocol" | "validation";
  message: string;
}

export type ServerMessage = SessionUpdate | ServerFailure;

function fail(why: string): never {
  throw new Error(`bad server message: ${why}`);
}

function asRecord(value: unknown, what: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    fail(`${what} is not an object`);
  }
  return value as Record<string, unknown>;
}

function asNumber(value: unknown, what: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) {
    fail(`${what} is not a finite number`);
  }
  return value;
}

function asPoint(value: unknown, what: string): [number, number] {
  if (!Array.isArray(value) || value.length !== 2) fail(`${what} is not [x, y]`);
  return [asNumber(value[0], `${what}[0]`), asNumber(value[1], `${what}[1]`)];
}

function asZone(value: unknown, what: string): ZoneView {
  const z = asRecord(value, what);
  const role = z.role;
  if (role !== "start" && role !== "end") fail(`${what}.role is ${String(role)}`);
  return {
    cx: asNumber(z.cx, `${what}.cx`),
    cy: asNumber(z.cy, `${what}.cy`),
    r: asNumber(z.r, `${what}.r`),
    role,
  };
}

function asUpdate(raw: Record<string, unknown>): SessionUpdate {
  const phase = raw.phase;
  if (phase !== "idle" && phase !== "tracing" && phase !== "complete") {
    fail(`phase is ${String(phase)}`);
  }
  const zones = asRecord(raw.zones, "zones");
  const acc = asRecord(raw.accumulator, "accumulator");
  if (!Array.isArray(acc.rows)) fail("accumulator.rows is not an array");
  const path = raw.path;
  if (!Array.isArray(path)) fail("path is not an array");

  let prediction: Prediction | null = null;
  if (raw.prediction != null) {
    const p = asRecord(raw.prediction, "prediction");
    if (typeof p.letter !== "string") fail("prediction.letter is not a string");
    prediction = {
      label: asNumber(p.label, "prediction.label"),
      letter: p.letter,
      scores: asRecord(p.scores, "prediction.scores") as Record<string, number>,
    };
  }
  let pins: Record<string, string> | null = null;
  if (raw.pins != null) {
    pins = asRecord(raw.pins, "pins") as Record<string, string>;
  }

  return {
    type: "update",
    frame_index: asNumber(raw.frame_index, "frame_index"),
    phase,
    centroid: raw.centroid == null ? null : asPoint(raw.centroid, "centroid"),
    path: path.map((p, i) => asPoint(p, `path[${i}]`)),
    zones: { start: asZone(zones.start, "zones.start"), end: asZone(zones.end, "zones.end") },
    accumulator: {
      width: asNumber(acc.width, "accumulator.width"),
      height: asNumber(acc.height, "accumulator.height"),
      rows: acc.rows as number[][],
    },
    prediction,
    pins,
  };
}

export function parseServerMessage(text: string): ServerMessage {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    fail("not valid JSON");
  }
  const msg = asRecord(raw, "message");
  if (msg.type === "error") {
    const code = msg.code;
    if (code !== "protocol" && code !== "validation") fail(`error code ${String(code)}`);
    if (typeof msg.message !== "string") fail("error message is not a string");
    return { type: "error", code, message: msg.message };
  }
  if (msg.type === "update") return asUpdate(msg);
  fail(`unknown type ${String(msg.type)}`);
}

// Run-length rows as sent by the server: per row, alternating run lengths
// starting with a zero-run, summing to the row width.
export function rleDecode(rows: number[][], width: number, height: number): boolean[][] {
  if (rows.length !== height) {
    throw new Error(`expected ${height} accumulator rows, got ${rows.length}`);
  }
  const out: boolean[][] = [];
  for (let r = 0; r < height; r++) {
    const runs = rows[r];
    const row = new Array<boolean>(width).fill(false);
    let pos = 0;
    let value = false;
    for (const run of runs) {
      if (run < 0) throw new Error(`row ${r} has a negative run`);
      if (value) row.fill(true, pos, pos + run);
      pos += run;
      value = !value;
    }
    if (pos !== width) {
      throw new Error(`row ${r} runs sum to ${pos}, not ${width}`);
    }
    out.push(row);
  }
  return out;
}
