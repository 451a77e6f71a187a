// Pure rendering of the latest server update. Nothing in here talks to the
// network or owns state; the app hands it an update and a 2D context.

import { Prediction, SessionUpdate, rleDecode } from "./protocol.js";

// Subset of CanvasRenderingContext2D the renderer touches, so tests can
// substitute a recording context.
export interface Draw2D {
  lineWidth: number;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  stroke(): void;
  fill(): void;
}

export const ACCUMULATOR_STYLE = "rgba(255, 255, 255, 0.35)";
export const START_ZONE_STYLE = "#2f9e44";
export const END_ZONE_STYLE = "#e03131";
export const PATH_STYLE = "#ffd43b";
export const CENTROID_STYLE = "#ffffff";
export const LED_PIN = "17";

function drawZone(ctx: Draw2D, cx: number, cy: number, r: number, style: string) {
  ctx.strokeStyle = style;
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.arc(cx, cy, r, 0, Math.PI * 2);
  ctx.stroke();
}

export function renderScene(ctx: Draw2D, update: SessionUpdate) {
  const { width, height, rows } = update.accumulator;
  ctx.clearRect(0, 0, width, height);

  // Cumulative blob image, semi-transparent so the stroke builds up visibly.
  ctx.fillStyle = ACCUMULATOR_STYLE;
  const bitmap = rleDecode(rows, width, height);
  for (let y = 0; y < height; y++) {
    const row = bitmap[y];
    let x = 0;
    while (x < width) {
      if (!row[x]) {
        x++;
        continue;
      }
      let end = x;
      while (end < width && row[end]) end++;
      ctx.fillRect(x, y, end - x, 1);
      x = end;
    }
  }

  drawZone(ctx, update.zones.start.cx, update.zones.start.cy, update.zones.start.r,
           START_ZONE_STYLE);
  drawZone(ctx, update.zones.end.cx, update.zones.end.cy, update.zones.end.r,
           END_ZONE_STYLE);

  if (update.path.length > 0) {
    ctx.strokeStyle = PATH_STYLE;
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(update.path[0][0], update.path[0][1]);
    for (let i = 1; i < update.path.length; i++) {
      ctx.lineTo(update.path[i][0], update.path[i][1]);
    }
    ctx.stroke();
  }

  if (update.centroid !== null) {
    ctx.fillStyle = CENTROID_STYLE;
    ctx.beginPath();
    ctx.arc(update.centroid[0], update.centroid[1], 3, 0, Math.PI * 2);
    ctx.fill();
  }
}

export type Connection = "connecting" | "connected" | "reconnecting" | "closed";

export interface ViewState {
  connection: Connection;
  update: SessionUpdate | null;
  prediction: Prediction | null;
  pins: Record<string, string> | null;
  lastError: string | null;
  decimation: number;
}

export interface PanelRefs {
  status: HTMLElement;
  phase: HTMLElement;
  frame: HTMLElement;
  pathLength: HTMLElement;
  sampling: HTMLElement;
  letter: HTMLElement;
  scores: HTMLElement;
  led: HTMLElement;
  ledLabel: HTMLElement;
  error: HTMLElement;
}

export function renderPanels(refs: PanelRefs, state: ViewState) {
  refs.status.textContent = state.connection;
  refs.status.dataset.connection = state.connection;

  const phase = state.update ? state.update.phase : "idle";
  refs.phase.textContent = phase;
  refs.phase.dataset.phase = phase;
  refs.frame.textContent = state.update ? String(state.update.frame_index) : "0";
  refs.pathLength.textContent = state.update ? String(state.update.path.length) : "0";
  refs.sampling.textContent = `1 of ${state.decimation} moves`;

  if (state.prediction) {
    refs.letter.textContent = state.prediction.letter;
    const parts = Object.entries(state.prediction.scores)
      .sort(([a], [b]) => Number(a) - Number(b))
      .map(([label, score]) => `${label}: ${score.toFixed(3)}`);
    refs.scores.textContent = parts.join("  ");
  } else {
    refs.letter.textContent = "·";
    refs.scores.textContent = "no gesture completed yet";
  }

  const level = state.pins ? state.pins[LED_PIN] : undefined;
  refs.led.classList.toggle("on", level === "HIGH");
  refs.led.classList.toggle("off", level !== "HIGH");
  refs.ledLabel.textContent =
    level === undefined ? `pin ${LED_PIN} untouched` : `pin ${LED_PIN} ${level}`;

  refs.error.textContent = state.lastError ?? "";
}
