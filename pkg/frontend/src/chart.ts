/** Chart model: loss and generalization-ratio curves over training steps.
 *
 * The model is pure data so it can be tested without a canvas; rendering
 * maps it onto a 2D context. The G axis always carries a threshold line at
 * G = 1 separating memorization from generalization.
 */

import { MetricsFrame } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

export interface ThresholdAnnotation {
  kind: "threshold";
  axis: "g";
  value: number;
  label: string;
}

export interface ChartModel {
  steps: number[];
  trainLoss: Point[];
  testLoss: Point[];
  generalization: Point[];
  xDomain: [number, number];
  lossDomain: [number, number];
  gDomain: [number, number];
  annotations: ThresholdAnnotation[];
}

export const G_THRESHOLD: ThresholdAnnotation = {
  kind: "threshold",
  axis: "g",
  value: 1,
  label: "G = 1 — no generalization below",
};

/** Normalize frames into strictly increasing steps and compute axis domains. */
export function buildChartModel(frames: MetricsFrame[]): ChartModel {
  const ordered: MetricsFrame[] = [];
  for (const frame of frames) {
    const last = ordered[ordered.length - 1];
    if (last && frame.step <= last.step) continue;
    ordered.push(frame);
  }
  const steps = ordered.map((f) => f.step);
  const losses = ordered.flatMap((f) => [f.train_loss, f.test_loss]);
  const gs = ordered.map((f) => f.generalization);
  const lossMax = losses.length ? Math.max(...losses) : 1;
  const gMax = gs.length ? Math.max(...gs, 1) : 1;
  return {
    steps,
    trainLoss: ordered.map((f) => ({ x: f.step, y: f.train_loss })),
    testLoss: ordered.map((f) => ({ x: f.step, y: f.test_loss })),
    generalization: ordered.map((f) => ({ x: f.step, y: f.generalization })),
    xDomain: steps.length ? [steps[0], steps[steps.length - 1]] : [0, 1],
    lossDomain: [0, lossMax || 1],
    gDomain: [0, gMax * 1.05],
    annotations: [G_THRESHOLD],
  };
}

const TRAIN_COLOR = "#666666";
const TEST_COLOR = "#111111";
const G_COLOR = "#2166ac";
const THRESHOLD_COLOR = "#b2182b";

function toPixel(
  value: number,
  domain: [number, number],
  pixelSpan: number,
  invert = false
): number {
  const [lo, hi] = domain;
  const t = hi === lo ? 0 : (value - lo) / (hi - lo);
  return invert ? pixelSpan * (1 - t) : pixelSpan * t;
}

/** Draw the model onto a canvas; left axis loss, right axis G. */
export function renderChart(canvas: HTMLCanvasElement, model: ChartModel): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.font = "10px sans-serif";

  const drawSeries = (
    points: Point[],
    domain: [number, number],
    color: string,
    dashed = false
  ) => {
    if (points.length < 2) return;
    ctx.strokeStyle = color;
    ctx.setLineDash(dashed ? [4, 3] : []);
    ctx.beginPath();
    points.forEach((p, i) => {
      const x = toPixel(p.x, model.xDomain, width);
      const y = toPixel(p.y, domain, height, true);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();
    ctx.setLineDash([]);
  };

  drawSeries(model.trainLoss, model.lossDomain, TRAIN_COLOR);
  drawSeries(model.testLoss, model.lossDomain, TEST_COLOR, true);
  drawSeries(model.generalization, model.gDomain, G_COLOR);

  for (const annotation of model.annotations) {
    const y = toPixel(annotation.value, model.gDomain, height, true);
    ctx.strokeStyle = THRESHOLD_COLOR;
    ctx.setLineDash([2, 3]);
    ctx.beginPath();
    ctx.moveTo(0, y);
    ctx.lineTo(width, y);
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.fillStyle = THRESHOLD_COLOR;
    ctx.fillText(annotation.label, 4, Math.max(10, y - 3));
  }
}
