import assert from "node:assert/strict";
import { test } from "node:test";

import { G_THRESHOLD, buildChartModel } from "../src/chart.js";
import { MetricsFrame } from "../src/types.js";

function frame(step: number, g: number): MetricsFrame {
  return {
    step,
    train_loss: 1 / (step + 1),
    test_loss: 1.2 / (step + 1),
    accuracy: 0.5,
    acc_positive: 0.5,
    acc_negative: 0.5,
    mec_bits: 12,
    demand_bits: 6,
    generalization: g,
    balance: 0.5,
    bias_flagged: false,
  };
}

test("a 500-frame run yields a strictly increasing step axis", () => {
  const frames = Array.from({ length: 500 }, (_, i) => frame(i * 5, i / 100));
  const model = buildChartModel(frames);
  assert.equal(model.steps.length, 500);
  for (let i = 1; i < model.steps.length; i++) {
    assert.ok(model.steps[i] > model.steps[i - 1]);
  }
  assert.deepEqual(model.xDomain, [0, 499 * 5]);
  assert.equal(model.trainLoss.length, 500);
  assert.equal(model.generalization.length, 500);
});

test("duplicate and out-of-order steps are dropped, not plotted", () => {
  const frames = [frame(0, 0.1), frame(10, 0.2), frame(10, 0.3), frame(5, 0.4), frame(20, 0.5)];
  const model = buildChartModel(frames);
  assert.deepEqual(model.steps, [0, 10, 20]);
});

test("the G = 1 threshold annotation is always present", () => {
  const model = buildChartModel([frame(0, 0.2), frame(10, 2.0)]);
  const thresholds = model.annotations.filter((a) => a.kind === "threshold");
  assert.equal(thresholds.length, 1);
  assert.equal(thresholds[0].value, 1);
  assert.match(thresholds[0].label, /no generalization/);
  assert.equal(thresholds[0], G_THRESHOLD);
  // G axis always spans the threshold so the line is visible
  assert.ok(model.gDomain[0] <= 1 && 1 <= model.gDomain[1]);
});

test("empty input still yields a drawable model", () => {
  const model = buildChartModel([]);
  assert.deepEqual(model.steps, []);
  assert.equal(model.annotations.length, 1);
  assert.ok(model.xDomain[1] > model.xDomain[0]);
});
